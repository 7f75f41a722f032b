#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace morsehom {

/// Dense GF(2) matrix, bit-packed rows. Complexes here have at most tens of
/// generators, so plain Gaussian elimination is all we need.
class GF2Matrix {
public:
    GF2Matrix() = default;
    GF2Matrix(int rows, int cols);

    static GF2Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool at(int r, int c) const;
    void set(int r, int c, bool v);
    void flip(int r, int c);

    GF2Matrix operator*(const GF2Matrix& rhs) const;  // throws ShapeMismatchError
    GF2Matrix operator+(const GF2Matrix& rhs) const;  // XOR
    bool operator==(const GF2Matrix& rhs) const;

    bool is_zero() const;
    int rank() const;

    /// Column vector y = A x (x given as bit vector of length cols()).
    std::vector<bool> apply(const std::vector<bool>& x) const;

    std::string to_string() const;

private:
    int rows_ = 0, cols_ = 0;
    int words_per_row_ = 0;
    std::vector<uint64_t> bits_;

    void xor_row(int dst, int src);
    friend int gf2_column_rank_impl(GF2Matrix m);
    friend std::vector<std::vector<bool>> gf2_nullspace(const GF2Matrix& a);
    friend bool gf2_solve(const GF2Matrix& a, const std::vector<bool>& b,
                          std::vector<bool>& x);
};

/// Basis of ker(A) as column bit-vectors.
std::vector<std::vector<bool>> gf2_nullspace(const GF2Matrix& a);

/// Solve A x = b over GF(2); returns false when inconsistent.
bool gf2_solve(const GF2Matrix& a, const std::vector<bool>& b, std::vector<bool>& x);

/// Matrix whose columns are the given bit-vectors (all of length dim).
GF2Matrix gf2_from_columns(int dim, const std::vector<std::vector<bool>>& cols);

}  // namespace morsehom
