#include "morsehom/gf2.hpp"

#include <algorithm>

#include "morsehom/errors.hpp"

namespace morsehom {

GF2Matrix::GF2Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64),
      bits_(static_cast<size_t>(rows) * words_per_row_, 0) {}

GF2Matrix GF2Matrix::identity(int n) {
    GF2Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

bool GF2Matrix::at(int r, int c) const {
    return (bits_[static_cast<size_t>(r) * words_per_row_ + c / 64] >> (c % 64)) & 1ULL;
}

void GF2Matrix::set(int r, int c, bool v) {
    uint64_t& w = bits_[static_cast<size_t>(r) * words_per_row_ + c / 64];
    uint64_t mask = 1ULL << (c % 64);
    w = v ? (w | mask) : (w & ~mask);
}

void GF2Matrix::flip(int r, int c) {
    bits_[static_cast<size_t>(r) * words_per_row_ + c / 64] ^= 1ULL << (c % 64);
}

void GF2Matrix::xor_row(int dst, int src) {
    uint64_t* d = &bits_[static_cast<size_t>(dst) * words_per_row_];
    const uint64_t* s = &bits_[static_cast<size_t>(src) * words_per_row_];
    for (int w = 0; w < words_per_row_; ++w) d[w] ^= s[w];
}

GF2Matrix GF2Matrix::operator*(const GF2Matrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw ShapeMismatchError("GF2 multiply: " + std::to_string(cols_) + " vs " +
                                 std::to_string(rhs.rows_));
    GF2Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            if (!at(i, k)) continue;
            const uint64_t* src = &rhs.bits_[static_cast<size_t>(k) * rhs.words_per_row_];
            uint64_t* dst = &out.bits_[static_cast<size_t>(i) * out.words_per_row_];
            for (int w = 0; w < out.words_per_row_; ++w) dst[w] ^= src[w];
        }
    }
    return out;
}

GF2Matrix GF2Matrix::operator+(const GF2Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw ShapeMismatchError("GF2 add: shape mismatch");
    GF2Matrix out = *this;
    for (size_t i = 0; i < bits_.size(); ++i) out.bits_[i] ^= rhs.bits_[i];
    return out;
}

bool GF2Matrix::operator==(const GF2Matrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && bits_ == rhs.bits_;
}

bool GF2Matrix::is_zero() const {
    return std::all_of(bits_.begin(), bits_.end(), [](uint64_t w) { return w == 0; });
}

int GF2Matrix::rank() const {
    GF2Matrix m = *this;
    int rank = 0;
    for (int c = 0; c < m.cols_ && rank < m.rows_; ++c) {
        int pivot = -1;
        for (int r = rank; r < m.rows_; ++r)
            if (m.at(r, c)) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int w = 0; w < m.words_per_row_; ++w)
                std::swap(m.bits_[static_cast<size_t>(pivot) * m.words_per_row_ + w],
                          m.bits_[static_cast<size_t>(rank) * m.words_per_row_ + w]);
        for (int r = 0; r < m.rows_; ++r)
            if (r != rank && m.at(r, c)) m.xor_row(r, rank);
        ++rank;
    }
    return rank;
}

std::vector<bool> GF2Matrix::apply(const std::vector<bool>& x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw ShapeMismatchError("GF2 apply: vector length mismatch");
    std::vector<bool> y(rows_, false);
    for (int i = 0; i < rows_; ++i) {
        bool acc = false;
        for (int j = 0; j < cols_; ++j) acc = acc != (at(i, j) && x[j]);
        y[i] = acc;
    }
    return y;
}

std::string GF2Matrix::to_string() const {
    std::string s;
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) s += at(i, j) ? '1' : '0';
        s += '\n';
    }
    return s;
}

std::vector<std::vector<bool>> gf2_nullspace(const GF2Matrix& a) {
    GF2Matrix m = a;
    int rank = 0;
    std::vector<int> pivot_col;
    std::vector<bool> is_pivot(m.cols_, false);
    for (int c = 0; c < m.cols_ && rank < m.rows_; ++c) {
        int pivot = -1;
        for (int r = rank; r < m.rows_; ++r)
            if (m.at(r, c)) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int w = 0; w < m.words_per_row_; ++w)
                std::swap(m.bits_[static_cast<size_t>(pivot) * m.words_per_row_ + w],
                          m.bits_[static_cast<size_t>(rank) * m.words_per_row_ + w]);
        for (int r = 0; r < m.rows_; ++r)
            if (r != rank && m.at(r, c)) m.xor_row(r, rank);
        pivot_col.push_back(c);
        is_pivot[c] = true;
        ++rank;
    }
    std::vector<std::vector<bool>> basis;
    for (int c = 0; c < m.cols_; ++c) {
        if (is_pivot[c]) continue;
        std::vector<bool> v(m.cols_, false);
        v[c] = true;
        for (int r = 0; r < rank; ++r)
            if (m.at(r, c)) v[pivot_col[r]] = true;
        basis.push_back(std::move(v));
    }
    return basis;
}

bool gf2_solve(const GF2Matrix& a, const std::vector<bool>& b, std::vector<bool>& x) {
    if (static_cast<int>(b.size()) != a.rows_)
        throw ShapeMismatchError("gf2_solve: rhs length mismatch");
    // Eliminate on [A | b].
    GF2Matrix m(a.rows_, a.cols_ + 1);
    for (int i = 0; i < a.rows_; ++i) {
        for (int j = 0; j < a.cols_; ++j) m.set(i, j, a.at(i, j));
        m.set(i, a.cols_, b[i]);
    }
    int rank = 0;
    std::vector<int> pivot_col;
    for (int c = 0; c < a.cols_ && rank < m.rows_; ++c) {
        int pivot = -1;
        for (int r = rank; r < m.rows_; ++r)
            if (m.at(r, c)) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int w = 0; w < m.words_per_row_; ++w)
                std::swap(m.bits_[static_cast<size_t>(pivot) * m.words_per_row_ + w],
                          m.bits_[static_cast<size_t>(rank) * m.words_per_row_ + w]);
        for (int r = 0; r < m.rows_; ++r)
            if (r != rank && m.at(r, c)) m.xor_row(r, rank);
        pivot_col.push_back(c);
        ++rank;
    }
    for (int r = rank; r < m.rows_; ++r)
        if (m.at(r, a.cols_)) return false;  // inconsistent
    x.assign(a.cols_, false);
    for (int r = 0; r < rank; ++r) x[pivot_col[r]] = m.at(r, a.cols_);
    return true;
}

GF2Matrix gf2_from_columns(int dim, const std::vector<std::vector<bool>>& cols) {
    GF2Matrix m(dim, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (static_cast<int>(cols[j].size()) != dim)
            throw ShapeMismatchError("gf2_from_columns: column length mismatch");
        for (int i = 0; i < dim; ++i) m.set(i, static_cast<int>(j), cols[j][i]);
    }
    return m;
}

}  // namespace morsehom
