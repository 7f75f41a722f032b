#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "morsehom/connections.hpp"
#include "morsehom/gf2.hpp"

namespace morsehom {

/// GF(2) chain complex graded by Morse index (degrees 0, 1, 2 in the plane).
struct ChainComplex {
    std::array<std::vector<int>, 3> generators;  // critical point ids per degree
    GF2Matrix d1;  // |gen0| x |gen1|
    GF2Matrix d2;  // |gen1| x |gen2|

    int dim(int degree) const { return static_cast<int>(generators[degree].size()); }
};

struct Provenance {
    std::string field_descriptor;
    uint64_t perturbation_seed = 0;
    double perturbation_amplitude = 0.0;
    double grad_tol_abs = 0.0;
    double merge_tol = 0.0;
    double degen_tol = 0.0;
};

struct HomologyResult {
    std::array<int, 3> betti{0, 0, 0};
    std::array<int, 3> generator_counts{0, 0, 0};
    Provenance provenance;
};

/// Assemble the complex from a census and its connection counts.
/// Throws DegenerateGeneratorError when any generator is degenerate.
ChainComplex build_complex(const CriticalSet& crits, const ConnectionMatrix& conns);

/// d1 * d2 = 0 over GF(2) (the composite through the other degrees is trivially zero).
bool verify_d_squared(const ChainComplex& cx);

/// Betti numbers by rank-nullity over GF(2).
/// Throws NotAComplexError unless verify_d_squared holds.
HomologyResult homology(const ChainComplex& cx);

/// Euler characteristic from generator counts (= alternating betti sum for
/// any true complex; used as a cross-check).
int euler_characteristic(const ChainComplex& cx);

/// Cycle representatives of H_degree: columns are chain vectors spanning a
/// complement of im(d_{degree+1}) inside ker(d_degree).
struct HomologyBasis {
    GF2Matrix reps;        // n_degree x betti_degree
    GF2Matrix boundaries;  // n_degree x rank(d_{degree+1})
};
HomologyBasis homology_basis(const ChainComplex& cx, int degree);

/// Matrix of the map induced on H_degree by a chain map phi_degree
/// (shape betti_degree(beta) x betti_degree(alpha)). Throws NotAComplexError
/// when phi does not send cycles to cycles modulo boundaries.
GF2Matrix induced_map(const GF2Matrix& phi_degree, const ChainComplex& cx_alpha,
                      const ChainComplex& cx_beta, int degree);

}  // namespace morsehom
