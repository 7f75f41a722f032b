#include "morsehom/chain_complex.hpp"

#include "morsehom/errors.hpp"

namespace morsehom {

ChainComplex build_complex(const CriticalSet& crits, const ConnectionMatrix& conns) {
    for (const auto& cp : crits.points)
        if (cp.degenerate)
            throw DegenerateGeneratorError("build_complex: degenerate generator id " +
                                           std::to_string(cp.id) +
                                           "; re-perturb with a fresh seed");
    ChainComplex cx;
    cx.generators[0] = conns.ids0;
    cx.generators[1] = conns.ids1;
    cx.generators[2] = conns.ids2;
    cx.d1 = conns.d1;
    cx.d2 = conns.d2;
    return cx;
}

bool verify_d_squared(const ChainComplex& cx) {
    if (cx.d1.cols() == 0 || cx.d2.cols() == 0) return true;
    return (cx.d1 * cx.d2).is_zero();
}

HomologyResult homology(const ChainComplex& cx) {
    if (!verify_d_squared(cx))
        throw NotAComplexError("homology: boundary operators do not square to zero");
    HomologyResult out;
    int r1 = cx.d1.rank();
    int r2 = cx.d2.rank();
    out.generator_counts = {cx.dim(0), cx.dim(1), cx.dim(2)};
    out.betti[0] = cx.dim(0) - r1;
    out.betti[1] = cx.dim(1) - r1 - r2;
    out.betti[2] = cx.dim(2) - r2;
    return out;
}

int euler_characteristic(const ChainComplex& cx) {
    return cx.dim(0) - cx.dim(1) + cx.dim(2);
}

namespace {

GF2Matrix boundary_into(const ChainComplex& cx, int degree) {
    // d_{degree+1}, mapping C_{degree+1} -> C_degree; zero when out of range.
    if (degree == 0) return cx.d1;
    if (degree == 1) return cx.d2;
    return GF2Matrix(cx.dim(2), 0);
}

GF2Matrix boundary_outof(const ChainComplex& cx, int degree) {
    if (degree == 1) return cx.d1;
    if (degree == 2) return cx.d2;
    return GF2Matrix(0, cx.dim(0));
}

std::vector<bool> column_of(const GF2Matrix& m, int j) {
    std::vector<bool> v(m.rows());
    for (int i = 0; i < m.rows(); ++i) v[i] = m.at(i, j);
    return v;
}

}  // namespace

HomologyBasis homology_basis(const ChainComplex& cx, int degree) {
    int n = cx.dim(degree);
    GF2Matrix d_out = boundary_outof(cx, degree);
    GF2Matrix d_in = boundary_into(cx, degree);

    // Independent columns of d_in span the boundary space.
    std::vector<std::vector<bool>> bnd_cols;
    {
        std::vector<std::vector<bool>> acc;
        int rank = 0;
        for (int j = 0; j < d_in.cols(); ++j) {
            acc.push_back(column_of(d_in, j));
            GF2Matrix m = gf2_from_columns(n, acc);
            if (m.rank() > rank) { ++rank; } else { acc.pop_back(); }
        }
        bnd_cols = std::move(acc);
    }

    // Cycle space.
    std::vector<std::vector<bool>> cycles;
    if (degree == 0) {
        for (int j = 0; j < n; ++j) {
            std::vector<bool> e(n, false);
            e[j] = true;
            cycles.push_back(std::move(e));
        }
    } else {
        cycles = gf2_nullspace(d_out);
    }

    // Cycle columns independent modulo the boundaries.
    std::vector<std::vector<bool>> reps;
    {
        std::vector<std::vector<bool>> acc = bnd_cols;
        int rank = gf2_from_columns(n, acc).rank();
        for (auto& z : cycles) {
            acc.push_back(z);
            GF2Matrix m = gf2_from_columns(n, acc);
            if (m.rank() > rank) {
                ++rank;
                reps.push_back(z);
            } else {
                acc.pop_back();
            }
        }
    }

    HomologyBasis out;
    out.reps = gf2_from_columns(n, reps);
    out.boundaries = gf2_from_columns(n, bnd_cols);
    return out;
}

GF2Matrix induced_map(const GF2Matrix& phi_degree, const ChainComplex& cx_alpha,
                      const ChainComplex& cx_beta, int degree) {
    HomologyBasis ha = homology_basis(cx_alpha, degree);
    HomologyBasis hb = homology_basis(cx_beta, degree);
    int h_a = ha.reps.cols(), h_b = hb.reps.cols();
    GF2Matrix out(h_b, h_a);

    // Solve [B_beta | R_beta] x = phi * rep; the R-part is the induced column.
    int nb = cx_beta.dim(degree);
    int bcols = hb.boundaries.cols();
    GF2Matrix system(nb, bcols + h_b);
    for (int j = 0; j < bcols; ++j)
        for (int i = 0; i < nb; ++i) system.set(i, j, hb.boundaries.at(i, j));
    for (int j = 0; j < h_b; ++j)
        for (int i = 0; i < nb; ++i) system.set(i, bcols + j, hb.reps.at(i, j));

    for (int j = 0; j < h_a; ++j) {
        std::vector<bool> rep(cx_alpha.dim(degree));
        for (int i = 0; i < cx_alpha.dim(degree); ++i) rep[i] = ha.reps.at(i, j);
        std::vector<bool> v = phi_degree.apply(rep);
        std::vector<bool> x;
        if (!gf2_solve(system, v, x))
            throw NotAComplexError("induced_map: chain map image is not a cycle mod boundaries");
        for (int i = 0; i < h_b; ++i) out.set(i, j, x[bcols + i]);
    }
    return out;
}

}  // namespace morsehom
