#pragma once

#include <array>
#include <string>
#include <vector>

#include "morsehom/field.hpp"
#include "morsehom/geometry.hpp"

namespace morsehom {

struct ToleranceSet {
    double grad_tol = 1e-10;      // relative to gradient_scale over the ball
    double merge_tol_rel = 1e-6;  // * delta
    double degen_tol_rel = 1e-6;  // * hessian_scale
    int newton_max_iter = 100;
    int newton_max_backtrack = 40;
};

/// Tolerances resolved against a concrete (field, ball) pair.
struct ResolvedTolerances {
    double grad_tol_abs = 0.0;
    double merge_tol = 0.0;
    double degen_tol = 0.0;
    double grad_scale = 1.0;
    double hess_scale = 1.0;
};
ResolvedTolerances resolve_tolerances(const ScalarField& f, const Ball& ball,
                                      const ToleranceSet& tols = {});

struct CriticalPoint {
    Vec2 location;
    double value = 0.0;
    std::array<double, 2> hess_eigenvalues{0.0, 0.0};  // ascending
    std::array<Vec2, 2> hess_eigenvectors{};           // matching order
    int morse_index = 0;                               // # eigenvalues < -degen_tol
    bool degenerate = false;                           // min |eigenvalue| < degen_tol
    int id = -1;
};

struct SearchDiagnostics {
    int seeds = 0;
    int converged = 0;
    int discarded = 0;         // diverged, left the search region, or merged
    int budget_exceeded = 0;   // NewtonBudgetExceeded, reported per-seed
};

struct CriticalSet {
    std::vector<CriticalPoint> points;
    std::string field_descriptor;
    ResolvedTolerances tolerances;
    SearchDiagnostics diagnostics;

    const CriticalPoint* by_id(int id) const;
    std::vector<int> ids_of_index(int morse_index) const;
    double min_pairwise_distance() const;  // +inf when fewer than 2 points
};

/// Newton search for all zeros of grad f in B_{2 delta}, seeded from a
/// grid_n x grid_n grid. Roots are merged within merge_tol, classified, and
/// sorted deterministically (ids are positions in that order).
CriticalSet find_critical_points(const ScalarField& f, const Ball& ball, int grid_n,
                                 const ToleranceSet& tols = {});

/// Classify a located critical point via the closed-form 2x2 eigensolver.
/// Throws NotCriticalError when |grad f(p)| exceeds grad_tol_abs.
CriticalPoint classify(const ScalarField& f, const Vec2& p, double degen_tol,
                       double grad_tol_abs);

/// True iff the (unperturbed) field has exactly one critical point in
/// B_{2 delta} and it lies within merge_tol of the ball center.
bool validate_isolation(const ScalarField& base, const Ball& ball, int grid_n,
                        const ToleranceSet& tols = {});

}  // namespace morsehom
