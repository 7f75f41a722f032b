#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "morsehom/critical_points.hpp"
#include "morsehom/field.hpp"
#include "morsehom/geometry.hpp"

namespace morsehom {

struct LagrangeParams {
    double m1 = 0.5;
    double m2 = 0.5;
    double eps = 1.0;

    void validate() const;  // BadParameterError unless all > 0
};

/// The three critical points on the q1-axis, one per interval
/// (-1/2, 1/2), (1/2, inf), (-inf, -1/2) — returned in the order
/// [middle, right, left] = [l1, l2, l3]. Bracketing bisection inside the
/// window [-5, 5] followed by Newton polish; RootCountMismatchError when an
/// interval fails to bracket a root.
std::array<Vec2, 3> collinear_points(const LagrangeParams& params);

/// Closed-form Hessian of V on the axis: diagonal with
///   d2V/dq1^2 = -2 m1/|q1+1/2|^3 - 2 m2/|q1-1/2|^3 - eps
///   d2V/dq2^2 =    m1/|q1+1/2|^3 +   m2/|q1-1/2|^3 - eps
/// (the mixed partial vanishes by reflection symmetry).
Mat2 collinear_hessian(const LagrangeParams& params, double q1);

/// All five critical points: the three collinear ones plus the off-axis
/// mirror pair, classified and ordered [l1..l5] (l4 has q2 > 0).
/// Throws CensusMismatchError when the 2D search does not find exactly five.
std::vector<CriticalPoint> locate_all(const LagrangeParams& params, const Ball& window,
                                      int grid_n = 48, const ToleranceSet& tols = {});

/// Reference mass for the homotopy start: max(m1, m2, eps/8), which
/// guarantees 16 m - eps > 0 (so the middle collinear point starts as a
/// saddle) and keeps the interpolated masses positive.
double reference_mass(const LagrangeParams& params);

/// Mass homotopy U^t: masses m + t (m_i - m) with m = reference_mass;
/// t = 0 is the equal-mass field, t = 1 the target parameters.
ScalarField equal_mass_homotopy(const LagrangeParams& params, double t);

struct LagrangePointReport {
    std::string label;  // "l1".."l5"
    CriticalPoint at_start;
    CriticalPoint at_end;
    std::array<int, 3> betti_start{0, 0, 0};
    std::array<int, 3> betti_end{0, 0, 0};
    std::array<int, 3> expected{0, 0, 0};
    bool matches_expected = false;
    bool betti_invariant = false;
    std::string classification;  // "saddle", "maximum", or "degenerate"
    std::vector<Vec2> track;     // location at each accepted t
};

struct LagrangeReport {
    LagrangeParams params;
    double ref_mass = 0.0;
    std::vector<double> t_grid;  // accepted homotopy parameters (0 ... 1)
    std::vector<LagrangePointReport> points;
    bool census_ok = false;
    bool all_match = false;
    uint64_t seed = 0;
    double delta = 0.0;
};

struct PipelineOptions {
    int census_grid = 48;
    int analyze_grid = 16;
    int isolation_grid = 12;
    double min_t_step = 1.0 / 256.0;
    ToleranceSet tols;
};

/// Full reproduction pipeline: betti vectors of every l_i at the equal-mass
/// end, a tracked mass homotopy with per-step isolation validation, and the
/// betti vectors at the target parameters. IsolationLostError when points
/// collide or tracking fails below the minimum t step.
LagrangeReport theorem_a_pipeline(const LagrangeParams& params, double delta, int t_steps,
                                  uint64_t seed, const PipelineOptions& opts = {});

}  // namespace morsehom
