#include "morsehom/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morsehom/errors.hpp"
#include "morsehom/local_homology.hpp"
#include "morsehom/rng.hpp"

namespace morsehom {

void LagrangeParams::validate() const {
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(eps > 0.0))
        throw BadParameterError("lagrange parameters must satisfy m1, m2, eps > 0");
}

namespace {

// dV/dq1 restricted to the axis.
double axis_gradient(const LagrangeParams& p, double q) {
    double a = q + 0.5, b = q - 0.5;
    return p.m1 * a / std::pow(std::fabs(a), 3.0) + p.m2 * b / std::pow(std::fabs(b), 3.0) -
           p.eps * q;
}

double bisect_axis_root(const LagrangeParams& p, double lo, double hi) {
    double flo = axis_gradient(p, lo), fhi = axis_gradient(p, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw RootCountMismatchError("axis interval [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "] does not bracket a root");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = axis_gradient(p, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
        else { hi = mid; }
        if (hi - lo < 1e-15 * std::max(1.0, std::fabs(lo))) break;
    }
    // Newton polish: the axis derivative d2V/dq1^2 is strictly negative, so
    // the iteration cannot stall.
    double q = 0.5 * (lo + hi);
    for (int it = 0; it < 30; ++it) {
        double g = axis_gradient(p, q);
        double dg = collinear_hessian(p, q).xx;
        double step = g / dg;
        q -= step;
        if (std::fabs(step) < 1e-15 * std::max(1.0, std::fabs(q))) break;
    }
    return q;
}

}  // namespace

std::array<Vec2, 3> collinear_points(const LagrangeParams& params) {
    params.validate();
    const double pad = 1e-6, window = 5.0;
    double middle = bisect_axis_root(params, -0.5 + pad, 0.5 - pad);
    double right = bisect_axis_root(params, 0.5 + pad, window);
    double left = bisect_axis_root(params, -window, -0.5 - pad);
    return {Vec2{middle, 0.0}, Vec2{right, 0.0}, Vec2{left, 0.0}};
}

Mat2 collinear_hessian(const LagrangeParams& params, double q1) {
    params.validate();
    double a = std::fabs(q1 + 0.5), b = std::fabs(q1 - 0.5);
    if (a < 1e-12 || b < 1e-12)
        throw SingularPointError("collinear hessian evaluated at a fixed center");
    double ia = 1.0 / (a * a * a), ib = 1.0 / (b * b * b);
    return Mat2{-2.0 * params.m1 * ia - 2.0 * params.m2 * ib - params.eps, 0.0,
                params.m1 * ia + params.m2 * ib - params.eps};
}

std::vector<CriticalPoint> locate_all(const LagrangeParams& params, const Ball& window,
                                      int grid_n, const ToleranceSet& tols) {
    params.validate();
    ScalarField field = lagrange_potential(params.m1, params.m2, params.eps);
    std::array<Vec2, 3> axis = collinear_points(params);

    CriticalSet cs = find_critical_points(field, window, grid_n, tols);
    if (cs.points.size() != 5)
        throw CensusMismatchError("expected five critical points, found " +
                                  std::to_string(cs.points.size()));

    const double axis_tol = 1e-6;
    std::vector<CriticalPoint> off;
    for (const auto& cp : cs.points)
        if (std::fabs(cp.location.y) > axis_tol) off.push_back(cp);
    if (off.size() != 2)
        throw CensusMismatchError("expected two off-axis points, found " +
                                  std::to_string(off.size()));
    if (off[0].location.y < off[1].location.y) std::swap(off[0], off[1]);

    // Axis locations come from the 1D bracketing path; classify them with the
    // generic machinery so both code paths stay comparable.
    std::vector<CriticalPoint> out;
    for (const Vec2& q : axis)
        out.push_back(classify(field, q, cs.tolerances.degen_tol, cs.tolerances.grad_tol_abs));
    out.push_back(off[0]);
    out.push_back(off[1]);
    for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

double reference_mass(const LagrangeParams& params) {
    return std::max({params.m1, params.m2, params.eps / 8.0});
}

ScalarField equal_mass_homotopy(const LagrangeParams& params, double t) {
    params.validate();
    double m = reference_mass(params);
    double ma = m + t * (params.m1 - m);
    double mb = m + t * (params.m2 - m);
    if (!(ma > 0.0) || !(mb > 0.0))
        throw BadParameterError("mass homotopy produced a non-positive mass");
    ScalarField f = lagrange_potential(ma, mb, params.eps);
    f.descriptor = "lagrange-homotopy(t=" + std::to_string(t) + ",m=" + std::to_string(m) +
                   ")";
    return f;
}

namespace {

bool newton_polish(const ScalarField& f, Vec2& q, double grad_tol_abs, double leash) {
    Vec2 start = q;
    for (int it = 0; it < 80; ++it) {
        Vec2 g = f.grad_fn(q);
        if (g.norm() <= grad_tol_abs) return true;
        Mat2 h = f.hess_fn(q);
        double det = h.det();
        if (std::fabs(det) < 1e-30) return false;
        Vec2 step{-(h.yy * g.x - h.xy * g.y) / det, -(h.xx * g.y - h.xy * g.x) / det};
        q += step;
        if (dist(q, start) > leash) return false;
    }
    return false;
}

double min_pair_distance(const std::vector<Vec2>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            best = std::min(best, dist(pts[i], pts[j]));
    return best;
}

double tracking_radius(const ScalarField& f, const Vec2& q, double delta,
                       const std::vector<Vec2>& all) {
    double r = std::min(delta, min_pair_distance(all) / 3.0);
    double sd = f.singular_distance(q);
    return std::min(r, 0.45 * sd);
}

std::array<int, 3> expected_betti(int point_index) {
    return point_index < 3 ? std::array<int, 3>{0, 1, 0} : std::array<int, 3>{0, 0, 1};
}

}  // namespace

LagrangeReport theorem_a_pipeline(const LagrangeParams& params, double delta, int t_steps,
                                  uint64_t seed, const PipelineOptions& opts) {
    params.validate();
    if (t_steps < 2) throw BadParameterError("theorem_a_pipeline: t_steps must be >= 2");
    if (!(delta > 0.0)) throw BadParameterError("theorem_a_pipeline: delta must be > 0");

    LagrangeReport report;
    report.params = params;
    report.ref_mass = reference_mass(params);
    report.seed = seed;
    report.delta = delta;

    const Ball window{Vec2{0.0, 0.0}, 1.5};
    LagrangeParams equal{report.ref_mass, report.ref_mass, params.eps};

    // Census and per-point homology at the equal-mass end.
    std::vector<CriticalPoint> start_points =
        locate_all(equal, window, opts.census_grid, opts.tols);
    std::vector<Vec2> locations;
    for (const auto& cp : start_points) locations.push_back(cp.location);

    ScalarField f0 = equal_mass_homotopy(params, 0.0);
    report.points.resize(5);
    for (int i = 0; i < 5; ++i) {
        auto& pr = report.points[i];
        pr.label = "l" + std::to_string(i + 1);
        pr.at_start = start_points[i];
        pr.expected = expected_betti(i);
        pr.track.push_back(start_points[i].location);

        AnalyzeOptions a;
        a.ball = Ball{start_points[i].location,
                      tracking_radius(f0, start_points[i].location, delta, locations)};
        a.grid_n = opts.analyze_grid;
        a.seed = derive_seed(seed, static_cast<uint64_t>(i));
        a.tols = opts.tols;
        AnalyzeResult res = analyze_local_homology(f0, a);
        pr.betti_start = res.homology.betti;
    }
    report.t_grid.push_back(0.0);

    // March the homotopy, tracking each point and re-validating isolation.
    double t = 0.0;
    double step = 1.0 / t_steps;
    while (t < 1.0 - 1e-12) {
        double trial = std::min(1.0, t + step);
        ScalarField ft = equal_mass_homotopy(params, trial);
        ResolvedTolerances rt =
            resolve_tolerances(ft, Ball{Vec2{0.0, 0.0}, 1.5}, opts.tols);

        std::vector<Vec2> moved = locations;
        double guard = min_pair_distance(locations) / 3.0;
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) {
            ok = newton_polish(ft, moved[i], rt.grad_tol_abs, guard);
        }
        if (ok) {
            for (int i = 0; i < 5 && ok; ++i) {
                Ball b{moved[i], tracking_radius(ft, moved[i], delta, moved)};
                ok = validate_isolation(ft, b, opts.isolation_grid, opts.tols);
            }
        }
        if (!ok) {
            step *= 0.5;
            if (step < opts.min_t_step)
                throw IsolationLostError(
                    "isolation lost near t = " + std::to_string(trial) +
                    "; homotopy step fell below 1/256");
            continue;
        }
        t = trial;
        locations = moved;
        report.t_grid.push_back(t);
        for (int i = 0; i < 5; ++i) report.points[i].track.push_back(locations[i]);
    }

    // Census and homology at the target parameters.
    std::vector<CriticalPoint> end_points = locate_all(params, window, opts.census_grid, opts.tols);
    report.census_ok = true;
    ScalarField f1 = equal_mass_homotopy(params, 1.0);
    report.all_match = true;
    for (int i = 0; i < 5; ++i) {
        auto& pr = report.points[i];
        // Match the tracked location against the fresh census.
        const CriticalPoint* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& cp : end_points) {
            double d = dist(cp.location, locations[i]);
            if (d < best_d) { best_d = d; best = &cp; }
        }
        if (best == nullptr || best_d > 1e-4)
            throw CensusMismatchError("tracked point " + pr.label +
                                      " does not match the final census");
        pr.at_end = *best;

        AnalyzeOptions a;
        a.ball = Ball{pr.at_end.location,
                      tracking_radius(f1, pr.at_end.location, delta, locations)};
        a.grid_n = opts.analyze_grid;
        a.seed = derive_seed(seed, 100 + static_cast<uint64_t>(i));
        a.tols = opts.tols;
        AnalyzeResult res = analyze_local_homology(f1, a);
        pr.betti_end = res.homology.betti;

        pr.betti_invariant = pr.betti_start == pr.betti_end;
        pr.matches_expected = pr.betti_end == pr.expected && pr.betti_invariant;
        if (pr.at_end.degenerate)
            pr.classification = "degenerate";
        else if (pr.at_end.morse_index == 1)
            pr.classification = "saddle";
        else if (pr.at_end.morse_index == 2)
            pr.classification = "maximum";
        else
            pr.classification = "minimum";
        report.all_match = report.all_match && pr.matches_expected;
    }
    return report;
}

}  // namespace morsehom
