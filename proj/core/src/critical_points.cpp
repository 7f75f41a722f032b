#include "morsehom/critical_points.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>

#include "morsehom/errors.hpp"

namespace morsehom {

ResolvedTolerances resolve_tolerances(const ScalarField& f, const Ball& ball,
                                      const ToleranceSet& tols) {
    ResolvedTolerances r;
    r.grad_scale = gradient_scale(f, ball);
    r.hess_scale = hessian_scale(f, ball);
    r.grad_tol_abs = tols.grad_tol * r.grad_scale;
    r.merge_tol = tols.merge_tol_rel * ball.delta;
    r.degen_tol = tols.degen_tol_rel * r.hess_scale;
    return r;
}

const CriticalPoint* CriticalSet::by_id(int id) const {
    for (const auto& p : points)
        if (p.id == id) return &p;
    return nullptr;
}

std::vector<int> CriticalSet::ids_of_index(int morse_index) const {
    std::vector<int> out;
    for (const auto& p : points)
        if (p.morse_index == morse_index) out.push_back(p.id);
    return out;
}

double CriticalSet::min_pairwise_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            best = std::min(best, dist(points[i].location, points[j].location));
    return best;
}

CriticalPoint classify(const ScalarField& f, const Vec2& p, double degen_tol,
                       double grad_tol_abs) {
    double gn = f.grad(p).norm();
    if (gn > grad_tol_abs)
        throw NotCriticalError("classify: |grad f| = " + std::to_string(gn) +
                               " exceeds tolerance " + std::to_string(grad_tol_abs));
    CriticalPoint cp;
    cp.location = p;
    cp.value = f.eval(p);
    SymEig2 eig = eigen_sym2(f.hessian(p));
    cp.hess_eigenvalues = eig.values;
    cp.hess_eigenvectors = eig.vectors;
    cp.morse_index = 0;
    for (double lam : eig.values)
        if (lam < -degen_tol) ++cp.morse_index;
    cp.degenerate = std::min(std::fabs(eig.values[0]), std::fabs(eig.values[1])) < degen_tol;
    return cp;
}

namespace {

enum class NewtonOutcome { converged, discarded, budget_exceeded };

NewtonOutcome newton_from_seed(const ScalarField& f, const Ball& ball, Vec2 q,
                               const ToleranceSet& tols, const ResolvedTolerances& rt,
                               Vec2& root) {
    const double leash = 4.0 * ball.delta;  // give up once clearly outside B_{2 delta}
    double gn = f.grad_fn(q).norm();
    for (int it = 0; it < tols.newton_max_iter; ++it) {
        if (gn <= rt.grad_tol_abs) {
            root = q;
            return NewtonOutcome::converged;
        }
        Mat2 h = f.hess_fn(q);
        double det = h.det();
        if (std::fabs(det) < 1e-14 * rt.hess_scale * rt.hess_scale)
            return NewtonOutcome::discarded;
        Vec2 g = f.grad_fn(q);
        Vec2 step{-(h.yy * g.x - h.xy * g.y) / det, -(h.xx * g.y - h.xy * g.x) / det};

        // Step-length backstop: halve until |grad f| decreases.
        Vec2 qn = q + step;
        double gnn = std::numeric_limits<double>::infinity();
        int halvings = 0;
        for (; halvings <= tols.newton_max_backtrack; ++halvings) {
            if (dist(qn, ball.center) <= leash &&
                f.singular_distance(qn) > 1e-9 * ball.delta) {
                gnn = f.grad_fn(qn).norm();
                if (gnn < gn) break;
            }
            step = step * 0.5;
            qn = q + step;
        }
        if (halvings > tols.newton_max_backtrack) return NewtonOutcome::discarded;
        q = qn;
        gn = gnn;
        if (dist(q, ball.center) > leash) return NewtonOutcome::discarded;
    }
    return NewtonOutcome::budget_exceeded;
}

}  // namespace

CriticalSet find_critical_points(const ScalarField& f, const Ball& ball, int grid_n,
                                 const ToleranceSet& tols) {
    if (grid_n < 8) throw BadParameterError("find_critical_points: grid_n must be >= 8");

    CriticalSet out;
    out.field_descriptor = f.descriptor;
    out.tolerances = resolve_tolerances(f, ball, tols);
    const ResolvedTolerances& rt = out.tolerances;

    std::vector<Vec2> roots;
    // Seeds over the square circumscribing B_{2 delta}; merge is a sequential
    // reduction in seed order, so the result is independent of scheduling.
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            Vec2 q{ball.center.x + 2.0 * ball.delta * (2.0 * (i + 0.5) / grid_n - 1.0),
                   ball.center.y + 2.0 * ball.delta * (2.0 * (j + 0.5) / grid_n - 1.0)};
            if (!ball.contains(q, 2.0)) continue;
            if (f.singular_distance(q) < 1e-3) continue;  // punctured window
            ++out.diagnostics.seeds;

            Vec2 root;
            NewtonOutcome res = newton_from_seed(f, ball, q, tols, rt, root);
            if (res == NewtonOutcome::budget_exceeded) {
                ++out.diagnostics.budget_exceeded;
                continue;
            }
            if (res == NewtonOutcome::discarded) {
                ++out.diagnostics.discarded;
                continue;
            }
            if (!ball.contains(root, 2.0)) {
                ++out.diagnostics.discarded;
                continue;
            }
            bool duplicate = false;
            for (const Vec2& r : roots)
                if (dist(r, root) <= rt.merge_tol) { duplicate = true; break; }
            if (duplicate) {
                ++out.diagnostics.discarded;
            } else {
                roots.push_back(root);
                ++out.diagnostics.converged;
            }
        }
    }

    // Near a degenerate zero the set {|grad f| <= tol} is a blob much wider
    // than merge_tol and Newton stalls all over it. Cluster roots whose
    // connecting segment stays near-critical; each cluster is one point,
    // represented by its member of smallest gradient norm.
    if (roots.size() > 1) {
        size_t n = roots.size();
        std::vector<size_t> parent(n);
        for (size_t i = 0; i < n; ++i) parent[i] = i;
        std::function<size_t(size_t)> find = [&](size_t i) {
            while (parent[i] != i) i = parent[i] = parent[parent[i]];
            return i;
        };
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                double d = dist(roots[i], roots[j]);
                bool together = d <= rt.merge_tol;
                if (!together && d <= 0.1 * ball.delta) {
                    Vec2 mid = 0.5 * (roots[i] + roots[j]);
                    together = f.singular_distance(mid) > 1e-9 &&
                               f.grad_fn(mid).norm() <= 10.0 * rt.grad_tol_abs;
                }
                if (together) parent[find(i)] = find(j);
            }
        }
        std::vector<Vec2> merged;
        std::vector<bool> taken(n, false);
        for (size_t i = 0; i < n; ++i) {
            size_t r = find(i);
            if (taken[r]) continue;
            taken[r] = true;
            Vec2 best = roots[i];
            double best_g = f.grad_fn(best).norm();
            for (size_t j = 0; j < n; ++j) {
                if (find(j) != r) continue;
                double g = f.grad_fn(roots[j]).norm();
                if (g < best_g || (g == best_g && (roots[j].x < best.x ||
                                                   (roots[j].x == best.x && roots[j].y < best.y)))) {
                    best = roots[j];
                    best_g = g;
                }
            }
            merged.push_back(best);
        }
        roots = std::move(merged);
    }

    // Final polish. Newton converges linearly even onto degenerate zeros, so
    // iterate to step underflow; this pins degenerate points well inside the
    // near-critical blob and makes the degeneracy flag trustworthy.
    for (Vec2& root : roots) {
        Vec2 q = root;
        double gn = f.grad_fn(q).norm();
        for (int it = 0; it < 80; ++it) {
            Mat2 h = f.hess_fn(q);
            double det = h.det();
            if (std::fabs(det) < 1e-60) break;
            Vec2 g = f.grad_fn(q);
            Vec2 step{-(h.yy * g.x - h.xy * g.y) / det, -(h.xx * g.y - h.xy * g.x) / det};
            Vec2 qn = q + step;
            if (f.singular_distance(qn) < 1e-9 * ball.delta) break;
            double gnn = f.grad_fn(qn).norm();
            if (gnn > gn) break;
            q = qn;
            gn = gnn;
            if (step.norm() < 1e-16 * std::max(1.0, q.norm())) break;
        }
        root = q;
    }

    // Deterministic ordering; distinct roots are >= merge_tol apart so the
    // epsilon comparator cannot flip under grid refinement.
    std::sort(roots.begin(), roots.end(), [&](const Vec2& a, const Vec2& b) {
        if (std::fabs(a.x - b.x) > 0.5 * rt.merge_tol) return a.x < b.x;
        return a.y < b.y;
    });

    for (size_t k = 0; k < roots.size(); ++k) {
        CriticalPoint cp = classify(f, roots[k], rt.degen_tol, rt.grad_tol_abs);
        cp.id = static_cast<int>(k);
        out.points.push_back(cp);
    }
    return out;
}

bool validate_isolation(const ScalarField& base, const Ball& ball, int grid_n,
                        const ToleranceSet& tols) {
    CriticalSet cs = find_critical_points(base, ball, grid_n, tols);
    if (cs.points.size() != 1) return false;
    // A degenerate zero is only located up to the width of its near-critical
    // blob (~ grad_tol^{1/3} for a cubically flat direction).
    double loc_tol = cs.points[0].degenerate
                         ? std::max(cs.tolerances.merge_tol,
                                    5.0 * std::cbrt(tols.grad_tol) * ball.delta)
                         : cs.tolerances.merge_tol;
    return dist(cs.points[0].location, ball.center) <= loc_tol;
}

}  // namespace morsehom
