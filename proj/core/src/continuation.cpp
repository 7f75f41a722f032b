#include "morsehom/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "morsehom/errors.hpp"

namespace morsehom {

double homotopy_ramp(double s, double T) {
    if (T <= 0.0) throw BadParameterError("homotopy ramp: T must be > 0");
    if (s <= -T) return 0.0;
    if (s >= T) return 1.0;
    // Internal shape parameter fixed to 1/2; each branch is a flat-ended
    // exponential glue meeting the other at (0, 1/2).
    if (s <= 0.0) return 0.5 * std::exp(2.0) * std::exp(-2.0 * T / (s + T));
    return 1.0 - 0.5 * std::exp(2.0) * std::exp(-2.0 * T / (T - s));
}

double homotopy_ramp_deriv(double s, double T) {
    if (T <= 0.0) throw BadParameterError("homotopy ramp: T must be > 0");
    if (s <= -T || s >= T) return 0.0;
    if (s <= 0.0) {
        double g = 0.5 * std::exp(2.0) * std::exp(-2.0 * T / (s + T));
        return g * 2.0 * T / ((s + T) * (s + T));
    }
    double g = 0.5 * std::exp(2.0) * std::exp(-2.0 * T / (T - s));
    return g * 2.0 * T / ((T - s) * (T - s));
}

ScalarField homotopy_field(const HomotopyFamily& fam, double s) {
    double g = homotopy_ramp(s, fam.T);
    if (g == 0.0) return fam.f_alpha;
    if (g == 1.0) return fam.f_beta;

    ScalarField out;
    out.descriptor = "homotopy(" + fam.f_alpha.descriptor + "->" + fam.f_beta.descriptor +
                     ",s=" + std::to_string(s) + ")";
    out.singular_set = fam.f_alpha.singular_set;
    for (const Vec2& p : fam.f_beta.singular_set) out.singular_set.push_back(p);
    auto ea = fam.f_alpha.eval_fn, eb = fam.f_beta.eval_fn;
    auto ga = fam.f_alpha.grad_fn, gb = fam.f_beta.grad_fn;
    auto ha = fam.f_alpha.hess_fn, hb = fam.f_beta.hess_fn;
    out.eval_fn = [=](Vec2 q) { return (1.0 - g) * ea(q) + g * eb(q); };
    out.grad_fn = [=](Vec2 q) { return (1.0 - g) * ga(q) + g * gb(q); };
    out.hess_fn = [=](Vec2 q) { return (1.0 - g) * ha(q) + g * hb(q); };
    return out;
}

Vec2 homotopy_flow_rhs(const HomotopyFamily& fam, double s, const Vec2& q) {
    double g = homotopy_ramp(s, fam.T);
    Vec2 grad = (g == 0.0)   ? fam.f_alpha.grad_fn(q)
                : (g == 1.0) ? fam.f_beta.grad_fn(q)
                             : (1.0 - g) * fam.f_alpha.grad_fn(q) + g * fam.f_beta.grad_fn(q);
    return -grad;
}

Trajectory integrate_nonautonomous(const HomotopyFamily& fam, const Vec2& x_init,
                                   double s_start, FlowDirection dir,
                                   const CriticalSet& crits_alpha,
                                   const CriticalSet& crits_beta, const Ball& ball,
                                   const FlowParams& params) {
    if (!ball.contains(x_init, 2.0))
        throw BadParameterError("integrate_nonautonomous: x_init outside B_{2 delta}");

    const double conv_radius = params.converge_radius_rel * ball.delta;
    const bool forward = dir == FlowDirection::forward;
    const CriticalSet& targets = forward ? crits_beta : crits_alpha;
    const ScalarField& target_field = forward ? fam.f_beta : fam.f_alpha;
    const double conv_grad = params.converge_grad_factor * targets.tolerances.grad_tol_abs;
    const double T = fam.T;

    detail::OdeProblem prob;
    if (forward) {
        prob.rhs = [&fam](double s, const Vec2& q) { return homotopy_flow_rhs(fam, s, q); };
    } else {
        // sigma-clock: y(sigma) = x(s_start - sigma) solves dy/dsigma = +grad f_s.
        prob.rhs = [&fam, s_start](double sigma, const Vec2& q) {
            return -homotopy_flow_rhs(fam, s_start - sigma, q);
        };
    }
    prob.converged_id = [&, forward, s_start, T](double clock, const Vec2& q) -> int {
        double s = forward ? clock : s_start - clock;
        if (forward ? (s < T) : (s > -T)) return -1;
        for (const auto& cp : targets.points)
            if (dist(q, cp.location) < conv_radius &&
                target_field.grad_fn(q).norm() < conv_grad)
                return cp.id;
        return -1;
    };
    // (d/ds f_s)(x) = gamma'(s) (f_beta - f_alpha)(x); in the sigma-clock the
    // accumulated integral equals the s-integral over the covered range.
    auto ea = fam.f_alpha.eval_fn, eb = fam.f_beta.eval_fn;
    prob.extra_rate = [=](double clock, const Vec2& q) {
        double s = forward ? clock : s_start - clock;
        double gp = homotopy_ramp_deriv(s, T);
        return gp == 0.0 ? 0.0 : gp * (eb(q) - ea(q));
    };

    Trajectory traj = detail::integrate_ode(prob, x_init, forward ? s_start : 0.0, ball, params);
    traj.direction = dir;
    return traj;
}

// --- chain map --------------------------------------------------------------

namespace {

struct Verdict {
    enum class Kind { converged, escaped } kind = Kind::escaped;
    int target_id = -1;
    Vec2 exit_point;

    bool differs(const Verdict& o, double escape_tol) const {
        if (kind != o.kind) return true;
        if (kind == Kind::converged) return target_id != o.target_id;
        return dist(exit_point, o.exit_point) > escape_tol;
    }
};

struct SweepContext {
    const HomotopyFamily* fam;
    const CriticalSet* crits_alpha;
    const CriticalSet* crits_beta;
    const Ball* ball;
    const FlowParams* params;
    double capture_radius;
    double escape_tol;
    int* trajectories;
    double* max_surplus;
};

Verdict run_from(const SweepContext& ctx, const Vec2& start, double f_alpha_at_source) {
    Trajectory traj = integrate_nonautonomous(*ctx.fam, start, -ctx.fam->T,
                                              FlowDirection::forward, *ctx.crits_alpha,
                                              *ctx.crits_beta, *ctx.ball, *ctx.params);
    ++*ctx.trajectories;
    Verdict v;
    if (traj.limit.kind == TrajectoryLimit::Kind::undecided)
        throw UndecidedBranchError("continuation trajectory undecided; raise max_time");
    if (traj.limit.kind == TrajectoryLimit::Kind::escaped) {
        v.kind = Verdict::Kind::escaped;
        v.exit_point = traj.end();
        return v;
    }
    v.kind = Verdict::Kind::converged;
    v.target_id = traj.limit.critical_point_id;
    const CriticalPoint* target = ctx.crits_beta->by_id(v.target_id);
    // Energy surplus over the autonomous drop; bounded by the homotopy excess.
    double surplus = traj.energy - (f_alpha_at_source - target->value);
    *ctx.max_surplus = std::max(*ctx.max_surplus, surplus);
    return v;
}

/// Closest approach of the trajectory from `start` to each beta-saddle;
/// used when bisection exhausts before the connecting trajectory converges.
int closest_saddle(const SweepContext& ctx, const Vec2& start) {
    Trajectory traj = integrate_nonautonomous(*ctx.fam, start, -ctx.fam->T,
                                              FlowDirection::forward, *ctx.crits_alpha,
                                              *ctx.crits_beta, *ctx.ball, *ctx.params);
    ++*ctx.trajectories;
    int best = -1;
    double best_d = ctx.capture_radius;
    for (const auto& cp : ctx.crits_beta->points) {
        if (cp.morse_index != 1) continue;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& smp : traj.samples) d = std::min(d, dist(smp.q, cp.location));
        if (d < best_d) { best_d = d; best = cp.id; }
    }
    return best;
}

/// A node of the degree-1 sweep along the unstable line of an alpha-saddle.
/// Nodes with tau < 0 are offset-parametrized (point = source + u * v);
/// nodes with tau >= 0 are alpha-flow evolutions of the branch seed.
struct SweepNode {
    Vec2 point;
    double u = 0.0;    // signed eigen-offset (valid when tau < 0)
    double tau = -1.0; // alpha-flow time from the branch seed (valid when >= 0)
    int sign = 0;
    Verdict verdict;
    bool is_crossing = false;  // converged straight onto a beta-saddle
};

}  // namespace

ChainMapResult chain_map(const HomotopyFamily& fam, const CriticalSet& crits_alpha,
                         const CriticalSet& crits_beta, const Ball& ball,
                         const FlowParams& params, const ChainMapOptions& opts) {
    for (const auto& cp : crits_alpha.points)
        if (cp.degenerate) throw DegeneratePointError("chain_map: degenerate alpha generator");
    for (const auto& cp : crits_beta.points)
        if (cp.degenerate) throw DegeneratePointError("chain_map: degenerate beta generator");

    ChainMapResult out;
    std::array<std::vector<int>, 3> ids_a, ids_b;
    for (int k = 0; k < 3; ++k) {
        ids_a[k] = crits_alpha.ids_of_index(k);
        ids_b[k] = crits_beta.ids_of_index(k);
        out.phi[k] = GF2Matrix(static_cast<int>(ids_b[k].size()),
                               static_cast<int>(ids_a[k].size()));
    }
    auto pos_of = [](const std::vector<int>& ids, int id) {
        return static_cast<int>(std::find(ids.begin(), ids.end(), id) - ids.begin());
    };

    // Energy bound 2 * max |f_beta - f_alpha| over B_delta (32x32 grid).
    {
        double m = 0.0;
        for (int i = 0; i < 32; ++i)
            for (int j = 0; j < 32; ++j) {
                Vec2 q{ball.center.x + ball.delta * (2.0 * (i + 0.5) / 32 - 1.0),
                       ball.center.y + ball.delta * (2.0 * (j + 0.5) / 32 - 1.0)};
                if (!ball.contains(q)) continue;
                if (fam.f_alpha.singular_distance(q) < 1e-6 * ball.delta) continue;
                m = std::max(m, std::fabs(fam.f_beta.eval_fn(q) - fam.f_alpha.eval_fn(q)));
            }
        out.energy_bound = 2.0 * m;
    }

    SweepContext ctx{&fam, &crits_alpha, &crits_beta, &ball, &params,
                     std::min(opts.capture_fraction * 2.0 * ball.delta,
                              0.4 * std::min(crits_beta.min_pairwise_distance(),
                                             std::numeric_limits<double>::max())),
                     opts.escape_split * 2.0 * ball.delta,
                     &out.trajectories, &out.max_energy_surplus};

    // Degree 0: the forward limit of each alpha-minimum.
    for (int id : ids_a[0]) {
        const CriticalPoint& c1 = *crits_alpha.by_id(id);
        Verdict v = run_from(ctx, c1.location, c1.value);
        if (v.kind == Verdict::Kind::converged) {
            const CriticalPoint* tgt = crits_beta.by_id(v.target_id);
            if (tgt->morse_index != 0)
                throw TransversalityFailureError(
                    "minimum flowed onto an index-" + std::to_string(tgt->morse_index) +
                    " point; adjust T");
            out.phi[0].flip(pos_of(ids_b[0], v.target_id), pos_of(ids_a[0], id));
        }
    }

    // Degree 2: the reversed-flow limit of each beta-maximum.
    for (int id : ids_b[2]) {
        const CriticalPoint& c2 = *crits_beta.by_id(id);
        Trajectory traj =
            integrate_nonautonomous(fam, c2.location, fam.T, FlowDirection::backward,
                                    crits_alpha, crits_beta, ball, params);
        ++out.trajectories;
        if (traj.limit.kind == TrajectoryLimit::Kind::undecided)
            throw UndecidedBranchError("reversed continuation trajectory undecided");
        if (traj.limit.kind == TrajectoryLimit::Kind::escaped) continue;
        const CriticalPoint* src = crits_alpha.by_id(traj.limit.critical_point_id);
        if (src->morse_index != 2)
            throw TransversalityFailureError(
                "maximum traced back to an index-" + std::to_string(src->morse_index) +
                " point; adjust T");
        // Forward energy identity for the reversed run: E covers the same path.
        double surplus = traj.energy - (src->value - c2.value);
        out.max_energy_surplus = std::max(out.max_energy_surplus, surplus);
        out.phi[2].flip(pos_of(ids_b[2], id), pos_of(ids_a[2], src->id));
    }

    // Degree 1: sweep the unstable line of each alpha-saddle.
    if (!ids_b[1].empty()) {
        for (int id : ids_a[1]) {
            const CriticalPoint& c1 = *crits_alpha.by_id(id);
            double off = opts.offset_rel * ball.delta;
            const Vec2 v_unstable = c1.hess_eigenvectors[0];

            std::map<int, int> tallies;  // beta saddle id -> crossing count

            auto record_crossing = [&](int beta_id) {
                tallies[beta_id] += 1;
                ++out.crossings;
            };

            // Assemble the ordered sweep line (u ascending through the source).
            std::vector<SweepNode> line;
            auto push_offset_node = [&](double u) {
                SweepNode n;
                n.point = c1.location + u * v_unstable;
                n.u = u;
                n.sign = u < 0 ? -1 : (u > 0 ? +1 : 0);
                line.push_back(n);
            };

            // Minus branch, farthest first.
            Trajectory branch_minus = integrate_flow(fam.f_alpha, c1.location - off * v_unstable,
                                                     FlowDirection::forward, crits_alpha, ball,
                                                     params);
            {
                std::vector<SweepNode> tmp;
                for (size_t k = 1; k < branch_minus.samples.size(); ++k) {
                    const auto& smp = branch_minus.samples[k];
                    if (!ball.contains(smp.q, 2.0)) break;
                    SweepNode n;
                    n.point = smp.q;
                    n.tau = smp.s;
                    n.sign = -1;
                    tmp.push_back(n);
                }
                for (auto it = tmp.rbegin(); it != tmp.rend(); ++it) line.push_back(*it);
            }
            push_offset_node(-off);
            for (int j = 1; j <= opts.shrink_levels; ++j)
                push_offset_node(-off * std::pow(2.0, -j));
            push_offset_node(0.0);
            for (int j = opts.shrink_levels; j >= 1; --j)
                push_offset_node(off * std::pow(2.0, -j));
            push_offset_node(off);
            Trajectory branch_plus = integrate_flow(fam.f_alpha, c1.location + off * v_unstable,
                                                    FlowDirection::forward, crits_alpha, ball,
                                                    params);
            for (size_t k = 1; k < branch_plus.samples.size(); ++k) {
                const auto& smp = branch_plus.samples[k];
                if (!ball.contains(smp.q, 2.0)) break;
                SweepNode n;
                n.point = smp.q;
                n.tau = smp.s;
                n.sign = +1;
                line.push_back(n);
            }

            // Verdicts; nodes landing exactly on a beta-saddle connection are
            // crossings in their own right.
            for (auto& node : line) {
                node.verdict = run_from(ctx, node.point, c1.value);
                if (node.verdict.kind == Verdict::Kind::converged) {
                    const CriticalPoint* tgt = crits_beta.by_id(node.verdict.target_id);
                    if (tgt->morse_index == 2)
                        throw TransversalityFailureError(
                            "sweep trajectory converged on a maximum");
                    if (tgt->morse_index == 1) {
                        node.is_crossing = true;
                        record_crossing(tgt->id);
                    }
                }
            }

            // Bisect every verdict change between adjacent regular nodes.
            for (size_t k = 0; k + 1 < line.size(); ++k) {
                const SweepNode& a = line[k];
                const SweepNode& b = line[k + 1];
                if (a.is_crossing || b.is_crossing) continue;
                if (!a.verdict.differs(b.verdict, ctx.escape_tol)) continue;

                // Parameterize the gap: either both offset nodes, or both
                // tau nodes on the same branch, or the offset/branch-seed joint.
                SweepNode lo = a, hi = b;
                bool found = false;
                for (int it = 0; it < opts.max_bisection && !found; ++it) {
                    SweepNode mid;
                    if (lo.tau >= 0.0 && hi.tau >= 0.0) {
                        // tau decreases along the minus side of the line, so
                        // always advance from the earlier branch point.
                        const SweepNode& base = lo.tau <= hi.tau ? lo : hi;
                        mid.tau = 0.5 * (lo.tau + hi.tau);
                        mid.sign = lo.sign;
                        double dt = mid.tau - base.tau;
                        if (dt < 1e-14) break;
                        mid.point = detail::advance_fixed(
                            [&](double, const Vec2& q) { return -fam.f_alpha.grad_fn(q); },
                            base.point, 0.0, dt, params);
                    } else if (lo.tau < 0.0 && hi.tau < 0.0) {
                        mid.u = 0.5 * (lo.u + hi.u);
                        if (mid.u == lo.u || mid.u == hi.u) break;
                        mid.point = c1.location + mid.u * v_unstable;
                        mid.sign = mid.u < 0 ? -1 : +1;
                    } else {
                        // offset node adjacent to the first branch sample:
                        // walk the branch seed forward by half the sample time.
                        const SweepNode& tn = lo.tau >= 0.0 ? lo : hi;
                        const SweepNode& on = lo.tau >= 0.0 ? hi : lo;
                        mid.tau = 0.5 * tn.tau;
                        mid.sign = tn.sign;
                        mid.point = detail::advance_fixed(
                            [&](double, const Vec2& q) { return -fam.f_alpha.grad_fn(q); },
                            on.point, 0.0, mid.tau, params);
                    }
                    mid.verdict = run_from(ctx, mid.point, c1.value);
                    if (mid.verdict.kind == Verdict::Kind::converged) {
                        const CriticalPoint* tgt = crits_beta.by_id(mid.verdict.target_id);
                        if (tgt->morse_index == 1) {
                            record_crossing(tgt->id);
                            found = true;
                            break;
                        }
                    }
                    if (mid.verdict.differs(lo.verdict, ctx.escape_tol))
                        hi = mid;
                    else
                        lo = mid;
                }
                if (!found) {
                    // The separating trajectory did not converge within the
                    // bisection budget; identify by closest approach, or accept
                    // that the boundary runs through untracked structure.
                    Vec2 probe = 0.5 * (lo.point + hi.point);
                    int beta_id = closest_saddle(ctx, probe);
                    if (beta_id >= 0) record_crossing(beta_id);
                }
            }

            for (const auto& [beta_id, count] : tallies) {
                if (count % 2)
                    out.phi[1].flip(pos_of(ids_b[1], beta_id), pos_of(ids_a[1], id));
            }
        }
    }

    out.energy_bound_ok = out.max_energy_surplus <= out.energy_bound + 1e-6;
    return out;
}

bool verify_chain_map(const std::array<GF2Matrix, 3>& phi, const ChainComplex& cx_alpha,
                      const ChainComplex& cx_beta) {
    for (int k = 0; k < 3; ++k) {
        if (phi[k].rows() != cx_beta.dim(k) || phi[k].cols() != cx_alpha.dim(k))
            throw ShapeMismatchError("verify_chain_map: phi_" + std::to_string(k) +
                                     " has the wrong shape");
    }
    bool ok = true;
    if (cx_alpha.dim(1) > 0 || cx_beta.dim(1) > 0)
        ok = ok && (phi[0] * cx_alpha.d1 == cx_beta.d1 * phi[1]);
    if (cx_alpha.dim(2) > 0 || cx_beta.dim(2) > 0)
        ok = ok && (phi[1] * cx_alpha.d2 == cx_beta.d2 * phi[2]);
    return ok;
}

}  // namespace morsehom
