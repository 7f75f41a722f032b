#include "morsehom/flow.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "morsehom/errors.hpp"

namespace morsehom {

namespace detail {

namespace {

// Dormand-Prince 5(4) coefficients. The 7th stage equals the next step's
// first stage (FSAL).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_ode(const OdeProblem& prob, const Vec2& x0, double s0,
                         const Ball& ball, const FlowParams& params) {
    Trajectory traj;
    traj.samples.push_back({s0, x0, 0.0});
    traj.max_radius = dist(x0, ball.center);

    double s = s0;
    Vec2 y = x0;
    Vec2 k1 = prob.rhs(s, y);
    double h = std::min(params.max_step, 1e-4);
    double err_prev = 1.0;
    double energy = 0.0, extra = 0.0;
    const double escape_radius = params.escape_margin * 2.0 * ball.delta;

    {
        int id = prob.converged_id(s, y);
        if (id >= 0) {
            traj.limit = {TrajectoryLimit::Kind::converged, id};
            return traj;
        }
    }

    while (s - s0 < params.max_time) {
        h = std::min(h, params.max_step);
        if (h < params.min_step)
            throw StepUnderflowError("integrator step collapsed below min_step at s=" +
                                     std::to_string(s));

        Vec2 k2 = prob.rhs(s + c2 * h, y + (h * a21) * k1);
        Vec2 k3 = prob.rhs(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
        Vec2 k4 = prob.rhs(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Vec2 k5 = prob.rhs(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Vec2 k6 = prob.rhs(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vec2 y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Vec2 k7 = prob.rhs(s + h, y1);
        Vec2 errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scx = params.abs_tol + params.rel_tol * std::max(std::fabs(y.x), std::fabs(y1.x));
        double scy = params.abs_tol + params.rel_tol * std::max(std::fabs(y.y), std::fabs(y1.y));
        double err = std::sqrt(0.5 * ((errv.x / scx) * (errv.x / scx) +
                                      (errv.y / scy) * (errv.y / scy)));

        if (err <= 1.0) {
            // Accept. Energy via Simpson with the cubic Hermite midpoint.
            Vec2 ymid = 0.5 * (y + y1) + (h / 8.0) * (k1 - k7);
            Vec2 vmid = prob.rhs(s + 0.5 * h, ymid);
            energy += h / 6.0 * (k1.norm2() + 4.0 * vmid.norm2() + k7.norm2());
            if (prob.extra_rate) {
                extra += h / 6.0 *
                         (prob.extra_rate(s, y) + 4.0 * prob.extra_rate(s + 0.5 * h, ymid) +
                          prob.extra_rate(s + h, y1));
            }
            s += h;
            y = y1;
            k1 = k7;
            ++traj.steps_accepted;
            traj.samples.push_back({s, y, energy});
            traj.max_radius = std::max({traj.max_radius, dist(y, ball.center),
                                        dist(ymid, ball.center)});

            int id = prob.converged_id(s, y);
            if (id >= 0) {
                traj.limit = {TrajectoryLimit::Kind::converged, id};
                break;
            }
            if (dist(y, ball.center) > escape_radius) {
                traj.limit = {TrajectoryLimit::Kind::escaped, -1};
                break;
            }
            double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.2) *
                         std::pow(err_prev, 0.04);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-4);
        } else {
            ++traj.steps_rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }

    traj.energy = energy;
    traj.homotopy_term = extra;
    return traj;
}

Vec2 advance_fixed(const std::function<Vec2(double, const Vec2&)>& rhs, Vec2 y,
                   double s0, double dt, const FlowParams& params) {
    double s = s0;
    const double s_end = s0 + dt;
    Vec2 k1 = rhs(s, y);
    double h = std::min({params.max_step, 1e-4, dt});
    double err_prev = 1.0;
    while (s < s_end) {
        h = std::min({h, params.max_step, s_end - s});
        if (h < params.min_step) break;  // remaining interval is below resolution

        Vec2 k2 = rhs(s + c2 * h, y + (h * a21) * k1);
        Vec2 k3 = rhs(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
        Vec2 k4 = rhs(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Vec2 k5 = rhs(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Vec2 k6 = rhs(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vec2 y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Vec2 k7 = rhs(s + h, y1);
        Vec2 errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double scx = params.abs_tol + params.rel_tol * std::max(std::fabs(y.x), std::fabs(y1.x));
        double scy = params.abs_tol + params.rel_tol * std::max(std::fabs(y.y), std::fabs(y1.y));
        double err = std::sqrt(0.5 * ((errv.x / scx) * (errv.x / scx) +
                                      (errv.y / scy) * (errv.y / scy)));
        if (err <= 1.0) {
            s += h;
            y = y1;
            k1 = k7;
            double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.2) * std::pow(err_prev, 0.04);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-4);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return y;
}

}  // namespace detail

Trajectory integrate_flow(const ScalarField& f, const Vec2& x_init, FlowDirection dir,
                          const CriticalSet& crits, const Ball& ball,
                          const FlowParams& params) {
    if (!ball.contains(x_init, 2.0))
        throw BadParameterError("integrate_flow: x_init outside B_{2 delta}");
    f.require_regular(x_init);

    const double sign = (dir == FlowDirection::forward) ? -1.0 : 1.0;
    const double conv_radius = params.converge_radius_rel * ball.delta;
    const double conv_grad = params.converge_grad_factor * crits.tolerances.grad_tol_abs;

    detail::OdeProblem prob;
    prob.rhs = [&f, sign](double, const Vec2& q) { return sign * f.grad_fn(q); };
    prob.converged_id = [&](double, const Vec2& q) -> int {
        for (const auto& cp : crits.points) {
            if (dist(q, cp.location) < conv_radius && f.grad_fn(q).norm() < conv_grad)
                return cp.id;
        }
        return -1;
    };

    Trajectory traj = detail::integrate_ode(prob, x_init, 0.0, ball, params);
    traj.direction = dir;
    traj.energy = traj.samples.back().cumulative_energy;
    return traj;
}

double trajectory_energy(const Trajectory& traj) {
    if (traj.samples.empty())
        throw BadParameterError("trajectory_energy: empty trajectory");
    return traj.samples.back().cumulative_energy;
}

bool locality_check(const Trajectory& traj, const Ball& ball) {
    for (const auto& smp : traj.samples)
        if (dist(smp.q, ball.center) > 2.0 * ball.delta) return false;
    return true;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    auto old_precision = os.precision(17);
    os << "s,q1,q2\n";
    for (const auto& smp : traj.samples) {
        os << smp.s << ',' << smp.q.x << ',' << smp.q.y << '\n';
    }
    os.precision(old_precision);
}

}  // namespace morsehom
