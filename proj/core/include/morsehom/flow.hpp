#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "morsehom/critical_points.hpp"
#include "morsehom/field.hpp"
#include "morsehom/geometry.hpp"

namespace morsehom {

enum class FlowDirection { forward, backward };

struct FlowParams {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    double max_time = 1e4;              // flow-time budget per trajectory; generous
                                        // because flat stretches cost few steps
    double max_step = 1.0;
    double min_step = 1e-14;            // below this: StepUnderflow
    double converge_radius_rel = 1e-5;  // * delta
    double converge_grad_factor = 10.0; // * grad_tol_abs
    double escape_margin = 1.0;         // trajectory escaped once |q-c| > margin * 2 delta
};

struct TrajectoryLimit {
    enum class Kind { converged, escaped, undecided };
    Kind kind = Kind::undecided;
    int critical_point_id = -1;  // valid when converged
};

struct TrajectorySample {
    double s = 0.0;
    Vec2 q;
    double cumulative_energy = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // one per accepted integrator step
    FlowDirection direction = FlowDirection::forward;
    TrajectoryLimit limit;
    double energy = 0.0;          // Simpson quadrature of |dx/ds|^2 over the steps
    double homotopy_term = 0.0;   // integral of (d/ds f_s)(x(s)); zero for autonomous flow
    double max_radius = 0.0;      // max distance from the ball center seen
    int steps_accepted = 0;
    int steps_rejected = 0;

    Vec2 start() const { return samples.front().q; }
    Vec2 end() const { return samples.back().q; }
};

/// Integrate dx/ds = -grad f (forward) or +grad f (backward) from x_init with
/// an embedded 4(5) pair under PI step control. Terminates Converged when the
/// state is within converge_radius of a known critical point AND |grad f| is
/// below the gradient gate, Escaped when it leaves escape_margin * B_{2 delta},
/// Undecided when the flow-time budget runs out.
Trajectory integrate_flow(const ScalarField& f, const Vec2& x_init, FlowDirection dir,
                          const CriticalSet& crits, const Ball& ball,
                          const FlowParams& params = {});

/// Quadrature energy accumulated along the samples (requires >= 1 sample;
/// a constant trajectory has zero energy).
double trajectory_energy(const Trajectory& traj);

/// True iff every sample lies in B_{2 delta}.
bool locality_check(const Trajectory& traj, const Ball& ball);

/// CSV export: header "s,q1,q2", one row per accepted integrator step.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

namespace detail {

/// Shared integrator core for the autonomous and time-dependent flows.
/// rhs(s, q) is the velocity field. converged_id (checked at accepted steps)
/// returns the id of the critical point reached, or -1 to keep integrating.
/// extra_rate, when set, is accumulated with the same quadrature as the
/// energy (used for the homotopy correction term).
struct OdeProblem {
    std::function<Vec2(double, const Vec2&)> rhs;
    std::function<int(double, const Vec2&)> converged_id;
    std::function<double(double, const Vec2&)> extra_rate;  // may be null
};

Trajectory integrate_ode(const OdeProblem& prob, const Vec2& x0, double s0,
                         const Ball& ball, const FlowParams& params);

/// Advance the ODE by exactly dt (no event checks, final step clamped).
Vec2 advance_fixed(const std::function<Vec2(double, const Vec2&)>& rhs, Vec2 q,
                   double s0, double dt, const FlowParams& params);

}  // namespace detail

}  // namespace morsehom
