#include <doctest.h>

#include <cmath>
#include <sstream>

#include "morsehom/critical_points.hpp"
#include "morsehom/errors.hpp"
#include "morsehom/field.hpp"
#include "morsehom/flow.hpp"

using namespace morsehom;

namespace {

struct SaddleSetup {
    ScalarField f = quadratic_saddle_field();
    Ball ball{{0.0, 0.0}, 0.5};
    CriticalSet crits;
    SaddleSetup() { crits = find_critical_points(f, ball, 16); }
};

}  // namespace

TEST_CASE("forward flow on the stable manifold converges to the saddle") {
    SaddleSetup s;
    Trajectory t = integrate_flow(s.f, {0.1, 0.0}, FlowDirection::forward, s.crits, s.ball);
    REQUIRE(t.limit.kind == TrajectoryLimit::Kind::converged);
    CHECK(t.limit.critical_point_id == s.crits.points[0].id);
    CHECK(t.end().norm() < 1e-8);
    // Explicit integral: E = f(0.1, 0) - f(0, 0) = 0.01.
    CHECK(trajectory_energy(t) == doctest::Approx(0.01).epsilon(1e-7));
}

TEST_CASE("slightly off the stable manifold the flow escapes (y grows like e^{2s})") {
    SaddleSetup s;
    Trajectory t = integrate_flow(s.f, {0.1, 0.001}, FlowDirection::forward, s.crits, s.ball);
    CHECK(t.limit.kind == TrajectoryLimit::Kind::escaped);
    CHECK(t.max_radius > 2.0 * s.ball.delta);
}

TEST_CASE("constant trajectory at a critical point has zero energy") {
    SaddleSetup s;
    Trajectory t = integrate_flow(s.f, {0.0, 0.0}, FlowDirection::forward, s.crits, s.ball);
    CHECK(t.limit.kind == TrajectoryLimit::Kind::converged);
    CHECK(trajectory_energy(t) == 0.0);
}

TEST_CASE("f is monotone non-increasing along forward trajectories") {
    ScalarField f = double_well_field();
    Ball ball{{0.0, 0.0}, 1.5};
    CriticalSet crits = find_critical_points(f, ball, 24);
    for (Vec2 start : {Vec2{0.3, 0.8}, Vec2{-0.7, -0.4}, Vec2{0.01, 0.02}}) {
        Trajectory t = integrate_flow(f, start, FlowDirection::forward, crits, ball);
        for (size_t k = 1; k < t.samples.size(); ++k)
            CHECK(f.eval_fn(t.samples[k].q) <= f.eval_fn(t.samples[k - 1].q) + 1e-9);
    }
}

TEST_CASE("energy identity on a double-well connecting trajectory") {
    ScalarField f = double_well_field();
    Ball ball{{0.0, 0.0}, 1.5};
    CriticalSet crits = find_critical_points(f, ball, 24);
    // Seed just off the saddle along its unstable direction (x-axis).
    Trajectory t = integrate_flow(f, {1e-6, 0.0}, FlowDirection::forward, crits, ball);
    REQUIRE(t.limit.kind == TrajectoryLimit::Kind::converged);
    const CriticalPoint* target = crits.by_id(t.limit.critical_point_id);
    REQUIRE(target->morse_index == 0);
    double drop = f.eval_fn({1e-6, 0.0}) - target->value;
    CHECK(std::fabs(trajectory_energy(t) - drop) <= 1e-6 * std::fabs(drop) + 1e-9);
}

TEST_CASE("sample-to-sample residual of the flow equation stays second order") {
    SaddleSetup s;
    Trajectory t = integrate_flow(s.f, {0.3, 1e-7}, FlowDirection::forward, s.crits, s.ball);
    for (size_t k = 1; k < t.samples.size(); ++k) {
        Vec2 dq = t.samples[k].q - t.samples[k - 1].q;
        double ds = t.samples[k].s - t.samples[k - 1].s;
        Vec2 mid = 0.5 * (t.samples[k].q + t.samples[k - 1].q);
        Vec2 resid = dq / ds + s.f.grad_fn(mid);
        // Third-derivative scale of e^{+-2s} dynamics is 8|q|.
        CHECK(resid.norm() <= 2.0 * ds * ds * (mid.norm() + 0.1) + 1e-10);
    }
}

TEST_CASE("halving rel_tol changes no verdict and moves energy by < 1e-7") {
    ScalarField f = double_well_field();
    Ball ball{{0.0, 0.0}, 1.5};
    CriticalSet crits = find_critical_points(f, ball, 24);
    for (Vec2 start : {Vec2{1e-6, 0.0}, Vec2{-0.4, 0.6}, Vec2{0.2, -0.1}}) {
        FlowParams coarse;
        FlowParams fine;
        fine.rel_tol = 0.5 * coarse.rel_tol;
        Trajectory a = integrate_flow(f, start, FlowDirection::forward, crits, ball, coarse);
        Trajectory b = integrate_flow(f, start, FlowDirection::forward, crits, ball, fine);
        CHECK(a.limit.kind == b.limit.kind);
        if (a.limit.kind == TrajectoryLimit::Kind::converged)
            CHECK(a.limit.critical_point_id == b.limit.critical_point_id);
        CHECK(std::fabs(trajectory_energy(a) - trajectory_energy(b)) < 1e-7);
    }
}

TEST_CASE("backward direction integrates the reversed field") {
    // Backward flow from just below a maximum of -x^2-y^2... use four-well:
    // backward from near the origin maximum should converge onto it.
    ScalarField f = four_well_field();
    Ball ball{{0.0, 0.0}, 1.5};
    CriticalSet crits = find_critical_points(f, ball, 24);
    Trajectory t = integrate_flow(f, {0.0, 0.9999}, FlowDirection::backward, crits, ball);
    REQUIRE(t.limit.kind == TrajectoryLimit::Kind::converged);
    const CriticalPoint* target = crits.by_id(t.limit.critical_point_id);
    CHECK(target->morse_index == 2);
    CHECK(target->location.norm() < 1e-9);
}

TEST_CASE("locality check") {
    Ball ball{{0.0, 0.0}, 0.5};
    Trajectory t;
    t.samples = {{0.0, {0.0, 0.0}, 0.0}, {1.0, {0.9, 0.0}, 0.0}};
    CHECK(locality_check(t, ball));
    t.samples.push_back({2.0, {1.05, 0.0}, 0.0});  // 2.1 delta
    CHECK(!locality_check(t, ball));
}

TEST_CASE("step underflow near the potential singularity") {
    ScalarField v = lagrange_potential(0.5, 0.5, 1.0);
    Ball ball{{0.4, 0.0}, 0.3};
    CriticalSet empty;
    empty.field_descriptor = v.descriptor;
    CHECK_THROWS_AS(
        integrate_flow(v, {0.4, 0.0}, FlowDirection::forward, empty, ball),
        StepUnderflowError);
}

TEST_CASE("flow-time budget exhaustion reports Undecided") {
    SaddleSetup s;
    FlowParams p;
    p.max_time = 1.0;  // not enough to resolve the limit from far out
    Trajectory t = integrate_flow(s.f, {0.3, 1e-9}, FlowDirection::forward, s.crits, s.ball, p);
    CHECK(t.limit.kind == TrajectoryLimit::Kind::undecided);
}

TEST_CASE("trajectory CSV: header and one row per accepted step") {
    SaddleSetup s;
    Trajectory t = integrate_flow(s.f, {0.1, 0.0}, FlowDirection::forward, s.crits, s.ball);
    std::ostringstream csv;
    write_trajectory_csv(csv, t);
    std::istringstream in(csv.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "s,q1,q2");
    size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == t.samples.size());
    CHECK(rows == static_cast<size_t>(t.steps_accepted) + 1);
}
