#include <doctest.h>

#include <cmath>

#include "morsehom/critical_points.hpp"
#include "morsehom/errors.hpp"
#include "morsehom/field.hpp"
#include "morsehom/rng.hpp"
#include "../support/oracles.hpp"

using namespace morsehom;

TEST_CASE("eval on the builtin saddle and the two-centers potential") {
    ScalarField saddle = quadratic_saddle_field();
    CHECK(saddle.eval({0.0, 0.0}) == 0.0);

    ScalarField v = lagrange_potential(0.5, 0.5, 1.0);
    CHECK(v.eval({0.0, 0.0}) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(v.eval({0.5, 0.0}), SingularPointError);
    CHECK_THROWS_AS(v.eval({-0.5, 0.0}), SingularPointError);
    CHECK_THROWS_AS(lagrange_potential(-1.0, 0.5, 1.0), BadParameterError);
    CHECK_THROWS_AS(lagrange_potential(0.5, 0.5, 0.0), BadParameterError);
}

TEST_CASE("gradients: polynomial exact, two-centers critical at the origin, FD agreement") {
    ScalarField saddle = quadratic_saddle_field();
    Vec2 g = saddle.grad({1.0, 1.0});
    CHECK(g.x == doctest::Approx(2.0));
    CHECK(g.y == doctest::Approx(-2.0));

    ScalarField v = lagrange_potential(0.5, 0.5, 1.0);
    CHECK(v.grad({0.0, 0.0}).norm() < 1e-14);

    ScalarField w = lagrange_potential(0.5, 0.25, 1.0);
    Vec2 ga = w.grad({0.1, 0.2});
    Vec2 gfd = testsupport::fd_gradient(w, {0.1, 0.2});
    CHECK((ga - gfd).norm() / ga.norm() < 1e-6);
}

TEST_CASE("hessians: constant for quadratics, axis closed forms for the potential") {
    ScalarField saddle = quadratic_saddle_field();
    Mat2 h = saddle.hessian({0.3, -0.7});
    CHECK(h.xx == doctest::Approx(2.0));
    CHECK(h.yy == doctest::Approx(-2.0));
    CHECK(h.xy == 0.0);

    // Equal mass m, at the middle collinear point: d2V/dq2^2 = 16m - eps.
    ScalarField v = lagrange_potential(0.5, 0.5, 1.0);
    Mat2 hv = v.hessian({0.0, 0.0});
    CHECK(hv.yy == doctest::Approx(16 * 0.5 - 1.0));
    CHECK(hv.xx == doctest::Approx(-32 * 0.5 - 1.0));
    CHECK(hv.xy == doctest::Approx(0.0));

    // On the axis d2V/dq1^2 = -2 m1/|q1+1/2|^3 - 2 m2/|q1-1/2|^3 - eps < 0.
    ScalarField w = lagrange_potential(0.7, 0.3, 0.8);
    for (double q1 : {-1.3, 0.2, 0.9}) {
        double a = std::fabs(q1 + 0.5), b = std::fabs(q1 - 0.5);
        double expect = -2 * 0.7 / (a * a * a) - 2 * 0.3 / (b * b * b) - 0.8;
        CHECK(w.hessian({q1, 0.0}).xx == doctest::Approx(expect));
        CHECK(w.hessian({q1, 0.0}).xx < 0.0);
    }
}

TEST_CASE("check_derivatives over the builtins and the potential") {
    SplitMix64 rng(3);
    std::vector<Vec2> probes;
    for (int i = 0; i < 10; ++i)
        probes.push_back({rng.next_double(-0.9, 0.9), rng.next_double(-0.9, 0.9)});

    DerivativeReport rep = check_derivatives(quadratic_saddle_field(), probes);
    CHECK(rep.all_pass);
    CHECK(rep.max_grad_error < 1e-8);

    // All builtins ship consistent derivatives.
    for (const auto& name : builtin_field_names()) {
        DerivativeReport r = check_derivatives(builtin_field(name), probes);
        CHECK_MESSAGE(r.all_pass, name);
    }

    std::vector<Vec2> far;
    for (int i = 0; i < 12; ++i) {
        Vec2 q{rng.next_double(-2, 2), rng.next_double(-2, 2)};
        ScalarField v = lagrange_potential(0.5, 0.5, 1.0);
        if (v.singular_distance(q) > 0.2) far.push_back(q);
    }
    DerivativeReport rl = check_derivatives(lagrange_potential(0.5, 0.5, 1.0), far);
    CHECK(rl.all_pass);

    CHECK(check_derivatives(quadratic_min_field(), {}).probes.empty());
}

TEST_CASE("equal-mass potential has both reflection symmetries") {
    ScalarField v = lagrange_potential(0.4, 0.4, 0.7);
    SplitMix64 rng(17);
    for (int i = 0; i < 40; ++i) {
        Vec2 q{rng.next_double(-1.5, 1.5), rng.next_double(-1.5, 1.5)};
        if (v.singular_distance(q) < 0.1) continue;
        double f = v.eval_fn(q);
        CHECK(v.eval_fn({-q.x, q.y}) == doctest::Approx(f).epsilon(1e-12));
        CHECK(v.eval_fn({q.x, -q.y}) == doctest::Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("bump cutoff plateaus and derivative consistency") {
    BumpProfile chi;
    CHECK(chi.value(0.0) == 1.0);
    CHECK(chi.value(0.5) == 1.0);
    CHECK(chi.value(1.0) == 0.0);
    CHECK(chi.value(2.0) == 0.0);
    for (double t : {0.55, 0.6, 0.75, 0.9, 0.97}) {
        double h = 1e-6;
        double fd1 = (chi.value(t + h) - chi.value(t - h)) / (2 * h);
        double fd2 = (chi.deriv(t + h) - chi.deriv(t - h)) / (2 * h);
        CHECK(chi.deriv(t) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(chi.second_deriv(t) == doctest::Approx(fd2).epsilon(1e-5));
        CHECK(chi.value(t) > 0.0);
        CHECK(chi.value(t) < 1.0);
        CHECK(chi.deriv(t) < 0.0);  // monotone decreasing ramp
    }
}

TEST_CASE("perturbation: zero amplitude is the identity, exact outside B_delta") {
    ScalarField base = monkey_saddle_field();
    Ball ball{{0.0, 0.0}, 0.5};
    Perturbation zero;
    zero.amplitude = 0.0;
    ScalarField same = perturb(base, ball, zero);
    SplitMix64 rng(4);
    for (int i = 0; i < 30; ++i) {
        Vec2 q{rng.next_double(-1, 1), rng.next_double(-1, 1)};
        CHECK(same.eval_fn(q) == base.eval_fn(q));
    }

    Perturbation p = make_perturbation(base, ball, 12345);
    CHECK(p.amplitude > 0.0);
    CHECK(p.direction.norm() == doctest::Approx(1.0));
    ScalarField pert = perturb(base, ball, p);
    // 100 samples on and outside the boundary: bitwise agreement.
    for (int i = 0; i < 100; ++i) {
        double angle = 2 * M_PI * i / 100.0;
        double radius = 0.5 + 0.6 * rng.next_double();
        Vec2 q{radius * std::cos(angle), radius * std::sin(angle)};
        CHECK(pert.eval_fn(q) == base.eval_fn(q));
        CHECK((pert.grad_fn(q) - base.grad_fn(q)).norm() == 0.0);
    }
    // Inside B_{delta/2} the shift is exactly linear.
    Vec2 inside{0.1, -0.05};
    CHECK(pert.eval_fn(inside) ==
          doctest::Approx(base.eval_fn(inside) + p.amplitude * p.direction.dot(inside)));

    // Derivatives of the perturbed field stay FD-consistent through the
    // cutoff annulus.
    std::vector<Vec2> probes;
    for (int i = 0; i < 24; ++i) {
        double angle = 2 * M_PI * i / 24.0;
        double radius = 0.30 + 0.018 * i;
        probes.push_back({radius * std::cos(angle), radius * std::sin(angle)});
    }
    DerivativeReport rep = check_derivatives(pert, probes);
    CHECK(rep.all_pass);
}

TEST_CASE("perturbed quadratic saddle: the single critical point moves to -lambda a / 2") {
    ScalarField base = quadratic_saddle_field();
    Ball ball{{0.0, 0.0}, 0.5};
    Perturbation p;
    p.amplitude = 1e-3;
    p.direction = {1.0, 0.0};
    ScalarField pert = perturb(base, ball, p);

    auto roots = testsupport::grid_roots(pert, {-0.5, -0.5}, {0.5, 0.5}, 60, 1e-4);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].x == doctest::Approx(-5e-4).epsilon(1e-4));
    CHECK(std::fabs(roots[0].y) < 1e-9);
}

TEST_CASE("perturbed monkey saddle splits into two nondegenerate saddles") {
    // grad(x^3 - 3 x y^2) = 3 conj((x+iy)^2), so a linear tilt leaves exactly
    // the two square roots of the shifted value: two saddle points.
    ScalarField base = monkey_saddle_field();
    Ball ball{{0.0, 0.0}, 0.5};
    Perturbation p = make_perturbation(base, ball, 2024);
    ScalarField pert = perturb(base, ball, p);

    auto roots = testsupport::grid_roots(pert, {-0.25, -0.25}, {0.25, 0.25}, 80, 1e-3);
    REQUIRE(roots.size() == 2);
    for (const Vec2& r : roots) {
        Mat2 h = pert.hess_fn(r);
        CHECK(h.det() < 0.0);  // each spawned point is a saddle
        CHECK(r.norm() < 0.25);
    }
}
