#include <doctest.h>

#include <cmath>

#include "morsehom/errors.hpp"
#include "morsehom/field.hpp"
#include "morsehom/lagrange.hpp"
#include "morsehom/rng.hpp"

using namespace morsehom;

namespace {

// Independent 1D bisection on the axis stationarity equation.
double outer_root_oracle(double m1, double m2, double eps) {
    auto g = [&](double q) {
        return m1 / ((q + 0.5) * (q + 0.5)) + m2 / ((q - 0.5) * (q - 0.5)) - eps * q;
    };
    double lo = 0.5 + 1e-9, hi = 5.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Off-axis equilibria in closed form: the stationarity equations force
// m1/r1^3 = m2/r2^3 = eps/2, so both points lie on the intersection of two
// circles around the centers.
Vec2 off_axis_oracle(double m1, double m2, double eps) {
    double r1 = std::cbrt(2.0 * m1 / eps);
    double r2 = std::cbrt(2.0 * m2 / eps);
    double q1 = (r1 * r1 - r2 * r2) / 2.0;
    double y = std::sqrt(r1 * r1 - (q1 + 0.5) * (q1 + 0.5));
    return {q1, y};
}

}  // namespace

TEST_CASE("collinear points: symmetry and the bisection oracle") {
    LagrangeParams p{0.5, 0.5, 1.0};
    auto pts = collinear_points(p);
    CHECK(pts[0].norm() < 1e-12);  // l1 = (0,0) by symmetry
    CHECK(pts[1].x == doctest::Approx(1.19840614455492).epsilon(1e-10));
    CHECK(pts[2].x == doctest::Approx(-pts[1].x).epsilon(1e-12));  // l3 = -l2

    LagrangeParams q{0.6, 0.4, 1.0};
    auto pts2 = collinear_points(q);
    CHECK(pts2[0].x == doctest::Approx(0.0475344611443384).epsilon(1e-10));
    CHECK(pts2[1].x == doctest::Approx(outer_root_oracle(0.6, 0.4, 1.0)).epsilon(1e-10));

    CHECK_THROWS_AS(collinear_points(LagrangeParams{-1.0, 0.5, 1.0}), BadParameterError);
}

TEST_CASE("collinear hessian closed forms") {
    LagrangeParams p{0.5, 0.5, 1.0};
    Mat2 h = collinear_hessian(p, 0.0);
    CHECK(h.xx == doctest::Approx(-32 * 0.5 - 1.0));  // -32m - eps
    CHECK(h.yy == doctest::Approx(16 * 0.5 - 1.0));   // 16m - eps
    CHECK(h.xy == 0.0);

    // Against the generic Hessian path, and d2V/dq1^2 < 0 throughout.
    SplitMix64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        LagrangeParams r{rng.next_double(0.05, 2.0), rng.next_double(0.05, 2.0),
                         rng.next_double(0.1, 2.0)};
        ScalarField v = lagrange_potential(r.m1, r.m2, r.eps);
        for (const Vec2& pt : collinear_points(r)) {
            Mat2 closed = collinear_hessian(r, pt.x);
            Mat2 generic = v.hessian(pt);
            CHECK(closed.xx == doctest::Approx(generic.xx).epsilon(1e-8));
            CHECK(closed.yy == doctest::Approx(generic.yy).epsilon(1e-8));
            CHECK(std::fabs(generic.xy) < 1e-10);
            CHECK(closed.xx < 0.0);
        }
    }
    CHECK_THROWS_AS(collinear_hessian(p, 0.5), SingularPointError);
}

TEST_CASE("locate_all: five points with the expected structure") {
    Ball window{{0.0, 0.0}, 1.5};
    auto pts = locate_all(LagrangeParams{0.5, 0.5, 1.0}, window);
    REQUIRE(pts.size() == 5);
    // l1, l2, l3 saddles on the axis; l4, l5 off-axis maxima.
    for (int i = 0; i < 3; ++i) {
        CHECK(std::fabs(pts[i].location.y) < 1e-10);
        CHECK(pts[i].morse_index == 1);
    }
    Vec2 expect = off_axis_oracle(0.5, 0.5, 1.0);
    CHECK(expect.y == doctest::Approx(std::sqrt(3.0) / 2.0));  // equilateral configuration
    CHECK(pts[3].location.x == doctest::Approx(expect.x).epsilon(1e-8));
    CHECK(pts[3].location.y == doctest::Approx(expect.y).epsilon(1e-8));
    CHECK(pts[4].location.y == doctest::Approx(-expect.y).epsilon(1e-8));
    CHECK(pts[3].morse_index == 2);
    CHECK(pts[4].morse_index == 2);

    // Equal-mass symmetries: l4/l5 mirror across the axis, l2/l3 across q2.
    CHECK(dist(pts[3].location, Vec2{pts[4].location.x, -pts[4].location.y}) < 1e-8);
    CHECK(dist(pts[1].location, Vec2{-pts[2].location.x, 0.0}) < 1e-8);

    // Unequal masses move the pair off the q2-axis, per the closed form.
    auto pts2 = locate_all(LagrangeParams{0.6, 0.4, 1.0}, window);
    Vec2 expect2 = off_axis_oracle(0.6, 0.4, 1.0);
    CHECK(pts2[3].location.x == doctest::Approx(expect2.x).epsilon(1e-8));
    CHECK(pts2[3].location.y == doctest::Approx(expect2.y).epsilon(1e-8));
}

TEST_CASE("mass homotopy endpoints and the reference-mass margin") {
    LagrangeParams p{0.7, 0.2, 0.5};
    double m = reference_mass(p);
    CHECK(m == doctest::Approx(0.7));
    CHECK(m > p.eps / 16.0);
    CHECK(16.0 * m - p.eps > 0.0);

    ScalarField f0 = equal_mass_homotopy(p, 0.0);
    ScalarField f1 = equal_mass_homotopy(p, 1.0);
    ScalarField target = lagrange_potential(p.m1, p.m2, p.eps);
    ScalarField equal = lagrange_potential(m, m, p.eps);
    SplitMix64 rng(4);
    for (int i = 0; i < 25; ++i) {
        Vec2 q{rng.next_double(-1.4, 1.4), rng.next_double(-1.4, 1.4)};
        if (target.singular_distance(q) < 0.05) continue;
        CHECK(f1.eval_fn(q) == doctest::Approx(target.eval_fn(q)).epsilon(1e-14));
        CHECK(f0.eval_fn(q) == doctest::Approx(equal.eval_fn(q)).epsilon(1e-14));
    }
}

TEST_CASE("theorem reproduction pipeline on the equal-mass case") {
    LagrangeReport rep = theorem_a_pipeline(LagrangeParams{0.5, 0.5, 1.0}, 0.05, 4, 9);
    CHECK(rep.census_ok);
    CHECK(rep.all_match);
    REQUIRE(rep.points.size() == 5);
    for (int i = 0; i < 3; ++i) {
        CHECK(rep.points[i].betti_end == std::array<int, 3>{0, 1, 0});
        CHECK(rep.points[i].classification == "saddle");
    }
    for (int i = 3; i < 5; ++i) {
        CHECK(rep.points[i].betti_end == std::array<int, 3>{0, 0, 1});
        CHECK(rep.points[i].classification == "maximum");
    }
    CHECK(rep.t_grid.front() == 0.0);
    CHECK(rep.t_grid.back() == doctest::Approx(1.0));
}

TEST_CASE("theorem reproduction pipeline across a genuine mass march") {
    LagrangeReport rep = theorem_a_pipeline(LagrangeParams{0.6, 0.4, 1.0}, 0.05, 4, 9);
    CHECK(rep.all_match);
    for (const auto& pr : rep.points) {
        CHECK(pr.betti_invariant);
        CHECK(pr.track.size() == rep.t_grid.size());
    }
    // The tracked l4 ends at the closed-form location.
    Vec2 expect = off_axis_oracle(0.6, 0.4, 1.0);
    CHECK(dist(rep.points[3].at_end.location, expect) < 1e-7);
}

TEST_CASE("pipeline preconditions") {
    CHECK_THROWS_AS(theorem_a_pipeline(LagrangeParams{0.5, 0.5, 1.0}, 0.05, 1, 9),
                    BadParameterError);
    CHECK_THROWS_AS(theorem_a_pipeline(LagrangeParams{-0.5, 0.5, 1.0}, 0.05, 8, 9),
                    BadParameterError);
}
