#include <doctest.h>

#include <cmath>

#include "morsehom/errors.hpp"
#include "morsehom/geometry.hpp"
#include "morsehom/gf2.hpp"
#include "morsehom/rng.hpp"

using namespace morsehom;

TEST_CASE("closed-form symmetric eigensolver on diagonal and rotated saddles") {
    SymEig2 e = eigen_sym2(Mat2{2.0, 0.0, -2.0});
    CHECK(e.values[0] == doctest::Approx(-2.0));
    CHECK(e.values[1] == doctest::Approx(2.0));
    CHECK(std::fabs(e.vectors[0].y) == doctest::Approx(1.0));  // unstable axis = e2
    CHECK(std::fabs(e.vectors[1].x) == doctest::Approx(1.0));

    // xy has eigenpairs -1: (1,-1)/sqrt2 and +1: (1,1)/sqrt2.
    SymEig2 r = eigen_sym2(Mat2{0.0, 1.0, 0.0});
    CHECK(r.values[0] == doctest::Approx(-1.0));
    CHECK(r.values[1] == doctest::Approx(1.0));
    CHECK(r.vectors[0].x * r.vectors[0].y == doctest::Approx(-0.5));
    CHECK(r.vectors[1].x * r.vectors[1].y == doctest::Approx(0.5));
}

TEST_CASE("eigendecomposition reconstructs random symmetric matrices") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        Mat2 m{rng.next_double(-3, 3), rng.next_double(-3, 3), rng.next_double(-3, 3)};
        SymEig2 e = eigen_sym2(m);
        CHECK(e.values[0] <= e.values[1]);
        for (int k = 0; k < 2; ++k) {
            Vec2 res = m.apply(e.vectors[k]) - e.values[k] * e.vectors[k];
            CHECK(res.norm() < 1e-12 * (1.0 + std::fabs(e.values[k])));
            CHECK(e.vectors[k].norm() == doctest::Approx(1.0));
        }
        CHECK(std::fabs(e.vectors[0].dot(e.vectors[1])) < 1e-12);
    }
}

TEST_CASE("gf2 rank matches transpose rank and respects bounds") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        int r = 1 + static_cast<int>(rng.next() % 8);
        int c = 1 + static_cast<int>(rng.next() % 8);
        GF2Matrix a(r, c), at(c, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                bool v = rng.next() & 1;
                a.set(i, j, v);
                at.set(j, i, v);
            }
        int ra = a.rank();
        CHECK(ra == at.rank());
        CHECK(ra <= std::min(r, c));
        CHECK((a + a).is_zero());
    }
}

TEST_CASE("gf2 multiply against direct convolution") {
    SplitMix64 rng(99);
    GF2Matrix a(5, 7), b(7, 4);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 7; ++j) a.set(i, j, rng.next() & 1);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 4; ++j) b.set(i, j, rng.next() & 1);
    GF2Matrix c = a * b;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) {
            bool acc = false;
            for (int k = 0; k < 7; ++k) acc = acc != (a.at(i, k) && b.at(k, j));
            CHECK(c.at(i, j) == acc);
        }
    CHECK_THROWS_AS(b * a, ShapeMismatchError);
}

TEST_CASE("gf2 solve and nullspace") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        int r = 2 + static_cast<int>(rng.next() % 6);
        int c = 2 + static_cast<int>(rng.next() % 6);
        GF2Matrix a(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) a.set(i, j, rng.next() & 1);

        // Every nullspace vector is annihilated.
        for (const auto& z : gf2_nullspace(a)) {
            auto y = a.apply(z);
            for (bool v : y) CHECK(!v);
        }
        CHECK(static_cast<int>(gf2_nullspace(a).size()) == c - a.rank());

        // A x = A x0 is always solvable and the solution reproduces the rhs.
        std::vector<bool> x0(c);
        for (int j = 0; j < c; ++j) x0[j] = rng.next() & 1;
        auto b = a.apply(x0);
        std::vector<bool> x;
        REQUIRE(gf2_solve(a, b, x));
        CHECK(a.apply(x) == b);
    }
}
