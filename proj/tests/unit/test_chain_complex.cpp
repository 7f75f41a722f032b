#include <doctest.h>

#include "morsehom/chain_complex.hpp"
#include "morsehom/errors.hpp"
#include "morsehom/field.hpp"
#include "morsehom/local_homology.hpp"

using namespace morsehom;

namespace {

AnalyzeResult analyze_builtin(const char* name, double delta, uint64_t seed,
                              bool region = false) {
    AnalyzeOptions opts;
    opts.ball = Ball{{0.0, 0.0}, delta};
    opts.seed = seed;
    opts.require_isolation = !region;
    AnalyzeResult r = analyze_local_homology(builtin_field(name), opts);
    return r;
}

}  // namespace

TEST_CASE("single saddle complex: one generator in degree 1, zero boundaries") {
    AnalyzeResult r = analyze_builtin("quadratic-saddle", 0.5, 3);
    CHECK(r.complex.dim(0) == 0);
    CHECK(r.complex.dim(1) == 1);
    CHECK(r.complex.dim(2) == 0);
    CHECK(verify_d_squared(r.complex));
    CHECK(r.homology.betti == std::array<int, 3>{0, 1, 0});
}

TEST_CASE("pure extrema") {
    CHECK(analyze_builtin("quadratic-min", 0.5, 3).homology.betti ==
          std::array<int, 3>{1, 0, 0});
    CHECK(analyze_builtin("quadratic-max", 0.5, 3).homology.betti ==
          std::array<int, 3>{0, 0, 1});
}

TEST_CASE("double well region: C0 = 2, C1 = 1, d1 = (1,1)^T, betti (1,0,0)") {
    AnalyzeResult r = analyze_builtin("double-well", 1.5, 5, /*region=*/true);
    CHECK(r.complex.dim(0) == 2);
    CHECK(r.complex.dim(1) == 1);
    CHECK(r.complex.d1.at(0, 0));
    CHECK(r.complex.d1.at(1, 0));
    CHECK(r.homology.betti == std::array<int, 3>{1, 0, 0});
    CHECK(euler_characteristic(r.complex) == 1);
}

TEST_CASE("four-well region: d^2 = 0 is nontrivial and betti = (1,0,0)") {
    AnalyzeResult r = analyze_builtin("four-well", 1.8, 5, /*region=*/true);
    CHECK(r.complex.dim(0) == 4);
    CHECK(r.complex.dim(1) == 4);
    CHECK(r.complex.dim(2) == 1);
    CHECK(!r.complex.d1.is_zero());
    CHECK(!r.complex.d2.is_zero());
    CHECK(verify_d_squared(r.complex));
    CHECK(r.homology.betti == std::array<int, 3>{1, 0, 0});
    // Euler characteristic consistency.
    CHECK(euler_characteristic(r.complex) ==
          r.homology.betti[0] - r.homology.betti[1] + r.homology.betti[2]);
}

TEST_CASE("monkey saddle: two saddles, betti (0,2,0)") {
    AnalyzeResult r = analyze_builtin("monkey-saddle", 0.5, 11);
    CHECK(r.complex.dim(1) == 2);
    CHECK(r.homology.betti == std::array<int, 3>{0, 2, 0});
}

TEST_CASE("a failed d^2 = 0 is refused by homology") {
    ChainComplex bad;
    bad.generators[0] = {0};
    bad.generators[1] = {1};
    bad.generators[2] = {2};
    bad.d1 = GF2Matrix(1, 1);
    bad.d1.set(0, 0, true);
    bad.d2 = GF2Matrix(1, 1);
    bad.d2.set(0, 0, true);
    CHECK(!verify_d_squared(bad));
    CHECK_THROWS_AS(homology(bad), NotAComplexError);
}

TEST_CASE("degenerate generators are refused") {
    ScalarField f = quartic_saddle_field();
    CriticalSet cs = find_critical_points(f, Ball{{0, 0}, 0.5}, 16);
    REQUIRE(cs.points[0].degenerate);
    ConnectionMatrix conns;
    conns.ids1 = {0};
    conns.d1 = GF2Matrix(0, 1);
    conns.d2 = GF2Matrix(1, 0);
    CHECK_THROWS_AS(build_complex(cs, conns), DegenerateGeneratorError);
}

TEST_CASE("homology basis and induced identity map") {
    AnalyzeResult r = analyze_builtin("four-well", 1.8, 5, /*region=*/true);
    for (int k = 0; k < 3; ++k) {
        HomologyBasis hb = homology_basis(r.complex, k);
        CHECK(hb.reps.cols() == r.homology.betti[k]);
        GF2Matrix id = GF2Matrix::identity(r.complex.dim(k));
        GF2Matrix ind = induced_map(id, r.complex, r.complex, k);
        CHECK(ind == GF2Matrix::identity(r.homology.betti[k]));
    }
}

TEST_CASE("cusp: a min-saddle pair cancels to zero homology") {
    AnalyzeResult r = analyze_builtin("cusp", 0.5, 1);
    REQUIRE(r.complex.dim(0) == 1);
    REQUIRE(r.complex.dim(1) == 1);
    CHECK(r.complex.d1.at(0, 0));  // the spawned pair is connected
    CHECK(r.homology.betti == std::array<int, 3>{0, 0, 0});
    // Perturbation invariance holds for the vanishing answer too.
    for (uint64_t seed : {2, 3, 11}) {
        CHECK(analyze_builtin("cusp", 0.5, seed).homology.betti ==
              std::array<int, 3>{0, 0, 0});
    }
}
