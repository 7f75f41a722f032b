#include <benchmark/benchmark.h>

#include "morsehom/critical_points.hpp"
#include "morsehom/cubical.hpp"
#include "morsehom/field.hpp"
#include "morsehom/local_homology.hpp"

namespace {

using namespace morsehom;

void BM_LagrangeGradient(benchmark::State& state) {
    ScalarField f = lagrange_potential(0.5, 0.5, 1.0);
    Vec2 q{0.31, 0.17};
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.grad_fn(q));
    }
}
BENCHMARK(BM_LagrangeGradient);

void BM_CriticalPointCensus(benchmark::State& state) {
    ScalarField f = lagrange_potential(0.5, 0.5, 1.0);
    Ball window{Vec2{0.0, 0.0}, 1.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            find_critical_points(f, window, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_CriticalPointCensus)->Arg(16)->Arg(32)->Arg(48);

void BM_AnalyzeMonkeySaddle(benchmark::State& state) {
    ScalarField f = monkey_saddle_field();
    AnalyzeOptions opts;
    opts.ball = Ball{Vec2{0.0, 0.0}, 0.5};
    opts.seed = 11;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze_local_homology(f, opts));
    }
}
BENCHMARK(BM_AnalyzeMonkeySaddle);

void BM_CubicalOracle(benchmark::State& state) {
    ScalarField f = monkey_saddle_field();
    CubicalOracleOptions opts;
    opts.grid_n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cubical_local_homology(f, Vec2{0.0, 0.0}, 0.5, opts));
    }
}
BENCHMARK(BM_CubicalOracle)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
