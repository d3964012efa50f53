#include <benchmark/benchmark.h>

#include <random>

#include "mqv/ext.hpp"
#include "mqv/stability.hpp"

using namespace mqv;

namespace {

const Field F = Field::rational();

ExactMatrix random_square(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(-9, 9);
    ExactMatrix m(F, n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m.at(r, c) = Scalar::from_int(F, d(rng));
    return m;
}

DoubledQuiver two_loops() {
    return make_double(Quiver{{"v"}, {{"a", 0, 0}, {"b", 0, 0}}});
}

void BM_rank_kernel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ExactMatrix m = random_square(n, 42);
    for (auto _ : state) benchmark::DoNotOptimize(rank_kernel(m).rank);
}
BENCHMARK(BM_rank_kernel)->Arg(8)->Arg(16)->Arg(24);

void BM_sampler(benchmark::State& state) {
    DoubledQuiver qd = two_loops();
    std::vector<Scalar> q{Scalar::from_int(F, 1)};
    std::uint64_t seed = 1;
    for (auto _ : state) {
        SampleResult sr = sample_rep(qd, DimVector{{2}}, q, F, seed++);
        benchmark::DoNotOptimize(sr.attempts);
    }
}
BENCHMARK(BM_sampler);

void BM_complex_report(benchmark::State& state) {
    DoubledQuiver qd = two_loops();
    std::vector<Scalar> q{Scalar::from_int(F, 1)};
    SampleResult sr = sample_rep(qd, DimVector{{2}}, q, F, 3);
    auto ctx = std::make_shared<const PathCtx>(PathCtx{qd, F});
    RelationElements rel = build_relation(ctx, q);
    GradedModule V = induce(sr.rep, 4);
    for (auto _ : state) {
        ExtComplex C = build_ext_complex(V, V, rel);
        benchmark::DoNotOptimize(complex_report(C).h0);
    }
}
BENCHMARK(BM_complex_report);

void BM_destabilizer(benchmark::State& state) {
    Representation R;
    R.qd = two_loops();
    R.alpha = DimVector{{2}};
    R.field = F;
    SampleResult sr = sample_rep(R.qd, R.alpha, {Scalar::from_int(F, 1)}, F, 5);
    GradedModule M = induce(sr.rep, 4);
    StabilityVector theta =
        lift_stability(StabilityVector{{Rat(0)}}, R.alpha, 1, 4, Rat(31));
    SearchBounds b;
    b.total_dim = 10;
    for (auto _ : state) {
        StabilityVerdict v = verdict_graded(M, theta, 5, b);
        benchmark::DoNotOptimize(v.kind);
    }
}
BENCHMARK(BM_destabilizer);

} // namespace

BENCHMARK_MAIN();
