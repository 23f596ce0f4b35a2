#include "support.hpp"

#include "accthr/ilp.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace accthr;

void BM_Optimize(benchmark::State& state) {
    Rng rng(31);
    const IlpInstance inst = testing::random_ilp(static_cast<int>(state.range(0)), 6, 1000, rng);
    IlpSolveParams params;
    params.k = 3;
    for (auto _ : state) benchmark::DoNotOptimize(optimize(inst, params));
}
BENCHMARK(BM_Optimize)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BruteForceIlp(benchmark::State& state) {
    Rng rng(31);
    const IlpInstance inst = testing::random_ilp(static_cast<int>(state.range(0)), 6, 1000, rng);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_ilp(inst));
}
BENCHMARK(BM_BruteForceIlp)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
