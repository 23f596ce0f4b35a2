#include "accthr/circuit.hpp"
#include "accthr/evaluator.hpp"
#include "accthr/generators.hpp"
#include "accthr/symrank.hpp"
#include "accthr/transforms.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace accthr;

SymSymCircuit symsym_fixture(int n, int wires) {
    Rng rng(static_cast<std::uint64_t>(n * 1000 + wires));
    return lower_to_symsym(random_symsym(n, wires, rng));
}

void BM_Decompose(benchmark::State& state) {
    const SymSymCircuit c = symsym_fixture(static_cast<int>(state.range(0)), 200);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(c));
}
BENCHMARK(BM_Decompose)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

template <EvalMethod Method>
void BM_EvalAll(benchmark::State& state) {
    const SymSymCircuit c = symsym_fixture(static_cast<int>(state.range(0)), 200);
    EvalPlan plan;
    plan.method = Method;
    plan.fallback = false;
    EvalStats stats;
    for (auto _ : state) benchmark::DoNotOptimize(eval_all_symsym(c, plan, &stats));
    state.counters["rank"] = static_cast<double>(stats.rank);
    state.counters["assignments/s"] =
        benchmark::Counter(static_cast<double>(std::uint64_t{1} << state.range(0)), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_EvalAll<EvalMethod::SymrankNaiveMm>)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvalAll<EvalMethod::DirectOuterSum>)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BruteForceTable(benchmark::State& state) {
    Rng rng(static_cast<std::uint64_t>(state.range(0)));
    const Circuit c = random_symsym(static_cast<int>(state.range(0)), 200, rng);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_truth_table(c));
    state.counters["assignments/s"] =
        benchmark::Counter(static_cast<double>(std::uint64_t{1} << state.range(0)), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_BruteForceTable)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_CountSat(benchmark::State& state) {
    Rng rng(7);
    const Circuit c = random_two_layer(18, 6, GateKind::Sym, BottomMix::Both, 10, 1000, rng);
    CountOptions opts;
    opts.ell = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_sat_split(c, opts));
}
BENCHMARK(BM_CountSat)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace
