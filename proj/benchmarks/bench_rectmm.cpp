#include "support.hpp"

#include "accthr/field.hpp"
#include "accthr/rectmm.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace accthr;

void report_ops(benchmark::State& state, const OpCounter& ops) {
    state.counters["base_mults"] = static_cast<double>(ops.multiplications);
}

void BM_StructuredSparse(benchmark::State& state) {
    const PrimeField f(PrimeField::kMersenne61);
    Rng rng(11);
    const int m = static_cast<int>(state.range(0));
    const FieldMatrix a = testing::random_pattern_matrix(f, m, true, rng);
    const FieldMatrix b = testing::random_pattern_matrix(f, m, false, rng);
    OpCounter ops;
    for (auto _ : state) {
        ops = {};
        benchmark::DoNotOptimize(structured_sparse_mm(f, a, b, m, &ops));
    }
    report_ops(state, ops);
}
BENCHMARK(BM_StructuredSparse)->DenseRange(1, 4);

void BM_Algorithm1(benchmark::State& state) {
    const PrimeField f(PrimeField::kMersenne61);
    const CoppersmithPlan plan(f, 5);
    const FieldMatrix a = random_matrix(f, plan.wide(), plan.embedded(), 1);
    const FieldMatrix b = random_matrix(f, plan.embedded(), plan.narrow(), 2);
    OpCounter ops;
    for (auto _ : state) {
        ops = {};
        benchmark::DoNotOptimize(algorithm1(plan, a, b, &ops));
    }
    report_ops(state, ops);
}
BENCHMARK(BM_Algorithm1)->Unit(benchmark::kMicrosecond);

void BM_TensorBlock(benchmark::State& state) {
    const PrimeField f(PrimeField::kMersenne61);
    const CoppersmithPlan plan(f, 5);
    const std::size_t wide = plan.embedded() * plan.wide();
    const std::size_t inner = plan.narrow() * plan.narrow();
    const FieldMatrix a = random_matrix(f, wide, inner, 3);
    const FieldMatrix b = random_matrix(f, inner, wide, 4);
    OpCounter ops;
    for (auto _ : state) {
        ops = {};
        benchmark::DoNotOptimize(tensor_block_mm(plan, a, b, &ops));
    }
    report_ops(state, ops);
}
BENCHMARK(BM_TensorBlock)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_NaiveTensorShape(benchmark::State& state) {
    const PrimeField f(PrimeField::kMersenne61);
    const FieldMatrix a = random_matrix(f, 1280, 4, 3);
    const FieldMatrix b = random_matrix(f, 4, 1280, 4);
    OpCounter ops;
    for (auto _ : state) {
        ops = {};
        benchmark::DoNotOptimize(naive_mm(f, a, b, &ops));
    }
    report_ops(state, ops);
}
BENCHMARK(BM_NaiveTensorShape)->Unit(benchmark::kMillisecond);

}  // namespace
