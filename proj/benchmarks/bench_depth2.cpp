#include "support.hpp"

#include "accthr/depth2.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace accthr;

void BM_CircledastNaive(benchmark::State& state) {
    Rng rng(21);
    const auto n = static_cast<std::size_t>(state.range(0));
    const WtpInstance inst = testing::random_wtp(n, 16, n, 1 << 20, BigInt(1) << 32, rng);
    for (auto _ : state) benchmark::DoNotOptimize(circledast_naive(inst));
}
BENCHMARK(BM_CircledastNaive)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_WeightedThresholdProduct(benchmark::State& state) {
    Rng rng(21);
    const auto n = static_cast<std::size_t>(state.range(0));
    const WtpInstance inst = testing::random_wtp(n, 16, n, 1 << 20, BigInt(1) << 32, rng);
    Depth2Params params;
    params.capacity = static_cast<std::size_t>(state.range(1));
    WtpStats stats;
    for (auto _ : state) benchmark::DoNotOptimize(weighted_threshold_product(inst, params, &stats));
    state.counters["buckets"] = static_cast<double>(stats.buckets);
}
BENCHMARK(BM_WeightedThresholdProduct)
    ->ArgsProduct({{128, 256}, {1, 16, 64, 256}})
    ->Unit(benchmark::kMillisecond);

void BM_ThrThrRectangle(benchmark::State& state) {
    Rng rng(23);
    const int k = static_cast<int>(state.range(0));
    const Circuit c = testing::random_thrthr(2 * k, 16, 64, rng);
    RectInput rect;
    rect.k = k;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) {
        rect.left.push_back(i);
        rect.right.push_back(i);
    }
    for (auto _ : state) benchmark::DoNotOptimize(eval_thrthr_rectangle(c, rect));
}
BENCHMARK(BM_ThrThrRectangle)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
