#include "support.hpp"

#include "accthr/errors.hpp"
#include "accthr/evaluator.hpp"
#include "accthr/generators.hpp"

#include <gtest/gtest.h>

namespace accthr {
namespace {

constexpr EvalMethod kAllMethods[] = {EvalMethod::Oracle, EvalMethod::SymrankNaiveMm, EvalMethod::SymrankCoppersmith,
                                      EvalMethod::DirectOuterSum};

EvalPlan plan_for(EvalMethod m) {
    EvalPlan plan;
    plan.method = m;
    return plan;
}

TEST(Methods, NamesRoundTrip) {
    for (const auto m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
    EXPECT_THROW(parse_method("quantum"), std::exception);
}

TEST(ApplyFilter, IdentityAndParity) {
    CountMatrix bits(2, 2);
    bits.at(0, 1) = 1;
    bits.at(1, 0) = 1;
    const std::uint8_t identity[] = {0, 1};
    const BitMatrix same = apply_filter(bits, identity);
    EXPECT_FALSE(same.get(0, 0));
    EXPECT_TRUE(same.get(0, 1));
    EXPECT_TRUE(same.get(1, 0));
    EXPECT_FALSE(same.get(1, 1));

    CountMatrix counts(2, 2);
    counts.at(0, 0) = 2;
    counts.at(0, 1) = 3;
    counts.at(1, 0) = 0;
    counts.at(1, 1) = 1;
    const std::uint8_t parity[] = {0, 1, 0, 1};
    const BitMatrix p = apply_filter(counts, parity);
    EXPECT_FALSE(p.get(0, 0));
    EXPECT_TRUE(p.get(0, 1));
    EXPECT_FALSE(p.get(1, 0));
    EXPECT_TRUE(p.get(1, 1));

    counts.at(1, 1) = 9;
    EXPECT_THROW(apply_filter(counts, parity), InvalidInput);
}

TEST(ApplyFilter, ThresholdFilter) {
    Rng rng(301);
    CountMatrix counts(9, 7);
    for (auto& v : counts.values) v = static_cast<std::uint32_t>(rng.below(20));
    std::vector<std::uint8_t> filter(20);
    for (std::size_t v = 0; v < 20; ++v) filter[v] = v >= 11 ? 1 : 0;
    const BitMatrix out = apply_filter(counts, filter);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(out.get(i, j), counts.at(i, j) >= 11);
}

TEST(EvalAll, AndOfTwo) {
    const SymSymCircuit c = lower_to_symsym(parse_circuit("inputs 2\ngate a AND x1 x2\ngate t SYM 01 a\noutput t\n"));
    for (const auto m : kAllMethods) EXPECT_EQ(eval_all_symsym(c, plan_for(m)).to_string(), "0001") << method_name(m);
}

TEST(EvalAll, ParityOfParities) {
    std::string text = "inputs 12\n";
    for (int g = 0; g < 4; ++g) {
        text += "gate p" + std::to_string(g) + " XOR";
        for (int i = 0; i < 4; ++i) text += " x" + std::to_string(1 + (g * 3 + i) % 12);
        text += "\n";
    }
    text += "gate t XOR p0 p1 p2 p3\noutput t\n";
    const Circuit circuit = parse_circuit(text);
    const SymSymCircuit c = lower_to_symsym(circuit);
    const TruthTable want = brute_force_truth_table(circuit);
    for (const auto m : kAllMethods) EXPECT_EQ(eval_all_symsym(c, plan_for(m)), want) << method_name(m);
}

TEST(EvalAll, RandomCircuitsUnderEveryMethod) {
    Rng rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit circuit = random_symsym(8 + trial % 7, 80, rng);
        const SymSymCircuit c = lower_to_symsym(circuit);
        const TruthTable want = brute_force_truth_table(circuit);
        for (const auto m : kAllMethods) EXPECT_EQ(eval_all_symsym(c, plan_for(m)), want) << method_name(m);
    }
}

TEST(EvalAll, CoppersmithEngineOnSmallRank) {
    // One AND gate across the halves has rank 1, which the alpha bound admits.
    const Circuit circuit = parse_circuit("inputs 16\ngate a AND x1 x9\ngate t SYM 01 a\noutput t\n");
    EvalStats stats;
    EXPECT_EQ(eval_all_symsym(lower_to_symsym(circuit), plan_for(EvalMethod::SymrankCoppersmith), &stats),
              brute_force_truth_table(circuit));
    EXPECT_EQ(stats.used, EvalMethod::SymrankCoppersmith);
    EXPECT_EQ(stats.rank, 1U);
    EXPECT_GT(stats.multiplications, 0U);
}

TEST(EvalAll, CoppersmithFallsBackOnLargeRank) {
    Rng rng(305);
    const Circuit circuit = random_symsym(10, 60, rng);
    const SymSymCircuit c = lower_to_symsym(circuit);
    EvalStats stats;
    EXPECT_EQ(eval_all_symsym(c, plan_for(EvalMethod::SymrankCoppersmith), &stats), brute_force_truth_table(circuit));
    EXPECT_EQ(stats.used, EvalMethod::SymrankNaiveMm);
    EvalPlan strict = plan_for(EvalMethod::SymrankCoppersmith);
    strict.fallback = false;
    EXPECT_THROW(eval_all_symsym(c, strict), CapExceeded);
}

TEST(EvalAll, RankCapFallback) {
    Rng rng(307);
    const Circuit circuit = random_symsym(10, 60, rng);
    const SymSymCircuit c = lower_to_symsym(circuit);
    EvalPlan plan = plan_for(EvalMethod::SymrankNaiveMm);
    plan.rank_cap = 1;
    EvalStats stats;
    EXPECT_EQ(eval_all_symsym(c, plan, &stats), brute_force_truth_table(circuit));
    EXPECT_EQ(stats.used, EvalMethod::DirectOuterSum);
    plan.fallback = false;
    EXPECT_THROW(eval_all_symsym(c, plan), CapExceeded);
}

TEST(Count, ParityOfEight) {
    const Circuit c = parse_circuit("inputs 8\ngate g XOR x1 x2 x3 x4 x5 x6 x7 x8\noutput g\n");
    CountOptions opts;
    opts.ell = 2;
    EXPECT_EQ(count_sat_split(c, opts).count, 128U);
}

TEST(Count, SingleThreshold) {
    const Circuit c = parse_circuit("inputs 3\ngate g THR 2 1@x1 1@x2 1@x3\noutput g\n");
    CountOptions opts;
    opts.ell = 1;
    EXPECT_EQ(count_sat_split(c, opts).count, 4U);
}

TEST(Count, RandomAndOfThreshold) {
    Rng rng(309);
    for (int trial = 0; trial < 5; ++trial) {
        const Circuit c = random_two_layer(14, 4, GateKind::And, BottomMix::Threshold, 6, 20, rng);
        CountOptions opts;
        opts.ell = 2;
        EXPECT_EQ(count_sat_split(c, opts).count, brute_force_count_sat(c));
    }
}

TEST(Count, IndependentOfEllOnDeterministicPaths) {
    Rng rng(311);
    for (int trial = 0; trial < 6; ++trial) {
        const Circuit c = random_two_layer(12, 4, trial % 2 ? GateKind::Sym : GateKind::And, BottomMix::Both, 6, 20, rng);
        const std::uint64_t want = brute_force_count_sat(c);
        for (int ell = 1; ell <= 3; ++ell) {
            CountOptions opts;
            opts.ell = ell;
            const CountReport r = count_sat_split(c, opts);
            EXPECT_EQ(r.count, want) << "ell=" << ell;
            EXPECT_NE(r.path, CountPath::Randomized);
        }
    }
}

TEST(Count, RandomizedPathOnAc0Tops) {
    Rng rng(313);
    int correct = 0;
    constexpr int kTrials = 10;
    for (int trial = 0; trial < kTrials; ++trial) {
        const Circuit c = random_ac0_over_sym(10, 4, rng);
        CountOptions opts;
        opts.ell = 1;
        opts.seed = rng();
        opts.force_randomized = true;
        const CountReport r = count_sat_split(c, opts);
        EXPECT_EQ(r.path, CountPath::Randomized);
        correct += r.count == brute_force_count_sat(c) ? 1 : 0;
    }
    EXPECT_GE(correct, kTrials - 1);
}

TEST(Count, DefaultEll) {
    EXPECT_EQ(default_ell(8), 2);
    EXPECT_EQ(default_ell(27), 3);
    EXPECT_EQ(default_ell(3), 1);
}

TEST(Equiv, Examples) {
    const Circuit and1 = parse_circuit("inputs 2\ngate g AND x1 x2\noutput g\n");
    const Circuit and2 = parse_circuit("inputs 2\ngate g SYM 001 x2 x1\noutput g\n");
    const Circuit x1 = parse_circuit("inputs 2\ngate g AND x1\noutput g\n");
    const Circuit x2 = parse_circuit("inputs 2\ngate g AND x2\noutput g\n");
    const Circuit not_x1 = parse_circuit("inputs 2\ngate g AND ~x1\noutput g\n");
    EXPECT_TRUE(equiv_via_count(and1, and2));
    EXPECT_FALSE(equiv_via_count(x1, x2));
    EXPECT_TRUE(antiequiv_via_count(x1, not_x1));
    EXPECT_FALSE(antiequiv_via_count(x1, x1));
}

TEST(Equiv, RandomPairsMatchTables) {
    Rng rng(317);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit g = random_two_layer(10, 3, GateKind::And, BottomMix::Both, 4, 9, rng);
        const Circuit h = trial % 3 == 0 ? g : trial % 3 == 1 ? negate_output(g) : random_two_layer(10, 3, GateKind::And, BottomMix::Both, 4, 9, rng);
        const TruthTable tg = brute_force_truth_table(g);
        TruthTable th = brute_force_truth_table(h);
        EXPECT_EQ(equiv_via_count(g, h, {}, {}), tg == th);
        th.bits().invert();
        EXPECT_EQ(antiequiv_via_count(g, h, {}, {}), tg == th);
    }
}

}  // namespace
}  // namespace accthr
