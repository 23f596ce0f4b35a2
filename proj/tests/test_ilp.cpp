#include "support.hpp"

#include "accthr/errors.hpp"
#include "accthr/ilp.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace accthr {
namespace {

using testing::random_ilp;

// Exhaustive reference written against the instance fields directly.
std::optional<BigInt> exhaustive_optimum(const IlpInstance& inst) {
    std::optional<BigInt> best;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << inst.n); ++x) {
        bool ok = true;
        for (const auto& con : inst.constraints) {
            BigInt lhs = 0;
            for (int i = 0; i < inst.n; ++i)
                if ((x >> i) & 1U) lhs += con.a[static_cast<std::size_t>(i)];
            ok = ok && lhs <= con.b;
        }
        if (!ok) continue;
        BigInt value = 0;
        if (inst.objective)
            for (int i = 0; i < inst.n; ++i)
                if ((x >> i) & 1U) value += (*inst.objective)[static_cast<std::size_t>(i)];
        if (!best || value > *best) best = value;
    }
    return best;
}

TEST(Parse, Examples) {
    const IlpInstance inst = parse_ilp("vars 2\nmax 1 1\ncon 1 1 <= 1\n");
    EXPECT_EQ(inst.n, 2);
    ASSERT_EQ(inst.constraints.size(), 1U);
    ASSERT_TRUE(inst.objective.has_value());
    EXPECT_EQ(inst.constraints[0].b, 1);

    const IlpInstance feas = parse_ilp("# comment\nvars 3\nfeasibility\n\ncon 1 -2 3 <= 0\n");
    EXPECT_FALSE(feas.objective.has_value());
    EXPECT_EQ(feas.constraints[0].a[1], -2);

    EXPECT_THROW(parse_ilp("vars 2\ncon 1 1 1 <= 1\n"), ParseError);
    EXPECT_THROW(parse_ilp("vars 2\ncon 1 1 >= 1\n"), ParseError);
    EXPECT_THROW(parse_ilp("con 1 1 <= 1\n"), ParseError);
    EXPECT_THROW(parse_ilp("vars 2\ncon 1 1 <= 1\nmax 1 1\n"), ParseError);
}

TEST(Parse, RoundTrip) {
    Rng rng(401);
    for (int trial = 0; trial < 20; ++trial) {
        const IlpInstance inst = random_ilp(6, 3, 1000, rng);
        const IlpInstance back = parse_ilp(serialize(inst));
        EXPECT_EQ(back.n, inst.n);
        EXPECT_EQ(back.objective, inst.objective);
        ASSERT_EQ(back.constraints.size(), inst.constraints.size());
        for (std::size_t j = 0; j < inst.constraints.size(); ++j) {
            EXPECT_EQ(back.constraints[j].a, inst.constraints[j].a);
            EXPECT_EQ(back.constraints[j].b, inst.constraints[j].b);
        }
    }
}

TEST(FeasibilityCircuit, Examples) {
    IlpInstance empty;
    empty.n = 2;
    empty.validate();
    EXPECT_EQ(brute_force_truth_table(feasibility_circuit(empty)).to_string(), "1111");

    const IlpInstance one = parse_ilp("vars 2\nfeasibility\ncon 1 1 <= 1\n");
    EXPECT_EQ(brute_force_truth_table(feasibility_circuit(one)).to_string(), "1110");
}

TEST(FeasibilityCircuit, MatchesDirectChecks) {
    Rng rng(403);
    for (int trial = 0; trial < 20; ++trial) {
        const IlpInstance inst = random_ilp(10, 4, 100, rng);
        const BigInt bound = rng.uniform(-100, 100);
        const TruthTable plain = brute_force_truth_table(feasibility_circuit(inst));
        const TruthTable bounded = brute_force_truth_table(feasibility_circuit(inst, bound));
        for (std::uint64_t x = 0; x < 1024; ++x) {
            EXPECT_EQ(plain.get(x), inst.satisfied(x));
            EXPECT_EQ(bounded.get(x), inst.satisfied(x, bound));
        }
    }
}

TEST(CopyParameter, DefaultAndClamp) {
    IlpInstance inst = parse_ilp("vars 16\nfeasibility\ncon 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 <= 3\n");
    EXPECT_GE(default_copy_parameter(inst), 1);
    IlpSolveParams p;
    p.k = 40;
    EXPECT_EQ(effective_copy_parameter(inst, p), 15);
    const IlpInstance single = parse_ilp("vars 1\nmax 1\n");
    EXPECT_EQ(effective_copy_parameter(single, p), 0);
}

TEST(Feasibility, InfeasibleSystemIsNeverAccepted) {
    const IlpInstance inst = parse_ilp("vars 1\nfeasibility\ncon 1 <= 0\ncon -1 <= -1\n");
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        IlpSolveParams p;
        p.seed = seed;
        p.oracle_fallback = false;
        EXPECT_FALSE(solve_feasibility_randomized(inst, std::nullopt, p).feasible);
    }
}

TEST(Feasibility, EmptySystemIsFeasible) {
    IlpInstance inst;
    inst.n = 4;
    inst.validate();
    IlpSolveParams p;
    p.oracle_fallback = false;
    EXPECT_TRUE(solve_feasibility_randomized(inst, std::nullopt, p).feasible);
}

TEST(Feasibility, AnyRepeatIsSoundOnlyWithExactPolynomials) {
    Rng rng(405);
    for (int trial = 0; trial < 10; ++trial) {
        const IlpInstance inst = random_ilp(10, 3, 100, rng);
        const BigInt bound = rng.uniform(-50, 50);
        IlpSolveParams p;
        p.k = 3;
        p.seed = rng();
        p.oracle_fallback = false;
        const FeasibilityReport r = solve_feasibility_randomized(inst, bound, p);
        EXPECT_EQ(r.k, 3);
        EXPECT_EQ(r.repeat_ones.size(), 25U);
        if (r.exact_polynomials) {
            EXPECT_EQ(r.decision, IlpDecision::AnyRepeat);
            // A 1 in any repeat certifies a satisfied copy.
            for (std::uint64_t y = 0; y < r.any_repeat.size(); ++y) {
                if (!r.any_repeat.get(y)) continue;
                bool some = false;
                for (std::uint64_t j = 0; j < 8; ++j) some = some || inst.satisfied(j | (y << 3), bound);
                EXPECT_TRUE(some);
            }
        } else {
            EXPECT_EQ(r.decision, IlpDecision::Majority);
        }
    }
}

TEST(Feasibility, LiteralAndFactoredRoutesAgree) {
    Rng rng(407);
    for (int trial = 0; trial < 5; ++trial) {
        const IlpInstance inst = random_ilp(8, 3, 100, rng);
        IlpSolveParams p;
        p.k = 2;
        p.repeats = 5;
        p.seed = rng();
        p.oracle_fallback = false;
        p.decision = IlpDecision::Majority;
        const FeasibilityReport factored = solve_feasibility_randomized(inst, BigInt(0), p);
        p.route = IlpRoute::Literal;
        const FeasibilityReport literal = solve_feasibility_randomized(inst, BigInt(0), p);
        EXPECT_EQ(factored.repeat_ones, literal.repeat_ones);
        EXPECT_EQ(factored.majority, literal.majority);
    }
}

TEST(Feasibility, PerRepeatAgreementWithOrOfCopies) {
    Rng rng(409);
    const IlpInstance inst = random_ilp(10, 2, 50, rng);
    IlpSolveParams p;
    p.k = 2;
    p.repeats = 1;
    p.oracle_fallback = false;
    p.eps = Rational{1, 8};
    p.decision = IlpDecision::Majority;
    const std::uint64_t free = std::uint64_t{1} << 8;
    std::vector<int> agree(free, 0);
    constexpr int kRuns = 60;
    for (int run = 0; run < kRuns; ++run) {
        p.seed = rng();
        const FeasibilityReport r = solve_feasibility_randomized(inst, std::nullopt, p);
        for (std::uint64_t y = 0; y < free; ++y) {
            bool want = false;
            for (std::uint64_t j = 0; j < 4; ++j) want = want || inst.satisfied(j | (y << 2));
            agree[y] += r.majority.get(y) == want ? 1 : 0;
        }
    }
    double mean = 0;
    for (const int a : agree) mean += a / double(kRuns);
    mean /= static_cast<double>(free);
    EXPECT_GE(mean, 2.0 / 3.0);
}

TEST(Optimize, Examples) {
    const IlpResult r = optimize(parse_ilp("vars 2\nmax 1 1\ncon 1 1 <= 1\n"));
    EXPECT_EQ(r.status, IlpStatus::Optimal);
    EXPECT_EQ(r.value, BigInt(1));

    const IlpResult free = optimize(parse_ilp("vars 5\nmax 1 1 1 1 1\n"));
    EXPECT_EQ(free.value, BigInt(5));

    EXPECT_EQ(optimize(parse_ilp("vars 1\nmax 1\ncon 1 <= 0\ncon -1 <= -1\n")).status, IlpStatus::Infeasible);
    EXPECT_EQ(optimize(parse_ilp("vars 3\nfeasibility\ncon 1 1 1 <= 1\n")).status, IlpStatus::Feasible);
}

TEST(Optimize, WitnessIsFeasibleAndOptimal) {
    Rng rng(411);
    for (int trial = 0; trial < 5; ++trial) {
        const IlpInstance inst = random_ilp(10, 3, 100, rng);
        IlpSolveParams p;
        p.k = 2;
        p.seed = rng();
        p.witness = true;
        const IlpResult r = optimize(inst, p);
        const auto want = exhaustive_optimum(inst);
        if (!want) {
            EXPECT_EQ(r.status, IlpStatus::Infeasible);
            continue;
        }
        ASSERT_EQ(r.value, want);
        ASSERT_TRUE(r.witness.has_value());
        EXPECT_FALSE(r.diagnostics.witness_rejected);
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < r.witness->size(); ++i)
            if ((*r.witness)[i]) x |= std::uint64_t{1} << i;
        EXPECT_TRUE(inst.satisfied(x));
        EXPECT_EQ(inst.objective_value(x), *want);
    }
}

TEST(Optimize, MatchesExhaustiveSearch) {
    Rng rng(413);
    for (int trial = 0; trial < 10; ++trial) {
        const IlpInstance inst = random_ilp(12, 6, 1000, rng);
        IlpSolveParams p;
        p.k = 3;
        p.seed = rng();
        const IlpResult r = optimize(inst, p);
        const auto want = exhaustive_optimum(inst);
        EXPECT_EQ(r.status == IlpStatus::Infeasible, !want.has_value());
        if (want) {
            EXPECT_EQ(r.value, want);
        }
        const IlpResult ref = brute_force_ilp(inst);
        EXPECT_EQ(ref.value, want);
    }
}

TEST(Optimize, CallCountBound) {
    Rng rng(415);
    for (int trial = 0; trial < 10; ++trial) {
        const IlpInstance inst = random_ilp(8, 2, 1000, rng);
        IlpSolveParams p;
        p.k = 2;
        p.seed = rng();
        const IlpResult r = optimize(inst, p);
        const double span = static_cast<double>(inst.objective_span());
        EXPECT_LE(static_cast<double>(r.diagnostics.search_calls.size()), std::ceil(std::log2(2 * span + 1)) + 1);
    }
}

TEST(Optimize, DeterministicInTheSeed) {
    Rng rng(417);
    const IlpInstance inst = random_ilp(10, 4, 1000, rng);
    IlpSolveParams p;
    p.k = 3;
    p.seed = 99;
    const IlpResult a = optimize(inst, p);
    const IlpResult b = optimize(inst, p);
    ASSERT_EQ(a.diagnostics.search_calls.size(), b.diagnostics.search_calls.size());
    for (std::size_t i = 0; i < a.diagnostics.search_calls.size(); ++i)
        EXPECT_EQ(a.diagnostics.search_calls[i].repeat_ones, b.diagnostics.search_calls[i].repeat_ones);
}

}  // namespace
}  // namespace accthr
