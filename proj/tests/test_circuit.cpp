#include "support.hpp"

#include "accthr/circuit.hpp"
#include "accthr/errors.hpp"
#include "accthr/generators.hpp"

#include <gtest/gtest.h>

namespace accthr {
namespace {

using testing::bits_of;

bool eval_text(std::string_view text, std::vector<std::uint8_t> x) { return eval_on_assignment(parse_circuit(text), x); }

TEST(Parse, SmallestProgramIsTwoInputAnd) {
    const Circuit c = parse_circuit("inputs 2\ngate g1 AND x1 x2\noutput g1\n");
    EXPECT_EQ(c.inputs(), 2);
    ASSERT_EQ(c.gates().size(), 1U);
    EXPECT_EQ(c.gates()[0].kind, GateKind::And);
    EXPECT_EQ(brute_force_truth_table(c).to_string(), "0001");
}

TEST(Parse, SymTableCountsMultiplicity) {
    const Circuit c = parse_circuit("inputs 2\ngate g1 SYM 0101 x1*2 x2\noutput g1\n");
    for (std::uint64_t a = 0; a < 4; ++a) {
        const auto x = bits_of(a, 2);
        EXPECT_EQ(eval_on_assignment(c, x), (2 * x[0] + x[1]) % 2 == 1) << a;
    }
}

TEST(Parse, RejectsMalformedText) {
    EXPECT_THROW(parse_circuit("inputs 2\ngate g1 SYM 01 x1 x2\noutput g1\n"), std::exception);
    EXPECT_THROW(parse_circuit("inputs 2\ngate g1 AND x1 x3\noutput g1\n"), std::exception);
    EXPECT_THROW(parse_circuit("inputs 2\ngate g1 AND x1 g2\ngate g2 OR x1 x2\noutput g1\n"), std::exception);
    EXPECT_THROW(parse_circuit("inputs 2\ngate g1 THR 1 1@x1 x2\noutput g1\n"), std::exception);
    EXPECT_THROW(parse_circuit("inputs 2\ngate g1 FOO x1\noutput g1\n"), std::exception);
    EXPECT_THROW(parse_circuit("inputs 2\ngate g1 AND x1 x2\noutput g9\n"), std::exception);
}

TEST(Parse, ErrorCarriesLineNumber) {
    try {
        parse_circuit("# header\ninputs 2\ngate g1 SYM 01 x1 x2\noutput g1\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3U);
    }
}

TEST(Parse, NotGatesBecomeWireFlags) {
    const Circuit c = parse_circuit("inputs 2\ngate n1 NOT x1\ngate g1 AND n1 x2\noutput g1\n");
    for (const auto& g : c.gates()) EXPECT_NE(g.kind, GateKind::Not);
    EXPECT_EQ(brute_force_truth_table(c).to_string(), "0010");
}

TEST(Eval, HandSpecifiedGates) {
    EXPECT_TRUE(eval_text("inputs 3\ngate g MAJ x1 x2 x3\noutput g\n", {1, 0, 1}));
    EXPECT_FALSE(eval_text("inputs 3\ngate g MAJ x1 x2 x3\noutput g\n", {1, 0, 0}));
    EXPECT_TRUE(eval_text("inputs 2\ngate g THR 4 2@x1 3@x2\noutput g\n", {1, 1}));
    EXPECT_FALSE(eval_text("inputs 2\ngate g THR 4 2@x1 3@x2\noutput g\n", {1, 0}));
    EXPECT_TRUE(eval_text("inputs 3\ngate g MOD 3 x1 x2 x3\noutput g\n", {1, 1, 1}));
    EXPECT_FALSE(eval_text("inputs 3\ngate g MOD 3 x1 x2 x3\noutput g\n", {1, 1, 0}));
    EXPECT_TRUE(eval_text("inputs 3\ngate g MOD 3 x1 x2 x3\noutput g\n", {0, 0, 0}));
}

TEST(Eval, MajorityIsStrictOnEvenFanIn) {
    const Circuit c = parse_circuit("inputs 4\ngate g MAJ x1 x2 x3 x4\noutput g\n");
    for (std::uint64_t a = 0; a < 16; ++a) EXPECT_EQ(brute_force_truth_table(c).get(a), std::popcount(a) >= 3) << a;
}

TEST(Oracle, SmallTables) {
    EXPECT_EQ(brute_force_truth_table(parse_circuit("inputs 1\ngate g AND x1\noutput g\n")).to_string(), "01");
    EXPECT_EQ(brute_force_truth_table(parse_circuit("inputs 2\ngate g XOR x1 x2\noutput g\n")).to_string(), "0110");
    EXPECT_EQ(brute_force_count_sat(parse_circuit("inputs 5\ngate g XOR x1 x2 x3 x4 x5\noutput g\n")), 16U);
    EXPECT_EQ(brute_force_count_sat(parse_circuit("inputs 1\ngate g THR 1 0@x1\noutput g\n")), 0U);
}

TEST(Oracle, TableMatchesPerAssignmentEvaluation) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit c = random_circuit(10, 15, rng);
        const TruthTable t = brute_force_truth_table(c, 26, 1 + trial % 3);
        EXPECT_EQ(t, testing::table_by_assignment(c));
        EXPECT_EQ(brute_force_count_sat(c), t.count());
    }
}

TEST(Oracle, LimitIsEnforced) {
    Rng rng(3);
    const Circuit c = random_circuit(12, 5, rng);
    EXPECT_THROW(brute_force_truth_table(c, 10), CapExceeded);
}

TEST(RoundTrip, SerializePreservesTruthTable) {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Circuit c = random_circuit(2 + trial % 11, 4 + trial % 20, rng);
        EXPECT_EQ(brute_force_truth_table(parse_circuit(serialize(c))), brute_force_truth_table(c)) << serialize(c);
    }
}

TEST(RoundTrip, BigThresholdWeights) {
    const std::string text =
        "inputs 2\ngate g THR 123456789012345678901234567890 "
        "123456789012345678901234567890@x1 -98765432109876543210@x2\noutput g\n";
    const Circuit c = parse_circuit(text);
    EXPECT_EQ(brute_force_truth_table(c).to_string(), "0100");
    EXPECT_EQ(brute_force_truth_table(parse_circuit(serialize(c))).to_string(), "0100");
}

TEST(Restrict, AndWithFixedInput) {
    const Circuit c = parse_circuit("inputs 2\ngate g AND x1 x2\noutput g\n");
    const InputFix one[] = {{0, true}};
    const InputFix zero[] = {{0, false}};
    EXPECT_EQ(brute_force_truth_table(restrict(c, one)).to_string(), "01");
    EXPECT_EQ(brute_force_truth_table(restrict(c, zero)).to_string(), "00");
    const InputFix bad[] = {{5, true}};
    EXPECT_THROW(restrict(c, bad), std::exception);
}

TEST(Restrict, AgreesOnAllCompletions) {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const Circuit c = random_circuit(8, 12, rng);
        std::vector<InputFix> fixes;
        std::vector<int> fixed(8, -1);
        while (fixes.size() < 3) {
            const auto i = static_cast<std::size_t>(rng.below(8));
            if (fixed[i] >= 0) continue;
            fixed[i] = rng.bit() ? 1 : 0;
            fixes.push_back({i, fixed[i] == 1});
        }
        const Circuit r = restrict(c, fixes);
        ASSERT_EQ(r.inputs(), 5);
        for (std::uint64_t y = 0; y < 32; ++y) {
            std::vector<std::uint8_t> full(8);
            int next = 0;
            for (std::size_t i = 0; i < 8; ++i)
                full[i] = fixed[i] >= 0 ? static_cast<std::uint8_t>(fixed[i]) : (y >> next++) & 1U;
            EXPECT_EQ(eval_on_assignment(r, bits_of(y, 5)), eval_on_assignment(c, full));
        }
    }
}

TEST(Shape, Tags) {
    const auto single = classify_shape(parse_circuit("inputs 2\ngate g THR 1 1@x1 1@x2\noutput g\n"));
    EXPECT_EQ(single.depth, 1);
    EXPECT_FALSE(single.has(ShapeTag::ThrThr));
    EXPECT_TRUE(single.has(ShapeTag::Generic));

    const auto symsym = classify_shape(
        parse_circuit("inputs 3\ngate a SYM 0110 x1 x2 x3\ngate b MOD 2 x1 x2\ngate t SYM 011 a b\noutput t\n"));
    EXPECT_EQ(symsym.depth, 2);
    EXPECT_TRUE(symsym.has(ShapeTag::SymSym));
    EXPECT_EQ(symsym.wire_count, 7U);

    const auto thrthr =
        classify_shape(parse_circuit("inputs 3\ngate a THR 1 1@x1 -2@x2\ngate b THR 0 3@x3\ngate t THR 1 1@a 1@b\noutput t\n"));
    EXPECT_TRUE(thrthr.has(ShapeTag::ThrThr));
    EXPECT_FALSE(thrthr.has(ShapeTag::SymSym));
}

TEST(Property, SymmetricKindsMatchTheirTables) {
    Rng rng(13);
    for (const auto kind : {GateKind::And, GateKind::Or, GateKind::Xor, GateKind::Maj, GateKind::Mod}) {
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 1 + static_cast<int>(rng.below(10));
            std::vector<WireRef> wires;
            for (int i = 0; i < n; ++i)
                wires.push_back(WireRef::input(static_cast<std::size_t>(i), rng.bit(), 1 + static_cast<std::uint32_t>(rng.below(3))));
            const Gate g = kind == GateKind::Mod ? Gate::mod("g", 2 + static_cast<std::uint32_t>(rng.below(4)), wires)
                                                 : Gate::basic("g", kind, wires);
            const Gate as_sym = Gate::sym("g", wires, symmetric_table(g));
            const Circuit original(n, {g}, WireRef::gate(0));
            const Circuit converted(n, {as_sym}, WireRef::gate(0));
            EXPECT_EQ(brute_force_truth_table(original), brute_force_truth_table(converted)) << kind_name(kind);
        }
    }
}

TEST(Compose, NegationAndConjunction) {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit g = random_circuit(7, 8, rng);
        const Circuit h = random_circuit(7, 8, rng);
        TruthTable neg = brute_force_truth_table(g);
        neg.bits().invert();
        EXPECT_EQ(brute_force_truth_table(negate_output(g)), neg);
        TruthTable both = brute_force_truth_table(g);
        both.bits() &= brute_force_truth_table(h).bits();
        EXPECT_EQ(brute_force_truth_table(conjunction(g, h)), both);
    }
}

}  // namespace
}  // namespace accthr
