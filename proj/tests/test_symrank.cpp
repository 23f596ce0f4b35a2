#include "support.hpp"

#include "accthr/errors.hpp"
#include "accthr/generators.hpp"
#include "accthr/symrank.hpp"
#include "accthr/transforms.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace accthr {
namespace {

SymSymCircuit and_of_two() {
    SymSymCircuit c;
    c.n = 2;
    c.bottom.push_back(lower_bottom_gate(Gate::basic("a", GateKind::And, {WireRef::input(0), WireRef::input(1)})));
    c.top = {0, 1};
    return c;
}

void expect_reconstructs(const SymSymCircuit& c, const SymRankDecomp& d) {
    const std::size_t rows = std::size_t{1} << d.left_bits;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << c.n); ++x)
        ASSERT_EQ(reconstruct_entry(d, x % rows, x / rows), c.eval(x)) << "assignment " << x;
}

TEST(Decompose, AndHasRankOne) {
    const SymSymCircuit c = and_of_two();
    const SymRankDecomp d = decompose(c);
    EXPECT_EQ(d.left_bits, 1);
    EXPECT_EQ(d.right_bits, 1);
    ASSERT_EQ(d.rank(), 1U);
    EXPECT_FALSE(d.a.get(0, 0));
    EXPECT_TRUE(d.a.get(1, 0));
    EXPECT_FALSE(d.b.get(0, 0));
    EXPECT_TRUE(d.b.get(0, 1));
    EXPECT_EQ(d.filter, (std::vector<std::uint8_t>{0, 1}));
    EXPECT_TRUE(reconstruct_entry(d, 1, 1));
    expect_reconstructs(c, d);
}

TEST(Decompose, ConstantTrueGateHasRankFour) {
    SymSymCircuit c;
    c.n = 2;
    c.bottom.push_back(
        GeneralizedSymGate({{Literal{0, false}, BigInt(1)}, {Literal{1, false}, BigInt(1)}}, SumPredicate::all()));
    c.top = {0, 1};
    const SymRankDecomp d = decompose(c);
    ASSERT_EQ(d.rank(), 4U);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_TRUE(reconstruct_entry(d, i, j));
}

TEST(Reconstruct, ZeroMatricesGiveTheFilterAtZero) {
    SymRankDecomp d;
    d.left_bits = 1;
    d.right_bits = 1;
    d.a = BitMatrix(2, 3);
    d.b = BitMatrix(3, 2);
    d.a_rows.assign(2, {});
    d.b_cols.assign(2, {});
    d.filter = {0, 1, 1, 1};
    d.components.resize(3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_FALSE(reconstruct_entry(d, i, j));
}

TEST(Decompose, RandomCircuitsReconstructExactly) {
    Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit circuit = random_symsym(12, 60, rng);
        const SymSymCircuit c = lower_to_symsym(circuit);
        const SymRankDecomp d = decompose(c);
        const TruthTable want = brute_force_truth_table(circuit);
        const std::size_t rows = std::size_t{1} << d.left_bits;
        for (std::uint64_t x = 0; x < want.size(); ++x)
            ASSERT_EQ(reconstruct_entry(d, x % rows, x / rows), want.get(x)) << "trial " << trial << " x " << x;
    }
}

TEST(Decompose, ThresholdBottomsReconstruct) {
    Rng rng(103);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit circuit = random_two_layer(10, 4, GateKind::Sym, BottomMix::Threshold, 6, 50, rng);
        const SymSymCircuit c = lower_to_symsym(circuit);
        expect_reconstructs(c, decompose(c));
    }
}

TEST(Decompose, RowsAndColumnsMatchSparseViews) {
    Rng rng(107);
    const SymSymCircuit c = lower_to_symsym(random_symsym(10, 40, rng));
    const SymRankDecomp d = decompose(c);
    ASSERT_EQ(d.a.rows(), std::size_t{1} << d.left_bits);
    ASSERT_EQ(d.b.cols(), std::size_t{1} << d.right_bits);
    ASSERT_EQ(d.filter.size(), d.rank() + 1);
    for (std::size_t i = 0; i < d.a.rows(); ++i) {
        std::size_t set = 0;
        for (std::size_t k = 0; k < d.rank(); ++k) set += d.a.get(i, k) ? 1 : 0;
        EXPECT_EQ(set, d.a_rows[i].size());
        for (const auto k : d.a_rows[i]) EXPECT_TRUE(d.a.get(i, k));
    }
    for (std::size_t j = 0; j < d.b.cols(); ++j)
        for (const auto k : d.b_cols[j]) EXPECT_TRUE(d.b.get(k, j));
}

TEST(Decompose, AtMostOneComponentPerGateFires) {
    Rng rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        const SymSymCircuit c = lower_to_symsym(random_symsym(10, 40, rng));
        const SymRankDecomp d = decompose(c);
        const std::size_t rows = std::size_t{1} << d.left_bits;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << c.n); ++x) {
            std::vector<int> fired(c.bottom.size(), 0);
            for (const auto k : d.a_rows[x % rows])
                if (d.b.get(k, x / rows)) ++fired[d.components[k].gate];
            for (std::size_t g = 0; g < c.bottom.size(); ++g) ASSERT_EQ(fired[g], c.bottom[g].eval(x) ? 1 : 0);
        }
    }
}

TEST(RankBound, UnitWeightRankWithinBound) {
    Rng rng(113);
    for (int trial = 0; trial < 20; ++trial) {
        const SymSymCircuit c = lower_to_symsym(testing::random_unit_symsym(12, 60, rng));
        const SymRankDecomp d = decompose(c);
        const std::uint64_t bound = unit_rank_bound(c);
        EXPECT_LE(d.rank(), bound);
        std::uint64_t total_wires = 0;
        for (const auto& g : c.bottom)
            for (const auto& w : g.wires()) total_wires += static_cast<std::uint64_t>(w.weight);
        EXPECT_LE(d.rank(), (total_wires + 1) * (total_wires + 2) / 2 * c.bottom.size());
    }
}

TEST(RankBound, RejectsNonUnitWeights) {
    SymSymCircuit c;
    c.n = 2;
    c.bottom.push_back(normalize_thr_to_sym(Gate::thr("t", {WireRef::input(0), WireRef::input(1)}, {BigInt(2), BigInt(3)}, BigInt(4))));
    c.top = {0, 1};
    EXPECT_THROW(unit_rank_bound(c), InvalidInput);
}

TEST(Decompose, RankCap) {
    Rng rng(127);
    const SymSymCircuit c = lower_to_symsym(random_symsym(10, 40, rng));
    const auto full = decompose(c).rank();
    ASSERT_GT(full, 1U);
    EXPECT_THROW(decompose(c, full - 1), CapExceeded);
    EXPECT_EQ(decompose(c, full).rank(), full);
}

TEST(Dump, HeaderAndFilter) {
    std::ostringstream out;
    dump(out, decompose(and_of_two()));
    std::istringstream in(out.str());
    int hl = 0, hr = 0, r = 0;
    in >> hl >> hr >> r;
    EXPECT_EQ(hl, 1);
    EXPECT_EQ(hr, 1);
    EXPECT_EQ(r, 1);
}

}  // namespace
}  // namespace accthr
