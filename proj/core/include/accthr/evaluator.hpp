#pragma once

#include "accthr/bits.hpp"
#include "accthr/circuit.hpp"
#include "accthr/rectmm.hpp"
#include "accthr/symgate.hpp"
#include "accthr/symrank.hpp"
#include "accthr/transforms.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace accthr {

enum class EvalMethod { Oracle, SymrankNaiveMm, SymrankCoppersmith, DirectOuterSum };

std::string_view method_name(EvalMethod m);
// Accepts "oracle", "symrank-naive-mm", "symrank-coppersmith", "direct-outer-sum".
EvalMethod parse_method(std::string_view name);

struct EvalPlan {
    EvalMethod method = EvalMethod::SymrankNaiveMm;
    std::uint64_t rank_cap = std::uint64_t{1} << 20;
    // On a rank-cap miss (or an inadmissible rank for the Coppersmith engine) evaluate by
    // direct outer sums instead of failing.
    bool fallback = true;
    CoppersmithParams mm;
    std::uint64_t prime = PrimeField::kMersenne61;
    int oracle_limit = 26;
};

struct EvalStats {
    EvalMethod used = EvalMethod::Oracle;
    std::uint64_t rank = 0;
    std::uint64_t multiplications = 0;
};

// Integer matrix of per-entry counts.
struct CountMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> values;  // row-major

    CountMatrix() = default;
    CountMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0) {}
    std::uint32_t& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    [[nodiscard]] std::uint32_t at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

// Entrywise table lookup; throws InvalidInput on a value outside the table.
BitMatrix apply_filter(const CountMatrix& counts, std::span<const std::uint8_t> filter);

// Row i, column j of `m` becomes truth-table index i + j * 2^left_bits.
TruthTable to_truth_table(const BitMatrix& m, int n, int left_bits);

// Truth table of the circuit on all 2^n inputs.
TruthTable eval_all_symsym(const SymSymCircuit& c, const EvalPlan& plan = {}, EvalStats* stats = nullptr);

enum class CountPath { Collapse, CopyBatch, Randomized, Oracle, Direct };
std::string_view path_name(CountPath p);

struct CountOptions {
    // 0 picks the default: floor(n^(1/3)) clamped to [1, (n - 1) / 2].
    int ell = 0;
    int repetitions = 25;
    Rational eps{1, 16};
    std::uint64_t seed = 0;
    bool force_randomized = false;
    // When no reduction applies, count with the truth-table oracle instead of failing.
    bool oracle_fallback = false;
    std::uint64_t monomial_cap = std::uint64_t{1} << 16;
    unsigned weight_bits = 40;
    unsigned copy_bits = 16;
};

struct CountReport {
    std::uint64_t count = 0;
    CountPath path = CountPath::Oracle;
    int ell = 0;
    std::uint64_t max_rank = 0;
};

int default_ell(int n);

// #SAT through the bit-extractor bank: copies with the last 2 ell inputs fixed, one batch
// evaluation per count bit, and the sum of the 2 ell + 1 bit numbers over the free inputs.
CountReport count_sat_split(const Circuit& c, const CountOptions& options = {}, const EvalPlan& plan = {});

// G == H iff #G = #H = #(G and H).
bool equiv_via_count(const Circuit& g, const Circuit& h, const CountOptions& options = {}, const EvalPlan& plan = {});
// G == not H iff #G + #H = 2^n and #(G and H) = 0.
bool antiequiv_via_count(const Circuit& g, const Circuit& h, const CountOptions& options = {},
                         const EvalPlan& plan = {});

}  // namespace accthr
