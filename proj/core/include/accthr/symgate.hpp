#pragma once

#include "accthr/bigint.hpp"
#include "accthr/bits.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace accthr {

// Predicate on a nonnegative weighted sum. Either a union of closed intervals, or a
// digit-wise conjunction in base B (digit i accepted by digit predicate i), optionally
// complemented.
class SumPredicate {
public:
    SumPredicate() = default;  // rejects everything

    static SumPredicate intervals(std::vector<std::pair<BigInt, BigInt>> ranges);
    // Accepts v in [0, table.size()) with table[v] == 1.
    static SumPredicate from_table(const std::vector<std::uint8_t>& table);
    static SumPredicate at_least(const BigInt& threshold, const BigInt& domain_max);
    static SumPredicate all();
    static SumPredicate digitwise(BigInt base, std::vector<SumPredicate> digits);

    [[nodiscard]] SumPredicate complement() const;
    // accepts'(v) = accepts(v + offset). For digit-wise predicates the offset must add to
    // each digit block without carrying, which holds for sums of the block's own weights.
    [[nodiscard]] SumPredicate shifted(const BigInt& offset) const;

    [[nodiscard]] bool accepts(const BigInt& v) const;
    // Valid for 0 <= v < 2^62.
    [[nodiscard]] bool accepts(std::int64_t v) const;

    [[nodiscard]] bool is_digitwise() const { return digitwise_; }
    [[nodiscard]] bool negated() const { return negated_; }
    [[nodiscard]] const BigInt& base() const { return base_; }
    [[nodiscard]] const std::vector<SumPredicate>& digits() const { return digits_; }
    [[nodiscard]] const std::vector<std::pair<BigInt, BigInt>>& ranges() const { return ranges_; }

private:
    bool digitwise_ = false;
    bool negated_ = false;
    std::vector<std::pair<BigInt, BigInt>> ranges_;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges64_;
    BigInt base_;
    std::int64_t base64_ = 0;  // 0 when the base does not fit
    std::vector<SumPredicate> digits_;
};

struct Literal {
    std::size_t input = 0;  // 0-based
    bool negated = false;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct WeightedLiteral {
    Literal literal;
    BigInt weight;  // positive
};

// Outputs predicate(sum of weights of true literals).
class GeneralizedSymGate {
public:
    GeneralizedSymGate() = default;
    GeneralizedSymGate(std::vector<WeightedLiteral> wires, SumPredicate predicate);

    static GeneralizedSymGate constant(bool value);
    static GeneralizedSymGate literal(Literal lit);

    [[nodiscard]] const std::vector<WeightedLiteral>& wires() const { return wires_; }
    [[nodiscard]] const SumPredicate& predicate() const { return predicate_; }
    [[nodiscard]] const BigInt& domain_max() const { return domain_max_; }
    [[nodiscard]] bool fits_int64() const { return small_; }

    [[nodiscard]] BigInt weighted_sum(std::uint64_t assignment) const;
    [[nodiscard]] bool eval(std::uint64_t assignment) const;

    [[nodiscard]] GeneralizedSymGate complemented() const;
    // Inputs in `fixed` (index -> value, -1 for free) are fixed; free inputs are renumbered
    // in order, as restrict() does for circuits.
    [[nodiscard]] GeneralizedSymGate restricted(std::span<const int> fixed) const;

private:
    std::vector<WeightedLiteral> wires_;
    SumPredicate predicate_;
    BigInt domain_max_ = 0;
    bool small_ = true;
};

// Distinct weighted sums reached on one half of the inputs.
struct HalfSums {
    std::vector<BigInt> values;        // sorted, distinct
    std::vector<std::uint32_t> index;  // half-assignment -> position in values
};

// Sums of the gate's literals on inputs [first, first + count), enumerated over all
// 2^count settings of those inputs (bit b of the setting is input first + b).
HalfSums half_sums(const GeneralizedSymGate& g, std::size_t first, std::size_t count);

// accept[a * right.values.size() + b] = 1 iff the gate accepts left.values[a] + right.values[b].
std::vector<std::uint8_t> accept_pairs(const GeneralizedSymGate& g, const HalfSums& left, const HalfSums& right);

// Truth table of the gate over n inputs by outer sums of the two halves. Digit-wise
// predicates are evaluated digit by digit: the digit blocks of a collapsed gate never
// carry into each other, so each block is the weighted sum of one component gate.
TruthTable batch_eval(const GeneralizedSymGate& g, int n);

// SYM top over generalized bottom gates. top has bottom.size() + 1 entries.
struct SymSymCircuit {
    int n = 0;
    std::vector<GeneralizedSymGate> bottom;
    std::vector<std::uint8_t> top;

    [[nodiscard]] bool eval(std::uint64_t assignment) const;
    void validate() const;
};

}  // namespace accthr
