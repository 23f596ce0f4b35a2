#pragma once

#include "accthr/bigint.hpp"
#include "accthr/bits.hpp"
#include "accthr/caps.hpp"
#include "accthr/circuit.hpp"
#include "accthr/evaluator.hpp"
#include "accthr/transforms.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accthr {

// a . x <= b
struct IlpConstraint {
    std::vector<BigInt> a;
    BigInt b;
};

// 0-1 program over n variables; maximize objective . x, or feasibility only.
struct IlpInstance {
    int n = 0;
    std::vector<IlpConstraint> constraints;
    std::optional<std::vector<BigInt>> objective;
    std::size_t bit_complexity = 0;  // max bit length over all coefficients

    // Checks vector lengths and recomputes bit_complexity.
    void validate();
    // Bit i of `assignment` is x_{i+1}. With a bound, also requires objective . x >= bound.
    [[nodiscard]] bool satisfied(std::uint64_t assignment, const std::optional<BigInt>& bound = std::nullopt) const;
    [[nodiscard]] BigInt objective_value(std::uint64_t assignment) const;
    // Sum of |c_i|.
    [[nodiscard]] BigInt objective_span() const;
};

// Lines: `vars <n>`, then optionally `max <c_1> ... <c_n>` or `feasibility`, then any number of
// `con <a_1> ... <a_n> <= <b>`. Blank lines and lines starting with '#' are skipped.
IlpInstance parse_ilp(std::string_view text);
std::string serialize(const IlpInstance& inst);

// AND of one THR gate per constraint, plus objective . x >= bound when a bound is given.
Circuit feasibility_circuit(const IlpInstance& inst, const std::optional<BigInt>& bound = std::nullopt);

// Order in which the random pieces of a repeat are assembled. Factored evaluates each copy's
// polynomial on its own and combines the copy tables; Literal expands the combined polynomial
// over all copies' bottom gates first. Both consume the same random stream and agree exactly.
enum class IlpRoute { Factored, Literal };

// How repeats are merged per assignment. Majority takes the per-assignment majority. AnyRepeat
// accepts an assignment on any repeat that outputs 1, which is sound only when every copy
// polynomial is the exact AND (then a 1 certifies a satisfied copy). Auto uses AnyRepeat when
// that holds for every sampled polynomial and Majority otherwise.
enum class IlpDecision { Auto, Majority, AnyRepeat };
std::string_view decision_name(IlpDecision d);

struct IlpSolveParams {
    int k = 0;  // copy parameter; 0 picks default_copy_parameter
    int repeats = 25;
    std::uint64_t seed = 0;
    std::optional<Rational> eps;  // per-copy polynomial error; default 1 / (10 * 2^k)
    IlpRoute route = IlpRoute::Factored;
    IlpDecision decision = IlpDecision::Auto;
    EvalMethod method = EvalMethod::DirectOuterSum;
    bool witness = false;
    bool oracle_fallback = true;
    Caps caps;
};

// max(1, floor(n / (bitlen(M) * (log2 s)^5))), with the denominator taken as at least 1.
int default_copy_parameter(const IlpInstance& inst);
// params.k (or the default) clamped to [1, n - 1]; 0 when n == 1.
int effective_copy_parameter(const IlpInstance& inst, const IlpSolveParams& params);

struct FeasibilityReport {
    bool feasible = false;
    int k = 0;
    IlpDecision decision = IlpDecision::Majority;  // rule actually applied
    bool exact_polynomials = false;                 // every sampled copy polynomial was the exact AND
    BitVector majority;                             // over the 2^(n-k) free assignments
    BitVector any_repeat;                           // assignments with at least one repeat outputting 1
    std::vector<std::uint64_t> repeat_ones;         // per repeat, number of free assignments outputting 1
    std::uint64_t majority_ones = 0;
    bool oracle_fallback = false;
    std::string fallback_reason;
};

// Copies on the first k inputs, one AND polynomial per copy over its constraint gates,
// random OR-to-XOR across copies, monomials collapsed into generalized gates and the result
// evaluated on all free assignments; repeats merged per assignment by params.decision.
FeasibilityReport solve_feasibility_randomized(const IlpInstance& inst, const std::optional<BigInt>& bound,
                                               const IlpSolveParams& params);

enum class IlpStatus { Optimal, Feasible, Infeasible };
std::string_view status_name(IlpStatus s);

struct IlpCall {
    std::optional<BigInt> bound;
    bool feasible = false;
    std::uint64_t majority_ones = 0;
    std::vector<std::uint64_t> repeat_ones;
    IlpDecision decision = IlpDecision::Majority;
    bool oracle_fallback = false;
};

struct IlpDiagnostics {
    int k = 0;
    std::vector<IlpCall> search_calls;  // feasibility and binary-search calls
    std::size_t witness_calls = 0;
    bool oracle_fallback = false;
    bool witness_rejected = false;  // self-reduction ended on an assignment that failed the check
};

struct IlpResult {
    IlpStatus status = IlpStatus::Infeasible;
    std::optional<BigInt> value;
    std::optional<std::vector<std::uint8_t>> witness;
    IlpDiagnostics diagnostics;
};

// Binary search for the largest feasible bound in [-S, S], S = sum |c_i|, after one call at -S.
// Feasibility-only instances get a single call.
IlpResult optimize(const IlpInstance& inst, const IlpSolveParams& params = {});

// Exhaustive search; the reference answer.
IlpResult brute_force_ilp(const IlpInstance& inst, int oracle_limit = 26);

}  // namespace accthr
