#pragma once

#include "accthr/circuit.hpp"
#include "accthr/polynomial.hpp"
#include "accthr/rng.hpp"
#include "accthr/symgate.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace accthr {

// ---------------------------------------------------------------- gate lowering

// THR gate over (possibly negated) inputs to a generalized gate with positive weights:
// a negative weight w on literal l becomes weight -w on ~l and raises the threshold by -w.
// Throws CapExceeded when sum |w| * multiplicity >= 2^weight_bits.
GeneralizedSymGate normalize_thr_to_sym(const Gate& g, unsigned weight_bits = 40);

// Any symmetric-kind or THR gate reading only inputs.
GeneralizedSymGate lower_bottom_gate(const Gate& g, unsigned weight_bits = 40);

// AND of t gates as one gate: weights sum_i B^(i-1) w_i with B = 1 + max_i (sum of gate i's
// weights), accepting exactly when every base-B digit is accepted by its gate.
GeneralizedSymGate collapse_and_of_sym(std::span<const GeneralizedSymGate> gates);

// OR through De Morgan: complement of the collapsed AND of complements.
GeneralizedSymGate collapse_or_of_sym(std::span<const GeneralizedSymGate> gates);

// Collapses circuits whose gates above the bottom layer are all AND/OR into one gate.
// Returns nullopt for other shapes.
std::optional<GeneralizedSymGate> collapse_to_single_gate(const Circuit& c, unsigned weight_bits = 40);

// SYM top over symmetric/THR bottom gates (direct input wires become literal gates,
// multiplicities become duplicate bottoms, negated top wires complement their bottom),
// or any circuit collapse_to_single_gate accepts. Throws ShapeError otherwise.
SymSymCircuit lower_to_symsym(const Circuit& c, unsigned weight_bits = 40);

// XOR of AND-monomials over generalized bottom gates; variable v of `poly` is bottom[v].
struct XorSymCircuit {
    int n = 0;
    std::vector<GeneralizedSymGate> bottom;
    F2Polynomial poly;

    [[nodiscard]] bool eval(std::uint64_t assignment) const;
};

// Collapses every monomial into one gate; the top becomes a parity table.
SymSymCircuit collapse_monomials(const XorSymCircuit& c);

// ---------------------------------------------------------------- probabilistic polynomials

struct Rational {
    std::uint64_t num = 1;
    std::uint64_t den = 8;
};

struct ProbPolyParams {
    Rational eps;
    std::uint64_t seed = 0;
    int degree_budget = 0;  // 0: use the bound for the circuit
    std::uint64_t monomial_cap = std::uint64_t{1} << 16;
};

// Smallest l with 2^l >= s / eps.
int subsets_per_gate(std::size_t size, Rational eps);

// l^d for the circuit's size s (live wire count) and depth d.
std::uint64_t prob_poly_degree_bound(const Circuit& c, Rational eps);

// Gate-wise construction over the circuit's inputs as variables (at most 64). An AND or OR
// with more than l distinct children uses l random subsets; smaller gates use their exact
// polynomial, so they never err. XOR and MOD 2 gates are exact.
F2Polynomial sample_prob_poly(const Circuit& c, const ProbPolyParams& params, Rng& rng);
F2Polynomial sample_prob_poly(const Circuit& c, const ProbPolyParams& params);

// ---------------------------------------------------------------- OR to XOR

struct RandomCombiner {
    std::vector<std::uint8_t> r1;
    std::vector<std::uint8_t> r2;

    // P1 + P2 + P1*P2 with P_b = sum_i r_b[i] * values[i], all mod 2.
    [[nodiscard]] bool combine(std::span<const std::uint8_t> values) const;
    [[nodiscard]] BitVector combine(std::span<const BitVector> tables) const;
    // Same expression over polynomials in disjoint or shared variables.
    [[nodiscard]] F2Polynomial expand(std::span<const F2Polynomial> parts, std::uint64_t cap) const;
};

RandomCombiner or_to_xor_randomized(std::size_t count, Rng& rng);

// ---------------------------------------------------------------- copies

// Copy j fixes inputs x_1..x_k to the bits of j (x_1 least significant).
std::vector<Circuit> expand_copies(const Circuit& c, int k, unsigned copy_bits = 16);

// Copies of c with the last 2*ell inputs fixed to every pattern A (bit b of A is input
// n - 2 ell + b). The count of satisfied copies lies in [0, 2^(2 ell)], so it takes
// 2 ell + 1 bits.
struct BitExtractorBank {
    int ell = 0;
    int free_inputs = 0;
    std::vector<Circuit> copies;

    [[nodiscard]] std::size_t bit_count() const { return static_cast<std::size_t>(2 * ell + 1); }
    // Bit i (0-based) of the count, as a table over counts 0..2^(2 ell).
    [[nodiscard]] std::vector<std::uint8_t> bit_table(std::size_t i) const;
    // B_1..B_(2 ell + 1): a SYM top over all copies with the bit table.
    [[nodiscard]] std::vector<Circuit> circuits() const;
};

BitExtractorBank build_bit_extractor_bank(const Circuit& c, int ell, unsigned copy_bits = 16);

}  // namespace accthr
