#pragma once

#include "accthr/bigint.hpp"
#include "accthr/bits.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accthr {

enum class GateKind { And, Or, Not, Xor, Mod, Maj, Thr, Sym };

std::string_view kind_name(GateKind kind);

// A wire reads either circuit input `index` (0-based) or gate `index`.
struct WireRef {
    bool from_gate = false;
    std::size_t index = 0;
    bool negated = false;
    std::uint32_t multiplicity = 1;

    static WireRef input(std::size_t i, bool negated = false, std::uint32_t mult = 1) {
        return {false, i, negated, mult};
    }
    static WireRef gate(std::size_t g, bool negated = false, std::uint32_t mult = 1) {
        return {true, g, negated, mult};
    }

    friend bool operator==(const WireRef&, const WireRef&) = default;
};

struct Gate {
    std::string id;
    GateKind kind = GateKind::And;
    std::vector<WireRef> inputs;
    std::uint32_t modulus = 0;            // Mod
    std::vector<BigInt> weights;          // Thr, one per wire
    BigInt threshold;                     // Thr
    std::vector<std::uint8_t> table;      // Sym, indexed by the true-wire count

    static Gate basic(std::string id, GateKind kind, std::vector<WireRef> inputs);
    static Gate mod(std::string id, std::uint32_t m, std::vector<WireRef> inputs);
    static Gate thr(std::string id, std::vector<WireRef> inputs, std::vector<BigInt> weights, BigInt threshold);
    static Gate sym(std::string id, std::vector<WireRef> inputs, std::vector<std::uint8_t> table);

    // Number of wires counted with multiplicity.
    [[nodiscard]] std::uint64_t fan_in() const;
};

bool is_symmetric_kind(GateKind kind);  // And, Or, Xor, Mod, Maj, Sym
bool is_threshold_kind(GateKind kind);  // Thr, Maj, And, Or

// Output table over the true-wire count 0..fan_in for a symmetric-kind gate.
// MAJ is strict majority: true iff 2*count > fan_in.
std::vector<std::uint8_t> symmetric_table(const Gate& g);

// Weighted-sum view of a threshold-kind gate: true iff sum weight[w]*mult*value(w) >= threshold,
// one weight per wire (multiplicity not yet folded in).
struct ThresholdForm {
    std::vector<BigInt> weights;
    BigInt threshold;
};
ThresholdForm threshold_form(const Gate& g);

// Immutable, validated DAG. Explicit NOT gates are folded into wire negation flags
// when the circuit is constructed, so gates() never contains GateKind::Not.
class Circuit {
public:
    Circuit() = default;
    Circuit(int inputs, std::vector<Gate> gates, WireRef output);

    [[nodiscard]] int inputs() const { return n_; }
    [[nodiscard]] const std::vector<Gate>& gates() const { return gates_; }
    [[nodiscard]] const WireRef& output() const { return output_; }

    // Gates the output depends on.
    [[nodiscard]] std::vector<bool> reachable() const;

private:
    int n_ = 0;
    std::vector<Gate> gates_;
    WireRef output_;
};

Circuit parse_circuit(std::string_view text);
std::string serialize(const Circuit& c);

bool eval_on_assignment(const Circuit& c, std::span<const std::uint8_t> x);

// Precompiled evaluator: machine-word arithmetic where weights allow, big integers otherwise.
class CompiledCircuit {
public:
    explicit CompiledCircuit(const Circuit& c);
    // Value on the assignment whose bit i (LSB first) is x_{i+1}.
    bool operator()(std::uint64_t index) const;
    bool eval(std::span<const std::uint8_t> x) const;
    // Same as operator() but reuses the caller's scratch buffer.
    bool eval_index(std::uint64_t index, std::vector<std::uint8_t>& scratch) const;

private:
    struct Wire {
        std::uint32_t slot;
        bool negated;
        std::uint32_t mult;
    };
    struct Op {
        bool threshold_op = false;
        bool big = false;
        std::vector<Wire> wires;
        std::vector<std::uint8_t> table;
        std::vector<std::int64_t> weights;
        std::int64_t threshold = 0;
        std::vector<BigInt> big_weights;
        BigInt big_threshold;
    };
    bool run(std::vector<std::uint8_t>& values) const;

    int n_;
    std::vector<Op> ops_;
    Wire output_;
};

TruthTable brute_force_truth_table(const Circuit& c, int oracle_limit = 26, unsigned threads = 1);
std::uint64_t brute_force_count_sat(const Circuit& c, int oracle_limit = 26, unsigned threads = 1);

enum class ShapeTag { SymSym, ThrThr, AndThr, Ac0ModTwoSym, SymThr, Generic };
std::string_view tag_name(ShapeTag tag);

struct ShapeReport {
    int depth = 0;
    std::uint64_t wire_count = 0;
    std::set<ShapeTag> tags;
    [[nodiscard]] bool has(ShapeTag t) const { return tags.count(t) != 0; }
};

ShapeReport classify_shape(const Circuit& c);

struct InputFix {
    std::size_t input;  // 0-based
    bool value;
};

// Fixed inputs disappear; the rest keep their relative order.
Circuit restrict(const Circuit& c, std::span<const InputFix> fixes);

// Fresh circuits built from existing ones (gate ids are prefixed to stay unique).
Circuit negate_output(const Circuit& c);
// Two symmetric output gates merge into one SYM gate (so SYM tops stay SYM tops); otherwise
// an AND gate, with AND outputs flattened into it.
Circuit conjunction(const Circuit& g, const Circuit& h);

}  // namespace accthr
