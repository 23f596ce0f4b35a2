#pragma once

#include "accthr/circuit.hpp"
#include "accthr/depth2.hpp"
#include "accthr/field.hpp"
#include "accthr/ilp.hpp"
#include "accthr/rectmm.hpp"
#include "accthr/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace accthr::testing {

// Assignment vector for truth-table index `index`.
inline std::vector<std::uint8_t> bits_of(std::uint64_t index, int n) {
    std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (index >> i) & 1U;
    return x;
}

// Table built one assignment at a time through the reference evaluator.
inline TruthTable table_by_assignment(const Circuit& c) {
    TruthTable t(c.inputs());
    for (std::uint64_t a = 0; a < t.size(); ++a) t.set(a, eval_on_assignment(c, bits_of(a, c.inputs())));
    return t;
}

// Random matrix whose nonzeros lie on the recursive base pattern (a side: 2^m x 3^m,
// b side: 3^m x 2^m).
inline FieldMatrix random_pattern_matrix(const PrimeField& f, int m, bool a_side, Rng& rng) {
    std::size_t two = 1;
    std::size_t three = 1;
    for (int i = 0; i < m; ++i) {
        two *= 2;
        three *= 3;
    }
    FieldMatrix out = a_side ? FieldMatrix(two, three) : FieldMatrix(three, two);
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) {
            std::size_t bin = a_side ? i : j;
            std::size_t ter = a_side ? j : i;
            bool keep = true;
            for (int level = 0; level < m && keep; ++level) {
                const int b = static_cast<int>(bin & 1U);
                const int t = static_cast<int>(ter % 3);
                bin >>= 1;
                ter /= 3;
                // a-pattern: every entry except row 1 / column 0; b-pattern: (0,0) (0,1) (1,0) (2,0).
                keep = a_side ? !(b == 1 && t == 0) : (t == 0 || b == 0);
            }
            if (keep) out(i, j) = rng.below(f.modulus());
        }
    return out;
}

// Entry-by-entry dot products, independent of naive_mm.
inline FieldMatrix dot_products(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
    FieldMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc = f.add(acc, f.mul(a(i, k), b(k, j)));
            out(i, j) = acc;
        }
    return out;
}

// SYM top over symmetric-kind bottom gates with single-multiplicity input wires, so every
// lowered weight is 1. Total bottom wires stay within max_wires.
inline Circuit random_unit_symsym(int n, int max_wires, Rng& rng) {
    std::vector<Gate> gates;
    std::vector<WireRef> top;
    int used = 0;
    const int bottoms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_wires / 4))));
    for (int b = 0; b < bottoms; ++b) {
        const int room = std::min(n, max_wires - used);
        if (room < 1) break;
        const int fan_in = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(room)));
        std::vector<WireRef> wires;
        std::vector<bool> taken(static_cast<std::size_t>(n), false);
        while (static_cast<int>(wires.size()) < fan_in) {
            const std::size_t i = rng.below(static_cast<std::uint64_t>(n));
            if (taken[i]) continue;
            taken[i] = true;
            wires.push_back(WireRef::input(i, rng.bit()));
        }
        used += fan_in;
        const std::string id = "b" + std::to_string(b);
        switch (rng.below(5)) {
            case 0: gates.push_back(Gate::basic(id, GateKind::And, std::move(wires))); break;
            case 1: gates.push_back(Gate::basic(id, GateKind::Maj, std::move(wires))); break;
            case 2: gates.push_back(Gate::mod(id, 2 + static_cast<std::uint32_t>(rng.below(3)), std::move(wires))); break;
            default: {
                std::vector<std::uint8_t> table(static_cast<std::size_t>(fan_in) + 1);
                for (auto& t : table) t = rng.bit() ? 1 : 0;
                gates.push_back(Gate::sym(id, std::move(wires), std::move(table)));
            }
        }
        top.push_back(WireRef::gate(gates.size() - 1, rng.below(4) == 0));
    }
    std::vector<std::uint8_t> table(top.size() + 1);
    for (auto& t : table) t = rng.bit() ? 1 : 0;
    gates.push_back(Gate::sym("top", std::move(top), std::move(table)));
    return Circuit(n, std::move(gates), WireRef::gate(gates.size() - 1));
}

// Layers of AND/OR gates over the inputs; layer 0 reads inputs (with random negations),
// layer l reads gates of layer l - 1, and the last layer is a single gate.
inline Circuit random_and_or(int n, int depth, int width, int fan_in, Rng& rng) {
    std::vector<Gate> gates;
    std::size_t prev_first = 0;
    std::size_t prev_count = 0;
    for (int layer = 0; layer < depth; ++layer) {
        const int count = layer + 1 == depth ? 1 : width;
        const std::size_t first = gates.size();
        for (int g = 0; g < count; ++g) {
            std::vector<WireRef> wires;
            const std::size_t pool = layer == 0 ? static_cast<std::size_t>(n) : prev_count;
            const int want = layer + 1 == depth && layer > 0 ? static_cast<int>(pool) : fan_in;
            for (int w = 0; w < want; ++w) {
                const std::size_t pick = rng.below(pool);
                wires.push_back(layer == 0 ? WireRef::input(pick, rng.bit()) : WireRef::gate(prev_first + pick, rng.bit()));
            }
            gates.push_back(Gate::basic("g" + std::to_string(gates.size()), rng.bit() ? GateKind::And : GateKind::Or,
                                        std::move(wires)));
        }
        prev_first = first;
        prev_count = static_cast<std::size_t>(count);
    }
    return Circuit(n, std::move(gates), WireRef::gate(prev_first));
}

// Signed integer with up to `bits` random magnitude bits.
inline BigInt random_big(unsigned bits, Rng& rng) {
    BigInt v = 0;
    for (unsigned b = 0; b < bits; b += 64) v = (v << 64) + rng();
    v >>= (bits + 63) / 64 * 64 - bits;
    return rng.bit() ? BigInt(-v) : v;
}

// THR top over `bottoms` THR gates on all n inputs, weights of `weight_bits` bits.
inline Circuit random_thrthr(int n, int bottoms, unsigned weight_bits, Rng& rng) {
    std::vector<Gate> gates;
    for (int g = 0; g < bottoms; ++g) {
        std::vector<WireRef> wires;
        std::vector<BigInt> weights;
        BigInt span = 0;
        for (int i = 0; i < n; ++i) {
            wires.push_back(WireRef::input(static_cast<std::size_t>(i)));
            weights.push_back(random_big(weight_bits, rng));
            span += abs(weights.back());
        }
        // Threshold near the middle of the reachable range so both outputs occur.
        BigInt threshold = random_big(weight_bits, rng) % (span / 4 + 1);
        gates.push_back(Gate::thr("b" + std::to_string(g), std::move(wires), std::move(weights), std::move(threshold)));
    }
    std::vector<WireRef> top;
    std::vector<BigInt> top_weights;
    for (int g = 0; g < bottoms; ++g) {
        top.push_back(WireRef::gate(static_cast<std::size_t>(g), rng.bit()));
        top_weights.push_back(random_big(weight_bits, rng));
    }
    BigInt top_threshold = random_big(weight_bits / 2, rng);
    gates.push_back(Gate::thr("top", std::move(top), std::move(top_weights), std::move(top_threshold)));
    return Circuit(n, std::move(gates), WireRef::gate(static_cast<std::size_t>(bottoms)));
}

inline IlpInstance random_ilp(int n, int constraints, std::int64_t max_coefficient, Rng& rng) {
    IlpInstance inst;
    inst.n = n;
    std::vector<BigInt> objective;
    for (int i = 0; i < n; ++i) objective.emplace_back(rng.uniform(-max_coefficient, max_coefficient));
    inst.objective = std::move(objective);
    for (int j = 0; j < constraints; ++j) {
        IlpConstraint con;
        for (int i = 0; i < n; ++i) con.a.emplace_back(rng.uniform(-max_coefficient, max_coefficient));
        con.b = rng.uniform(-max_coefficient, max_coefficient);
        inst.constraints.push_back(std::move(con));
    }
    inst.validate();
    return inst;
}

inline WtpInstance random_wtp(std::size_t rows, std::size_t d, std::size_t cols, std::int64_t value_range,
                              const BigInt& max_weight, Rng& rng) {
    WtpInstance inst;
    inst.left = IntMatrix(rows, d);
    inst.right = IntMatrix(d, cols);
    for (auto& v : inst.left.values) v = rng.uniform(-value_range, value_range);
    for (auto& v : inst.right.values) v = rng.uniform(-value_range, value_range);
    for (std::size_t k = 0; k < d; ++k) {
        // Uniform over [-max_weight, max_weight] from two 64-bit draws.
        const BigInt span = 2 * max_weight + 1;
        const BigInt draw = (BigInt(rng()) << 64) + rng();
        inst.weights.push_back(draw % span - max_weight);
    }
    return inst;
}

}  // namespace accthr::testing
