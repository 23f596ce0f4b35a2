#include "accthr/transforms.hpp"

#include "accthr/errors.hpp"

#include <algorithm>
#include <map>

namespace accthr {

__extension__ using Wide = unsigned __int128;

// ---------------------------------------------------------------- gate lowering

GeneralizedSymGate normalize_thr_to_sym(const Gate& g, unsigned weight_bits) {
    if (g.kind != GateKind::Thr) throw ShapeError("normalize_thr_to_sym expects a THR gate");
    BigInt magnitude = 0;
    BigInt threshold = g.threshold;
    std::map<Literal, BigInt> merged;
    for (std::size_t i = 0; i < g.inputs.size(); ++i) {
        const WireRef& w = g.inputs[i];
        if (w.from_gate) throw ShapeError("THR gate '" + g.id + "' reads another gate");
        const BigInt weight = g.weights[i] * w.multiplicity;
        magnitude += abs_value(weight);
        if (weight == 0) continue;
        if (weight > 0) {
            merged[{w.index, w.negated}] += weight;
        } else {
            merged[{w.index, !w.negated}] += -weight;
            threshold -= weight;
        }
    }
    if (bit_length(magnitude) > weight_bits)
        throw CapExceeded("THR gate '" + g.id + "' exceeds the weight magnitude cap 2^" + std::to_string(weight_bits));
    std::vector<WeightedLiteral> wires;
    BigInt domain = 0;
    for (auto& [lit, weight] : merged) {
        domain += weight;
        wires.push_back({lit, weight});
    }
    return GeneralizedSymGate(std::move(wires), SumPredicate::at_least(threshold, domain));
}

GeneralizedSymGate lower_bottom_gate(const Gate& g, unsigned weight_bits) {
    if (g.kind == GateKind::Thr) return normalize_thr_to_sym(g, weight_bits);
    if (!is_symmetric_kind(g.kind)) throw ShapeError("gate '" + g.id + "' cannot be lowered");
    std::map<Literal, BigInt> merged;
    for (const auto& w : g.inputs) {
        if (w.from_gate) throw ShapeError("bottom gate '" + g.id + "' reads another gate");
        merged[{w.index, w.negated}] += w.multiplicity;
    }
    std::vector<WeightedLiteral> wires;
    for (auto& [lit, weight] : merged) wires.push_back({lit, weight});
    return GeneralizedSymGate(std::move(wires), SumPredicate::from_table(symmetric_table(g)));
}

GeneralizedSymGate collapse_and_of_sym(std::span<const GeneralizedSymGate> gates) {
    if (gates.empty()) return GeneralizedSymGate::constant(true);
    if (gates.size() == 1) return gates[0];
    BigInt base = 0;
    for (const auto& g : gates) base = std::max(base, g.domain_max());
    base += 1;
    if (base < 2) base = 2;
    std::map<Literal, BigInt> merged;
    std::vector<SumPredicate> digits;
    BigInt scale = 1;
    for (const auto& g : gates) {
        for (const auto& w : g.wires()) merged[w.literal] += scale * w.weight;
        digits.push_back(g.predicate());
        scale *= base;
    }
    std::vector<WeightedLiteral> wires;
    for (auto& [lit, weight] : merged) wires.push_back({lit, weight});
    return GeneralizedSymGate(std::move(wires), SumPredicate::digitwise(base, std::move(digits)));
}

GeneralizedSymGate collapse_or_of_sym(std::span<const GeneralizedSymGate> gates) {
    std::vector<GeneralizedSymGate> complements;
    complements.reserve(gates.size());
    for (const auto& g : gates) complements.push_back(g.complemented());
    return collapse_and_of_sym(complements).complemented();
}

namespace {

bool is_bottom(const Gate& g) {
    return std::none_of(g.inputs.begin(), g.inputs.end(), [](const WireRef& w) { return w.from_gate; });
}

bool lowerable_bottom(const Gate& g) {
    return is_bottom(g) && (g.kind == GateKind::Thr || is_symmetric_kind(g.kind));
}

}  // namespace

std::optional<GeneralizedSymGate> collapse_to_single_gate(const Circuit& c, unsigned weight_bits) {
    const auto& gates = c.gates();
    std::vector<std::optional<GeneralizedSymGate>> memo(gates.size());
    std::vector<bool> done(gates.size(), false);
    const auto live = c.reachable();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (!live[g]) continue;
        const Gate& gate = gates[g];
        done[g] = true;
        if (lowerable_bottom(gate)) {
            memo[g] = lower_bottom_gate(gate, weight_bits);
            continue;
        }
        if (gate.kind != GateKind::And && gate.kind != GateKind::Or) return std::nullopt;
        std::vector<GeneralizedSymGate> parts;
        std::vector<std::pair<std::pair<bool, std::size_t>, bool>> seen;
        for (const auto& w : gate.inputs) {
            const auto key = std::make_pair(std::make_pair(w.from_gate, w.index), w.negated);
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
            seen.push_back(key);
            GeneralizedSymGate part = w.from_gate ? *memo[w.index] : GeneralizedSymGate::literal({w.index, false});
            parts.push_back(w.negated ? part.complemented() : std::move(part));
        }
        memo[g] = gate.kind == GateKind::And ? collapse_and_of_sym(parts) : collapse_or_of_sym(parts);
    }
    const WireRef& out = c.output();
    GeneralizedSymGate result =
        out.from_gate ? *memo[out.index] : GeneralizedSymGate::literal({out.index, false});
    return out.negated ? result.complemented() : result;
}

SymSymCircuit lower_to_symsym(const Circuit& c, unsigned weight_bits) {
    SymSymCircuit out;
    out.n = c.inputs();
    const WireRef& o = c.output();
    const auto single = [&](GeneralizedSymGate g) {
        out.bottom.push_back(std::move(g));
        out.top = {0, 1};
        return out;
    };
    if (!o.from_gate) return single(GeneralizedSymGate::literal({o.index, o.negated}));
    const Gate& top = c.gates()[o.index];
    if (lowerable_bottom(top)) {
        GeneralizedSymGate g = lower_bottom_gate(top, weight_bits);
        return single(o.negated ? g.complemented() : g);
    }
    const bool sym_over_bottoms =
        is_symmetric_kind(top.kind) && std::all_of(top.inputs.begin(), top.inputs.end(), [&](const WireRef& w) {
            return !w.from_gate || lowerable_bottom(c.gates()[w.index]);
        });
    if (sym_over_bottoms) {
        std::map<std::size_t, GeneralizedSymGate> lowered;
        for (const auto& w : top.inputs) {
            GeneralizedSymGate g;
            if (w.from_gate) {
                auto it = lowered.find(w.index);
                if (it == lowered.end()) it = lowered.emplace(w.index, lower_bottom_gate(c.gates()[w.index], weight_bits)).first;
                g = it->second;
            } else {
                g = GeneralizedSymGate::literal({w.index, false});
            }
            if (w.negated) g = g.complemented();
            for (std::uint32_t m = 0; m < w.multiplicity; ++m) out.bottom.push_back(g);
        }
        out.top = symmetric_table(top);
        if (o.negated)
            for (auto& b : out.top) b ^= 1U;
        return out;
    }
    if (auto g = collapse_to_single_gate(c, weight_bits)) return single(std::move(*g));
    throw ShapeError("circuit is not reducible to a SYM top over generalized symmetric gates");
}

bool XorSymCircuit::eval(std::uint64_t assignment) const {
    std::uint64_t z = 0;
    for (std::size_t v = 0; v < bottom.size(); ++v)
        if (bottom[v].eval(assignment)) z |= std::uint64_t{1} << v;
    return poly.eval(z);
}

SymSymCircuit collapse_monomials(const XorSymCircuit& c) {
    SymSymCircuit out;
    out.n = c.n;
    for (const auto m : c.poly.monomials()) {
        std::vector<GeneralizedSymGate> parts;
        for (std::size_t v = 0; v < c.bottom.size(); ++v)
            if ((m >> v) & 1U) parts.push_back(c.bottom[v]);
        out.bottom.push_back(collapse_and_of_sym(parts));
    }
    out.top.resize(out.bottom.size() + 1);
    for (std::size_t k = 0; k < out.top.size(); ++k) out.top[k] = k & 1U;
    return out;
}

// ---------------------------------------------------------------- probabilistic polynomials

int subsets_per_gate(std::size_t size, Rational eps) {
    if (eps.num == 0 || eps.num >= eps.den) throw InvalidInput("eps must lie strictly between 0 and 1");
    const auto target = static_cast<Wide>(std::max<std::size_t>(size, 1)) * eps.den;
    int l = 0;
    while ((static_cast<Wide>(eps.num) << l) < target) ++l;
    return l;
}

namespace {

int gate_depth(const Circuit& c) {
    std::vector<int> depth(c.gates().size(), 0);
    for (std::size_t g = 0; g < c.gates().size(); ++g) {
        int d = 0;
        for (const auto& w : c.gates()[g].inputs)
            if (w.from_gate) d = std::max(d, depth[w.index]);
        depth[g] = d + 1;
    }
    return c.output().from_gate ? depth[c.output().index] : 0;
}

// Size s: wires into live gates.
std::size_t live_wire_count(const Circuit& c) {
    const auto live = c.reachable();
    std::size_t wires = 0;
    for (std::size_t g = 0; g < c.gates().size(); ++g)
        if (live[g]) wires += c.gates()[g].inputs.size();
    return wires;
}

}  // namespace

std::uint64_t prob_poly_degree_bound(const Circuit& c, Rational eps) {
    const int d = gate_depth(c);
    if (d == 0) return 1;
    const auto l = static_cast<std::uint64_t>(std::max(1, subsets_per_gate(live_wire_count(c), eps)));
    std::uint64_t bound = 1;
    for (int i = 0; i < d; ++i) bound *= l;
    return bound;
}

F2Polynomial sample_prob_poly(const Circuit& c, const ProbPolyParams& params, Rng& rng) {
    if (c.inputs() > static_cast<int>(F2Polynomial::kMaxVariables))
        throw CapExceeded("probabilistic polynomials support at most 64 variables");
    const auto& gates = c.gates();
    const auto live = c.reachable();
    const int l = subsets_per_gate(live_wire_count(c), params.eps);
    const std::uint64_t cap = params.monomial_cap;
    std::vector<F2Polynomial> value(gates.size());

    const auto wire_poly = [&](const WireRef& w) {
        F2Polynomial p = w.from_gate ? value[w.index] : F2Polynomial::variable(w.index);
        p += w.negated;
        return p;
    };

    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (!live[g]) continue;
        const Gate& gate = gates[g];
        if (gate.kind == GateKind::Xor || (gate.kind == GateKind::Mod && gate.modulus == 2)) {
            F2Polynomial sum;
            for (const auto& w : gate.inputs)
                if (w.multiplicity % 2 == 1) sum += wire_poly(w);
            if (gate.kind == GateKind::Mod) sum += true;
            value[g] = std::move(sum);
            continue;
        }
        if (gate.kind != GateKind::And && gate.kind != GateKind::Or)
            throw ShapeError("probabilistic polynomials need AND/OR/XOR gates, found " + std::string(kind_name(gate.kind)));
        const bool is_and = gate.kind == GateKind::And;
        std::vector<F2Polynomial> children;
        std::vector<std::pair<std::pair<bool, std::size_t>, bool>> seen;
        for (const auto& w : gate.inputs) {
            const auto key = std::make_pair(std::make_pair(w.from_gate, w.index), w.negated);
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
            seen.push_back(key);
            // AND works on complements: AND(q) = 1 + OR(1 + q).
            F2Polynomial p = wire_poly(w);
            if (is_and) p += true;
            children.push_back(std::move(p));
        }
        // OR over the (possibly complemented) children.
        F2Polynomial none = F2Polynomial::constant(true);  // 1 iff every child is 0
        if (children.size() <= static_cast<std::size_t>(l)) {
            for (const auto& q : children) none = none.times(q + F2Polynomial::constant(true), cap);
        } else {
            for (int r = 0; r < l; ++r) {
                F2Polynomial factor = F2Polynomial::constant(true);
                for (const auto& q : children)
                    if (rng.bit()) factor += q;
                none = none.times(factor, cap);
            }
        }
        // OR = 1 + none; AND = 1 + OR(complements) = none.
        value[g] = is_and ? std::move(none) : none + F2Polynomial::constant(true);
    }
    F2Polynomial result = wire_poly(c.output());
    const std::uint64_t budget =
        params.degree_budget > 0 ? static_cast<std::uint64_t>(params.degree_budget) : prob_poly_degree_bound(c, params.eps);
    if (result.degree() > 0 && static_cast<std::uint64_t>(result.degree()) > budget)
        throw CapExceeded("realized degree " + std::to_string(result.degree()) + " exceeds the budget " +
                          std::to_string(budget));
    return result;
}

F2Polynomial sample_prob_poly(const Circuit& c, const ProbPolyParams& params) {
    Rng rng(params.seed);
    return sample_prob_poly(c, params, rng);
}

// ---------------------------------------------------------------- OR to XOR

bool RandomCombiner::combine(std::span<const std::uint8_t> values) const {
    if (values.size() != r1.size()) throw InvalidInput("combiner arity mismatch");
    bool p1 = false;
    bool p2 = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0) continue;
        p1 = p1 != (r1[i] != 0);
        p2 = p2 != (r2[i] != 0);
    }
    return p1 || p2;  // p1 + p2 + p1 p2 over F2
}

BitVector RandomCombiner::combine(std::span<const BitVector> tables) const {
    if (tables.size() != r1.size()) throw InvalidInput("combiner arity mismatch");
    if (tables.empty()) return {};
    BitVector p1(tables[0].size());
    BitVector p2(tables[0].size());
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (r1[i] != 0) p1 ^= tables[i];
        if (r2[i] != 0) p2 ^= tables[i];
    }
    p1 |= p2;
    return p1;
}

F2Polynomial RandomCombiner::expand(std::span<const F2Polynomial> parts, std::uint64_t cap) const {
    if (parts.size() != r1.size()) throw InvalidInput("combiner arity mismatch");
    F2Polynomial p1;
    F2Polynomial p2;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (r1[i] != 0) p1 += parts[i];
        if (r2[i] != 0) p2 += parts[i];
    }
    F2Polynomial out = p1 + p2;
    out += p1.times(p2, cap);
    if (out.monomials().size() > cap) throw CapExceeded("monomial cap exceeded");
    return out;
}

RandomCombiner or_to_xor_randomized(std::size_t count, Rng& rng) {
    if (count == 0) throw InvalidInput("or_to_xor_randomized needs at least one subcircuit");
    RandomCombiner rc;
    rc.r1.resize(count);
    rc.r2.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        rc.r1[i] = rng.bit() ? 1 : 0;
        rc.r2[i] = rng.bit() ? 1 : 0;
    }
    return rc;
}

// ---------------------------------------------------------------- copies

std::vector<Circuit> expand_copies(const Circuit& c, int k, unsigned copy_bits) {
    if (k < 0 || (k >= c.inputs() && k > 0)) throw InvalidInput("expand_copies needs 0 <= k < n");
    if (static_cast<unsigned>(k) > copy_bits) throw CapExceeded("2^k copies exceed the size cap");
    std::vector<Circuit> copies;
    copies.reserve(std::size_t{1} << k);
    std::vector<InputFix> fixes(static_cast<std::size_t>(k));
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << k); ++j) {
        for (int b = 0; b < k; ++b) fixes[static_cast<std::size_t>(b)] = {static_cast<std::size_t>(b), ((j >> b) & 1U) != 0};
        copies.push_back(restrict(c, fixes));
    }
    return copies;
}

std::vector<std::uint8_t> BitExtractorBank::bit_table(std::size_t i) const {
    const std::size_t copies_count = std::size_t{1} << (2 * ell);
    std::vector<std::uint8_t> t(copies_count + 1);
    for (std::size_t v = 0; v <= copies_count; ++v) t[v] = (v >> i) & 1U;
    return t;
}

std::vector<Circuit> BitExtractorBank::circuits() const {
    std::vector<Gate> shared;
    std::vector<WireRef> outs;
    for (std::size_t a = 0; a < copies.size(); ++a) {
        const std::size_t offset = shared.size();
        const std::string prefix = "c" + std::to_string(a) + "_";
        for (const auto& g : copies[a].gates()) {
            Gate copy = g;
            copy.id = prefix + g.id;
            for (auto& w : copy.inputs)
                if (w.from_gate) w.index += offset;
            shared.push_back(std::move(copy));
        }
        WireRef o = copies[a].output();
        if (o.from_gate) o.index += offset;
        outs.push_back(o);
    }
    std::vector<Circuit> out;
    for (std::size_t i = 0; i < bit_count(); ++i) {
        std::vector<Gate> gates = shared;
        gates.push_back(Gate::sym("bit" + std::to_string(i + 1), outs, bit_table(i)));
        const WireRef top = WireRef::gate(gates.size() - 1);
        out.emplace_back(free_inputs, std::move(gates), top);
    }
    return out;
}

BitExtractorBank build_bit_extractor_bank(const Circuit& c, int ell, unsigned copy_bits) {
    if (ell < 1 || 2 * ell >= c.inputs()) throw InvalidInput("bit extractor bank needs 1 <= ell and 2 ell < n");
    if (static_cast<unsigned>(2 * ell) > copy_bits) throw CapExceeded("2^(2 ell) copies exceed the size cap");
    BitExtractorBank bank;
    bank.ell = ell;
    bank.free_inputs = c.inputs() - 2 * ell;
    const auto first = static_cast<std::size_t>(bank.free_inputs);
    std::vector<InputFix> fixes(static_cast<std::size_t>(2 * ell));
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << (2 * ell)); ++a) {
        for (std::size_t b = 0; b < fixes.size(); ++b) fixes[b] = {first + b, ((a >> b) & 1U) != 0};
        bank.copies.push_back(restrict(c, fixes));
    }
    return bank;
}

}  // namespace accthr
