#include "accthr/generators.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace accthr {

namespace {

std::vector<std::size_t> pick_inputs(int n, int count, Rng& rng) {
    std::vector<std::size_t> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(std::min(count, n)));
    return all;
}

std::vector<std::uint8_t> random_table(std::uint64_t fan_in, Rng& rng) {
    std::vector<std::uint8_t> t(fan_in + 1);
    for (auto& b : t) b = rng.bit() ? 1 : 0;
    return t;
}

Gate random_symmetric_gate(std::string id, std::vector<WireRef> wires, Rng& rng) {
    switch (rng.below(6)) {
        case 0: return Gate::basic(std::move(id), GateKind::And, std::move(wires));
        case 1: return Gate::basic(std::move(id), GateKind::Or, std::move(wires));
        case 2: return Gate::basic(std::move(id), GateKind::Xor, std::move(wires));
        case 3: return Gate::basic(std::move(id), GateKind::Maj, std::move(wires));
        case 4: return Gate::mod(std::move(id), static_cast<std::uint32_t>(2 + rng.below(3)), std::move(wires));
        default: {
            std::uint64_t fan_in = 0;
            for (const auto& w : wires) fan_in += w.multiplicity;
            auto table = random_table(fan_in, rng);
            return Gate::sym(std::move(id), std::move(wires), std::move(table));
        }
    }
}

}  // namespace

Gate random_bottom_gate(std::string id, int n, int fan_in, BottomMix mix, std::int64_t max_weight, Rng& rng) {
    const auto inputs = pick_inputs(n, fan_in, rng);
    const bool threshold = mix == BottomMix::Threshold || (mix == BottomMix::Both && rng.bit());
    std::vector<WireRef> wires;
    for (const auto i : inputs) {
        const std::uint32_t mult = !threshold && rng.below(4) == 0 ? 2 : 1;
        wires.push_back(WireRef::input(i, rng.bit(), mult));
    }
    if (!threshold) return random_symmetric_gate(std::move(id), std::move(wires), rng);
    std::vector<BigInt> weights;
    BigInt total = 0;
    for (std::size_t k = 0; k < wires.size(); ++k) {
        weights.emplace_back(rng.uniform(-max_weight, max_weight));
        total += weights.back() < 0 ? BigInt(-weights.back()) : weights.back();
    }
    // Thresholds near the middle of the reachable range keep the gate non-constant often.
    const auto span = std::max<std::int64_t>(1, total.convert_to<std::int64_t>());
    const BigInt threshold_value(rng.uniform(-span / 2, span / 2));
    return Gate::thr(std::move(id), std::move(wires), std::move(weights), threshold_value);
}

Circuit random_two_layer(int n, int bottoms, GateKind top_kind, BottomMix mix, int max_fan_in, std::int64_t max_weight,
                         Rng& rng, bool allow_inputs) {
    std::vector<Gate> gates;
    std::vector<WireRef> top;
    for (int b = 0; b < bottoms; ++b) {
        const int fan_in = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(max_fan_in, n))));
        gates.push_back(random_bottom_gate("b" + std::to_string(b + 1), n, fan_in, mix, max_weight, rng));
        top.push_back(WireRef::gate(gates.size() - 1, top_kind != GateKind::And && rng.below(4) == 0));
    }
    if (allow_inputs && rng.below(3) == 0) top.push_back(WireRef::input(rng.below(static_cast<std::uint64_t>(n)), rng.bit()));
    Gate out;
    switch (top_kind) {
        case GateKind::Sym: {
            auto table = random_table(top.size(), rng);
            out = Gate::sym("top", std::move(top), std::move(table));
            break;
        }
        case GateKind::Mod: out = Gate::mod("top", static_cast<std::uint32_t>(2 + rng.below(3)), std::move(top)); break;
        case GateKind::Thr: {
            std::vector<BigInt> w;
            for (std::size_t k = 0; k < top.size(); ++k) w.emplace_back(rng.uniform(-max_weight, max_weight));
            const auto t = rng.uniform(-max_weight, max_weight);
            out = Gate::thr("top", std::move(top), std::move(w), BigInt(t));
            break;
        }
        default: out = Gate::basic("top", top_kind, std::move(top)); break;
    }
    gates.push_back(std::move(out));
    return Circuit(n, std::move(gates), WireRef::gate(static_cast<std::size_t>(bottoms)));
}

Circuit random_symsym(int n, int max_wires, Rng& rng) {
    std::vector<Gate> gates;
    std::vector<WireRef> top;
    int wires = 0;
    const int bottoms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_wires / 4))));
    for (int b = 0; b < bottoms && wires + 2 < max_wires; ++b) {
        const int room = std::min(n, max_wires - wires - 1);
        const int fan_in = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, room))));
        Gate g = random_bottom_gate("b" + std::to_string(b + 1), n, fan_in, BottomMix::Symmetric, 1, rng);
        wires += static_cast<int>(g.fan_in()) + 1;
        gates.push_back(std::move(g));
        top.push_back(WireRef::gate(gates.size() - 1, rng.below(4) == 0));
    }
    if (top.empty()) {
        gates.push_back(Gate::basic("b1", GateKind::Xor, {WireRef::input(0)}));
        top.push_back(WireRef::gate(0));
    }
    auto table = random_table(top.size(), rng);
    gates.push_back(Gate::sym("top", std::move(top), std::move(table)));
    return Circuit(n, std::move(gates), WireRef::gate(gates.size() - 1));
}

Circuit random_ac0_over_sym(int n, int bottoms, Rng& rng) {
    std::vector<Gate> gates;
    for (int b = 0; b < bottoms; ++b) {
        const int fan_in = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, 5))));
        gates.push_back(random_bottom_gate("b" + std::to_string(b + 1), n, fan_in, BottomMix::Both, 4, rng));
    }
    const int middle = 2 + static_cast<int>(rng.below(3));
    std::vector<WireRef> top;
    for (int m = 0; m < middle; ++m) {
        std::vector<WireRef> wires;
        const int arity = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(bottoms, 4))));
        for (const auto g : pick_inputs(bottoms, arity, rng)) wires.push_back(WireRef::gate(g, rng.below(3) == 0));
        const GateKind kind = m % 3 == 2 ? GateKind::Xor : (rng.bit() ? GateKind::And : GateKind::Or);
        gates.push_back(Gate::basic("m" + std::to_string(m + 1), kind, std::move(wires)));
        top.push_back(WireRef::gate(gates.size() - 1, rng.below(4) == 0));
    }
    gates.push_back(Gate::basic("top", rng.bit() ? GateKind::Or : GateKind::And, std::move(top)));
    return Circuit(n, std::move(gates), WireRef::gate(gates.size() - 1));
}

Circuit random_circuit(int n, int gate_count, Rng& rng) {
    std::vector<Gate> gates;
    for (int g = 0; g < gate_count; ++g) {
        const std::string id = "g" + std::to_string(g + 1);
        const int fan_in = 1 + static_cast<int>(rng.below(4));
        std::vector<WireRef> wires;
        for (int k = 0; k < fan_in; ++k) {
            const bool from_gate = g > 0 && rng.bit();
            const std::uint32_t mult = rng.below(5) == 0 ? 2 : 1;
            wires.push_back(from_gate ? WireRef::gate(rng.below(static_cast<std::uint64_t>(g)), rng.bit(), mult)
                                      : WireRef::input(rng.below(static_cast<std::uint64_t>(n)), rng.bit(), mult));
        }
        const auto pick = rng.below(8);
        if (pick == 0) {
            gates.push_back(Gate::basic(id, GateKind::Not, {wires.front().from_gate ? WireRef::gate(wires.front().index)
                                                                                     : WireRef::input(wires.front().index)}));
        } else if (pick == 1) {
            std::vector<BigInt> w;
            for (std::size_t k = 0; k < wires.size(); ++k) w.emplace_back(rng.uniform(-9, 9));
            gates.push_back(Gate::thr(id, std::move(wires), std::move(w), BigInt(rng.uniform(-5, 5))));
        } else {
            gates.push_back(random_symmetric_gate(id, std::move(wires), rng));
        }
    }
    return Circuit(n, std::move(gates), WireRef::gate(gates.size() - 1, rng.bit()));
}

}  // namespace accthr
