#pragma once

#include "accthr/circuit.hpp"
#include "accthr/rng.hpp"

#include <cstdint>
#include <string>

namespace accthr {

// Random instances for tests, benchmarks and self-checks. All generators are pure functions
// of the generator state.

enum class BottomMix { Symmetric, Threshold, Both };

// One gate reading `fan_in` distinct random inputs with random negations. Threshold gates
// get weights uniform in [-max_weight, max_weight]; SYM gates may carry multiplicities.
Gate random_bottom_gate(std::string id, int n, int fan_in, BottomMix mix, std::int64_t max_weight, Rng& rng);

// Top gate of `top_kind` over `bottoms` random bottom gates (plus the occasional direct
// input wire when allow_inputs is set). SYM tops get a random table.
Circuit random_two_layer(int n, int bottoms, GateKind top_kind, BottomMix mix, int max_fan_in,
                         std::int64_t max_weight, Rng& rng, bool allow_inputs = true);

// SYM of symmetric-kind gates with at most max_wires wires in total.
Circuit random_symsym(int n, int max_wires, Rng& rng);

// AND/OR/XOR layers (depth 2 above the bottom) over random symmetric and threshold gates.
Circuit random_ac0_over_sym(int n, int bottoms, Rng& rng);

// Arbitrary DAG mixing every gate kind, for parse and semantic tests.
Circuit random_circuit(int n, int gates, Rng& rng);

}  // namespace accthr
