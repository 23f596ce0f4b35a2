#pragma once

#include "accthr/bigint.hpp"
#include "accthr/bits.hpp"
#include "accthr/symgate.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace accthr {

// One rank-one component: bottom gate `gate` with left half-sum `left` and right
// half-sum `right`, where the gate accepts left + right.
struct RankComponent {
    std::size_t gate = 0;
    BigInt left;
    BigInt right;
};

// f((A B)[i, j]) is the circuit value on the assignment whose first left_bits inputs are
// the bits of i and whose remaining inputs are the bits of j.
struct SymRankDecomp {
    int left_bits = 0;
    int right_bits = 0;
    BitMatrix a;                      // 2^left_bits x r
    BitMatrix b;                      // r x 2^right_bits
    std::vector<std::uint8_t> filter;  // r + 1 entries
    std::vector<RankComponent> components;

    // Sparse views: the components set in row i of A, and in column j of B.
    std::vector<std::vector<std::uint32_t>> a_rows;
    std::vector<std::vector<std::uint32_t>> b_cols;

    [[nodiscard]] std::size_t rank() const { return components.size(); }
};

// Throws CapExceeded when the rank would exceed rank_cap, InvalidInput on a malformed circuit.
SymRankDecomp decompose(const SymSymCircuit& c, std::uint64_t rank_cap = std::uint64_t{1} << 20);

// f(row i of A . column j of B).
bool reconstruct_entry(const SymRankDecomp& d, std::size_t i, std::size_t j);

// Sum over (a, b) with a + b <= t of the number of gates accepting a + b, where t is the
// total wire count. Requires unit weights; throws InvalidInput otherwise.
std::uint64_t unit_rank_bound(const SymSymCircuit& c);

// Text dump: "h_L h_R r", the rows of A, the columns of B, then the filter table.
void dump(std::ostream& out, const SymRankDecomp& d);

}  // namespace accthr
