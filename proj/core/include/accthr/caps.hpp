#pragma once

#include <cstdint>

namespace accthr {

struct Caps {
    int oracle_inputs = 26;
    std::uint64_t rank = std::uint64_t{1} << 20;
    std::uint64_t monomials = std::uint64_t{1} << 16;
    unsigned weight_bits = 40;  // sum of |w| must stay below 2^weight_bits
    unsigned copy_bits = 16;    // 2^k copies and 2^(2 ell) bank entries

    // Defaults overridden by ACCTHR_ORACLE_N, ACCTHR_RANK_CAP, ACCTHR_MONOMIAL_CAP,
    // ACCTHR_WEIGHT_BITS and ACCTHR_COPY_BITS when set.
    static Caps from_environment();
};

}  // namespace accthr
