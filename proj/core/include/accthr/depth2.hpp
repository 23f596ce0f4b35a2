#pragma once

#include "accthr/bigint.hpp"
#include "accthr/bits.hpp"
#include "accthr/circuit.hpp"
#include "accthr/rectmm.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace accthr {

// Row-major matrix of arbitrary-precision integers.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<BigInt> values;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, BigInt(0)) {}
    BigInt& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    [[nodiscard]] const BigInt& at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

// P[i][j] = sum_k w[k] * [left[i][k] <= right[k][j]].
struct WtpInstance {
    IntMatrix left;   // rows x d
    IntMatrix right;  // d x cols
    std::vector<BigInt> weights;

    void validate() const;
};

IntMatrix circledast_naive(const WtpInstance& inst);

// Per column k, dense ranks 1, 2, ... over the values of column k of left and row k of right
// together; every comparison left <= right keeps its outcome.
WtpInstance rank_reduce(const WtpInstance& inst);

// Buckets over the sorted multiset of one column's ranks: positions are cut into runs of
// `capacity`, and every rank takes the bucket of its first position, so equal values share
// a bucket. bucket_of_rank[v] is the bucket of rank v (index 0 unused).
struct BucketPlan {
    std::vector<std::uint32_t> bucket_of_rank;
    std::size_t buckets = 0;
};
BucketPlan bucketize(std::span<const std::uint32_t> left_ranks, std::span<const std::uint32_t> right_ranks,
                     std::size_t capacity);

enum class MmMode { Naive, Coppersmith };

struct Depth2Params {
    std::size_t capacity = 0;  // 0: default for the mode
    MmMode mode = MmMode::Naive;
    CoppersmithParams mm;
};

std::size_t default_capacity(std::size_t n, MmMode mode);

struct WtpStats {
    std::size_t buckets = 0;             // largest bucket count over the columns
    std::uint64_t same_bucket_hits = 0;  // (i, k, j) with LEQ true inside one bucket
    std::uint64_t cross_hits = 0;        // (i, k, j) with bucket(left) < bucket(right)
    std::uint64_t multiplications = 0;
};

// Same-bucket pairs by brute force plus the bucket-indicator product M' N'. Equals
// circledast_naive exactly.
IntMatrix weighted_threshold_product(const WtpInstance& inst, const Depth2Params& params = {},
                                     WtpStats* stats = nullptr);

// Assignments to the first and second half of 2k inputs; bit b of an entry is input b of
// its half.
struct RectInput {
    int k = 0;
    std::vector<std::uint64_t> left;
    std::vector<std::uint64_t> right;
};

// Output entry (i, j) is the circuit value on (left[i], right[j]). Throws ShapeError unless
// the circuit is a threshold-kind gate over threshold-kind bottom gates (direct input wires
// into the top become dummy bottom gates).
BitMatrix eval_thrthr_rectangle(const Circuit& c, const RectInput& rect, const Depth2Params& params = {});
// Same with a symmetric-kind top gate.
BitMatrix eval_symthr_rectangle(const Circuit& c, const RectInput& rect, const Depth2Params& params = {});

// One k-bit string per line; character b is input b of the half.
std::vector<std::uint64_t> read_rect_side(std::istream& in, int k);
// 8-byte header (rows, k as little-endian uint32) then row-major packed bits, LSB first.
void write_bit_matrix(std::ostream& out, const BitMatrix& m, int k);

}  // namespace accthr
