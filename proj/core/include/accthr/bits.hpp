#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace accthr {

// Packed bit vector, bit i lives in word i / 64 at position i % 64.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size, bool value = false);

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    [[nodiscard]] std::size_t popcount() const;
    [[nodiscard]] bool any() const;

    std::span<std::uint64_t> words() { return words_; }
    [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

    BitVector& operator&=(const BitVector& o);
    BitVector& operator|=(const BitVector& o);
    BitVector& operator^=(const BitVector& o);
    void invert();

    // LSB-first bytes: bit i at byte i >> 3, position i & 7.
    [[nodiscard]] std::vector<std::uint8_t> to_bytes() const;
    static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t size);

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    void clear_tail();

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Truth table over n inputs; assignment (x_1..x_n) sits at index sum x_i 2^(i-1).
class TruthTable {
public:
    TruthTable() = default;
    explicit TruthTable(int n);
    TruthTable(int n, BitVector bits);

    [[nodiscard]] int inputs() const { return n_; }
    [[nodiscard]] std::size_t size() const { return bits_.size(); }
    [[nodiscard]] bool get(std::uint64_t idx) const { return bits_.get(idx); }
    void set(std::uint64_t idx, bool v) { bits_.set(idx, v); }
    [[nodiscard]] std::uint64_t count() const { return bits_.popcount(); }

    BitVector& bits() { return bits_; }
    [[nodiscard]] const BitVector& bits() const { return bits_; }

    // Characters '0'/'1' in index order.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
    int n_ = 0;
    BitVector bits_;
};

// Row-major bit matrix.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool get(std::size_t i, std::size_t j) const { return bits_.get(i * cols_ + j); }
    void set(std::size_t i, std::size_t j, bool v) { bits_.set(i * cols_ + j, v); }
    [[nodiscard]] const BitVector& bits() const { return bits_; }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    BitVector bits_;
};

}  // namespace accthr
