#pragma once

#include "accthr/bigint.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace accthr {

__extension__ using UInt128 = unsigned __int128;

// Arithmetic modulo a prime p < 2^61. Mersenne moduli (2^61 - 1, 2^31 - 1, ...) use
// shift-and-add reduction; other moduli use 128-bit division.
class PrimeField {
public:
    static constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
    static constexpr std::uint64_t kMersenne31 = (std::uint64_t{1} << 31) - 1;

    // Throws InvalidInput unless p is a prime below 2^61.
    explicit PrimeField(std::uint64_t p = kMersenne61);

    [[nodiscard]] std::uint64_t modulus() const { return p_; }

    [[nodiscard]] std::uint64_t reduce(UInt128 v) const {
        if (mersenne_bits_ != 0) {
            const UInt128 mask = p_;
            while (v > mask) v = (v & mask) + (v >> mersenne_bits_);
            const auto r = static_cast<std::uint64_t>(v);
            return r == p_ ? 0 : r;
        }
        return static_cast<std::uint64_t>(v % p_);
    }
    [[nodiscard]] std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        const std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    [[nodiscard]] std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
    [[nodiscard]] std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
    [[nodiscard]] std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return reduce(static_cast<UInt128>(a) * b);
    }
    [[nodiscard]] std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
    // Throws InvalidInput on zero.
    [[nodiscard]] std::uint64_t inv(std::uint64_t a) const;

    [[nodiscard]] std::uint64_t from_signed(std::int64_t v) const;
    [[nodiscard]] std::uint64_t from_big(const BigInt& v) const;
    // Representative in (-p/2, p/2].
    [[nodiscard]] BigInt centered(std::uint64_t v) const;

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

private:
    std::uint64_t p_;
    unsigned mersenne_bits_ = 0;
};

bool is_prime(std::uint64_t n);

// Dense row-major matrix of residues.
class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    std::uint64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    [[nodiscard]] std::uint64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<std::uint64_t> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const std::uint64_t> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::vector<std::uint64_t>& data() { return data_; }
    [[nodiscard]] const std::vector<std::uint64_t>& data() const { return data_; }

    [[nodiscard]] FieldMatrix transposed() const;
    [[nodiscard]] bool is_zero() const;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint64_t> data_;
};

FieldMatrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, std::uint64_t seed);

// .mat text: "rows cols p" then row-major residues.
struct MatFile {
    FieldMatrix matrix;
    std::uint64_t modulus = 0;
};
MatFile read_mat(std::istream& in);
void write_mat(std::ostream& out, const FieldMatrix& m, std::uint64_t modulus);

// Polynomial in x with coefficients 0..degree_bound; higher terms are dropped.
class TruncPoly {
public:
    TruncPoly() = default;
    explicit TruncPoly(int degree_bound) : coeffs_(static_cast<std::size_t>(degree_bound) + 1, 0) {}
    static TruncPoly constant(int degree_bound, std::uint64_t c);

    [[nodiscard]] int degree_bound() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::uint64_t& operator[](std::size_t k) { return coeffs_[k]; }
    [[nodiscard]] std::uint64_t operator[](std::size_t k) const { return coeffs_[k]; }
    [[nodiscard]] bool is_zero() const;

    // this += sign * x^shift * o
    void add_shifted(const PrimeField& f, const TruncPoly& o, int shift, bool negate);
    [[nodiscard]] TruncPoly times(const PrimeField& f, const TruncPoly& o) const;

    friend bool operator==(const TruncPoly&, const TruncPoly&) = default;

private:
    std::vector<std::uint64_t> coeffs_;
};

}  // namespace accthr
