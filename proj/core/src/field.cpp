#include "accthr/field.hpp"

#include "accthr/errors.hpp"
#include "accthr/rng.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <string>

namespace accthr {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<UInt128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e != 0) {
        if ((e & 1U) != 0) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (const std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for 64-bit inputs.
    for (const std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
    if (p >= (std::uint64_t{1} << 61) + 1 || !is_prime(p))
        throw InvalidInput("field modulus " + std::to_string(p) + " is not a prime below 2^61");
    if (((p + 1) & p) == 0) mersenne_bits_ = static_cast<unsigned>(std::countr_zero(p + 1));
}

std::uint64_t PrimeField::pow(std::uint64_t base, std::uint64_t exp) const {
    std::uint64_t r = 1;
    base %= p_;
    while (exp != 0) {
        if ((exp & 1U) != 0) r = mul(r, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return r;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a % p_ == 0) throw InvalidInput("inverse of zero");
    return pow(a, p_ - 2);
}

std::uint64_t PrimeField::from_signed(std::int64_t v) const {
    const auto m = static_cast<std::int64_t>(p_);
    std::int64_t r = v % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

std::uint64_t PrimeField::from_big(const BigInt& v) const {
    BigInt r = v % p_;
    if (r < 0) r += p_;
    return r.convert_to<std::uint64_t>();
}

BigInt PrimeField::centered(std::uint64_t v) const {
    if (v > p_ / 2) return BigInt(v) - BigInt(p_);
    return BigInt(v);
}

FieldMatrix FieldMatrix::transposed() const {
    FieldMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool FieldMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint64_t v) { return v == 0; });
}

FieldMatrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    FieldMatrix m(rows, cols);
    for (auto& v : m.data()) v = rng.below(f.modulus());
    return m;
}

MatFile read_mat(std::istream& in) {
    MatFile out;
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(in >> rows >> cols >> out.modulus)) throw ParseError(1, "expected header 'rows cols p'");
    out.matrix = FieldMatrix(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        std::uint64_t v = 0;
        if (!(in >> v)) throw ParseError(1 + i / std::max<std::size_t>(cols, 1) + 1, "missing matrix entry");
        if (v >= out.modulus) throw ParseError(1 + i / std::max<std::size_t>(cols, 1) + 1, "entry not reduced modulo p");
        out.matrix.data()[i] = v;
    }
    std::string extra;
    if (in >> extra) throw ParseError(rows + 2, "trailing data after matrix");
    return out;
}

void write_mat(std::ostream& out, const FieldMatrix& m, std::uint64_t modulus) {
    out << m.rows() << ' ' << m.cols() << ' ' << modulus << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j == 0 ? "" : " ") << m(i, j);
        out << '\n';
    }
}

TruncPoly TruncPoly::constant(int degree_bound, std::uint64_t c) {
    TruncPoly p(degree_bound);
    p.coeffs_[0] = c;
    return p;
}

bool TruncPoly::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::uint64_t v) { return v == 0; });
}

void TruncPoly::add_shifted(const PrimeField& f, const TruncPoly& o, int shift, bool negate) {
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) {
        const std::size_t dst = k + static_cast<std::size_t>(shift);
        if (dst >= coeffs_.size()) break;
        coeffs_[dst] = negate ? f.sub(coeffs_[dst], o.coeffs_[k]) : f.add(coeffs_[dst], o.coeffs_[k]);
    }
}

TruncPoly TruncPoly::times(const PrimeField& f, const TruncPoly& o) const {
    TruncPoly r(std::min(degree_bound(), o.degree_bound()));
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i <= k; ++i) acc = f.add(acc, f.mul(coeffs_[i], o.coeffs_[k - i]));
        r.coeffs_[k] = acc;
    }
    return r;
}

}  // namespace accthr
