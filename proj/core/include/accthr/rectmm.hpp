#pragma once

#include "accthr/field.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace accthr {

// Base-field multiplications performed by an engine, accumulated in bulk.
struct OpCounter {
    std::uint64_t multiplications = 0;
};

FieldMatrix naive_mm(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b, OpCounter* ops = nullptr);

// ---------------------------------------------------------------- base identity
//
// Five products for a 2x3 matrix with a21 = 0 times a 3x2 matrix with b22 = b32 = 0:
//   sum_l alpha_l(a) beta_l(b) gamma_l(c) = x^2 sum a_ik b_kj c_ji + x^3 P(a, b, c, x).
// Pattern entries are numbered
//   a: (1,1) (1,2) (1,3) (2,2) (2,3)     b: (1,1) (1,2) (2,1) (3,1)
// and c_ji is numbered 2(j-1) + (i-1), i.e. the row-major index of a full 2x2 matrix C
// with C[j][i] = c_ji. Indices below are 0-based.

inline constexpr std::array<std::array<int, 2>, 5> kAPattern{{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}}};
inline constexpr std::array<std::array<int, 2>, 4> kBPattern{{{0, 0}, {0, 1}, {1, 0}, {2, 0}}};

struct IdentityTerm {
    int index = 0;
    bool negated = false;
    int shift = 0;  // power of x
};

struct BaseProduct {
    std::vector<IdentityTerm> a;
    std::vector<IdentityTerm> b;
    std::vector<IdentityTerm> c;
};

const std::array<BaseProduct, 5>& base_products();

// Expands the five products symbolically and checks that the x^0 and x^1 parts vanish
// and the x^2 part is exactly the pattern-respecting trilinear form.
bool verify_base_identity();

// Matrix of truncated polynomials (row-major).
struct PolyMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<TruncPoly> entries;

    PolyMatrix() = default;
    PolyMatrix(std::size_t r, std::size_t c, int degree_bound) : rows(r), cols(c), entries(r * c, TruncPoly(degree_bound)) {}
    TruncPoly& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    [[nodiscard]] const TruncPoly& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

// One level of the identity on polynomial entries: a is 2x3, b is 3x2, result is 2x2 whose
// x^2 coefficient (for scalar inputs) is the pattern product. Throws InvalidInput if a
// pattern zero is nonzero.
PolyMatrix base_bilinear_step(const PrimeField& f, const PolyMatrix& a, const PolyMatrix& b);

// ---------------------------------------------------------------- structured recursion

// True iff every nonzero of the 2^m x 3^m matrix sits on the recursive a-pattern.
bool fits_a_pattern(const FieldMatrix& a, int m);
// Same for the 3^m x 2^m b-pattern.
bool fits_b_pattern(const FieldMatrix& b, int m);

// A (2^m x 3^m, a-pattern) times B (3^m x 2^m, b-pattern) by m levels of the identity with
// x-polynomial entries; the answer is the x^(2m) coefficient.
FieldMatrix structured_sparse_mm(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b, int m,
                                 OpCounter* ops = nullptr);

// The same identity read through tr(ABC) = tr(BCA): B (3^m x 2^m, b-pattern) times a full
// C (2^m x 2^m). Only entries of B*C on the transposed a-pattern are produced; the rest
// of the result is zero.
FieldMatrix rotated_structured_mm(const PrimeField& f, const FieldMatrix& b, const FieldMatrix& c, int m,
                                  OpCounter* ops = nullptr);

// ---------------------------------------------------------------- Vandermonde

// Entry (i, j) of the full matrix is elements[j]^i. Solves minor * w = rhs for the square
// minor on the given power rows and element columns. Throws InvalidInput when the minor is
// singular (for instance on repeated elements).
std::vector<std::uint64_t> vandermonde_minor_solve(const PrimeField& f, std::span<const std::uint64_t> elements,
                                                   std::span<const std::size_t> rows,
                                                   std::span<const std::size_t> cols,
                                                   std::span<const std::uint64_t> rhs);

// Gauss-Jordan inverse; throws InvalidInput when singular.
FieldMatrix invert(const PrimeField& f, FieldMatrix m);

// ---------------------------------------------------------------- Coppersmith construction

// Level-M tables shared by the algorithms below (M a positive multiple of 5).
//   wide   = 2^(4M/5)   narrow = 2^(M/5)   embedded K = C(M, 4M/5) * 2^(4M/5)
class CoppersmithPlan {
public:
    CoppersmithPlan(const PrimeField& f, int level);

    [[nodiscard]] const PrimeField& field() const { return field_; }
    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] std::size_t wide() const { return wide_; }
    [[nodiscard]] std::size_t narrow() const { return narrow_; }
    [[nodiscard]] std::size_t embedded() const { return embedded_; }
    [[nodiscard]] std::size_t side() const { return std::size_t{1} << level_; }

    // Vandermonde factors: left is wide x 2^M, right is 2^M x narrow.
    [[nodiscard]] const FieldMatrix& left() const { return left_; }
    [[nodiscard]] const FieldMatrix& right() const { return right_; }

    // Embedded pattern column q of the 3^M index space, in increasing numeric order.
    [[nodiscard]] std::size_t column(std::size_t q) const { return columns_[q]; }

    struct Slots {
        std::vector<std::size_t> dense;    // row (a side) or column (b side) of each slot
        std::vector<std::size_t> compact;  // compact pattern index of each slot
    };
    [[nodiscard]] const Slots& a_slots(std::size_t q) const { return a_slots_[q]; }
    [[nodiscard]] const Slots& b_slots(std::size_t q) const { return b_slots_[q]; }
    // Inverse of the wide x wide minor of left() on the columns of a_slots(q): slot x power.
    [[nodiscard]] const FieldMatrix& a_inverse(std::size_t q) const { return a_inverse_[q]; }
    // Inverse of the narrow x narrow minor of right() on the rows of b_slots(q): power x slot.
    [[nodiscard]] const FieldMatrix& b_inverse(std::size_t q) const { return b_inverse_[q]; }

private:
    PrimeField field_;
    int level_;
    std::size_t wide_;
    std::size_t narrow_;
    std::size_t embedded_;
    FieldMatrix left_;
    FieldMatrix right_;
    std::vector<std::size_t> columns_;
    std::vector<Slots> a_slots_;
    std::vector<Slots> b_slots_;
    std::vector<FieldMatrix> a_inverse_;
    std::vector<FieldMatrix> b_inverse_;
};

// wide x K times K x narrow.
FieldMatrix algorithm1(const CoppersmithPlan& plan, const FieldMatrix& a, const FieldMatrix& b, OpCounter* ops = nullptr);
// K x narrow times narrow x wide.
FieldMatrix algorithm2(const CoppersmithPlan& plan, const FieldMatrix& b, const FieldMatrix& c, OpCounter* ops = nullptr);
// wide x narrow times narrow x K, as the transpose of algorithm2 on the transposed inputs.
FieldMatrix algorithm3(const CoppersmithPlan& plan, const FieldMatrix& ct, const FieldMatrix& bt, OpCounter* ops = nullptr);

// (K wide) x narrow^2 times narrow^2 x (K wide): algorithm2 over blocks whose products are
// algorithm3, fused so that both share one x and the answer is the x^(4M) coefficient.
FieldMatrix tensor_block_mm(const CoppersmithPlan& plan, const FieldMatrix& x, const FieldMatrix& y,
                            OpCounter* ops = nullptr);

struct CoppersmithParams {
    int level = 5;
    double alpha = 0.172;
    bool enforce_alpha = true;
};

// True iff log d <= alpha log N.
bool alpha_admissible(std::size_t n, std::size_t d, double alpha);

// Rectangular product. A shape that fits algorithm 1, 2 or 3 (in that order) runs it once on
// zero-padded inputs; anything else is cut into tensor blocks whose products are summed.
// Throws InvalidInput when d is too large for alpha (unless enforcement is off).
FieldMatrix coppersmith_rect_mm(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b,
                                const CoppersmithParams& params = {}, OpCounter* ops = nullptr);

}  // namespace accthr
