#include "accthr/rectmm.hpp"

#include "accthr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

namespace accthr {

FieldMatrix naive_mm(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b, OpCounter* ops) {
    if (a.cols() != b.rows())
        throw InvalidInput("dimension mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                           " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    FieldMatrix c(a.rows(), b.cols());
    std::vector<UInt128> acc(b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        int pending = 0;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::uint64_t aik = a(i, k);
            if (aik == 0) continue;
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += static_cast<UInt128>(aik) * brow[j];
            // Products are below 2^122; keep the running sums clear of 2^128.
            if (++pending == 32) {
                for (auto& v : acc) v = f.reduce(v);
                pending = 0;
            }
        }
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = f.reduce(acc[j]);
    }
    if (ops != nullptr) ops->multiplications += a.rows() * a.cols() * b.cols();
    return c;
}

// ---------------------------------------------------------------- base identity

const std::array<BaseProduct, 5>& base_products() {
    // c indices: c11 -> 0, c12 -> 1, c21 -> 2.
    static const std::array<BaseProduct, 5> products{{
        // (a11 + x^2 a12)(b21 + x^2 b11) c11
        {{{0, false, 0}, {1, false, 2}}, {{2, false, 0}, {0, false, 2}}, {{0, false, 0}}},
        // (a11 + x^2 a13) b31 (c11 - x c21)
        {{{0, false, 0}, {2, false, 2}}, {{3, false, 0}}, {{0, false, 0}, {2, true, 1}}},
        // (a11 + x^2 a22)(b21 - x b12) c12
        {{{0, false, 0}, {3, false, 2}}, {{2, false, 0}, {1, true, 1}}, {{1, false, 0}}},
        // (a11 + x^2 a23)(b31 + x b12)(c12 + x c21)
        {{{0, false, 0}, {4, false, 2}}, {{3, false, 0}, {1, false, 1}}, {{1, false, 0}, {2, false, 1}}},
        // -a11 (b21 + b31)(c11 + c12)
        {{{0, true, 0}}, {{2, false, 0}, {3, false, 0}}, {{0, false, 0}, {1, false, 0}}},
    }};
    return products;
}

bool verify_base_identity() {
    std::map<std::tuple<int, int, int, int>, long> expansion;
    for (const auto& prod : base_products())
        for (const auto& ta : prod.a)
            for (const auto& tb : prod.b)
                for (const auto& tc : prod.c) {
                    const long sign = (ta.negated != tb.negated) != tc.negated ? -1 : 1;
                    expansion[{ta.index, tb.index, tc.index, ta.shift + tb.shift + tc.shift}] += sign;
                }
    std::map<std::tuple<int, int, int, int>, long> expected;
    for (int p = 0; p < 5; ++p)
        for (int q = 0; q < 4; ++q) {
            const auto [i, k] = kAPattern[static_cast<std::size_t>(p)];
            const auto [k2, j] = kBPattern[static_cast<std::size_t>(q)];
            if (k != k2) continue;
            expected[{p, q, 2 * j + i, 2}] += 1;
        }
    for (const auto& [key, coeff] : expansion) {
        const int degree = std::get<3>(key);
        if (degree > 2) continue;
        const auto it = expected.find(key);
        if (coeff != (it == expected.end() ? 0 : it->second)) return false;
    }
    for (const auto& [key, coeff] : expected) {
        const auto it = expansion.find(key);
        if (it == expansion.end() || it->second != coeff) return false;
    }
    return true;
}

PolyMatrix base_bilinear_step(const PrimeField& f, const PolyMatrix& a, const PolyMatrix& b) {
    if (a.rows != 2 || a.cols != 3 || b.rows != 3 || b.cols != 2) throw InvalidInput("base step needs 2x3 times 3x2");
    if (!a.at(1, 0).is_zero() || !b.at(1, 1).is_zero() || !b.at(2, 1).is_zero())
        throw InvalidInput("base step input violates the sparsity pattern");
    const int degree = a.entries[0].degree_bound();
    PolyMatrix out(2, 2, degree);
    for (const auto& prod : base_products()) {
        TruncPoly left(degree);
        TruncPoly right(degree);
        for (const auto& t : prod.a) {
            const auto [i, k] = kAPattern[static_cast<std::size_t>(t.index)];
            left.add_shifted(f, a.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k)), t.shift, t.negated);
        }
        for (const auto& t : prod.b) {
            const auto [k, j] = kBPattern[static_cast<std::size_t>(t.index)];
            right.add_shifted(f, b.at(static_cast<std::size_t>(k), static_cast<std::size_t>(j)), t.shift, t.negated);
        }
        const TruncPoly product = left.times(f, right);
        for (const auto& t : prod.c) {
            const int j = t.index / 2;
            const int i = t.index % 2;
            out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).add_shifted(f, product, t.shift, t.negated);
        }
    }
    return out;
}

// ---------------------------------------------------------------- compact recursion engine

namespace {

std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// `count` polynomials stored back to back with `width` coefficients each. The
// coefficient offset (lowest stored degree) is tracked by the caller.
struct PolyArray {
    std::size_t count = 0;
    int width = 1;
    std::vector<std::uint64_t> c;

    PolyArray() = default;
    PolyArray(std::size_t n, int w) : count(n), width(w), c(n * static_cast<std::size_t>(w), 0) {}
    // Zero-filled reshape that keeps the allocation.
    void reset(std::size_t n, int w) {
        count = n;
        width = w;
        c.assign(n * static_cast<std::size_t>(w), 0);
    }
    std::uint64_t* at(std::size_t i) { return c.data() + i * static_cast<std::size_t>(width); }
    [[nodiscard]] const std::uint64_t* at(std::size_t i) const { return c.data() + i * static_cast<std::size_t>(width); }
};

using Terms = std::vector<IdentityTerm>;

int max_shift(const Terms& terms) {
    int s = 0;
    for (const auto& t : terms) s = std::max(s, t.shift);
    return s;
}

// Sum of sign * x^shift * (sub-block t.index) over the terms, truncated above degree hi.
void combine(const PrimeField& f, const PolyArray& src, std::size_t block, const Terms& terms, int hi, PolyArray& out) {
    const int width = std::min(hi, src.width - 1 + max_shift(terms)) + 1;
    out.reset(block, width);
    for (const auto& t : terms) {
        const int copy = std::min(src.width, width - t.shift);
        if (copy <= 0) continue;
        const std::uint64_t* s = src.at(static_cast<std::size_t>(t.index) * block);
        for (std::size_t e = 0; e < block; ++e) {
            std::uint64_t* d = out.at(e) + t.shift;
            const std::uint64_t* se = s + e * static_cast<std::size_t>(src.width);
            if (t.negated) {
                for (int k = 0; k < copy; ++k) d[k] = f.sub(d[k], se[k]);
            } else {
                for (int k = 0; k < copy; ++k) d[k] = f.add(d[k], se[k]);
            }
        }
    }
}

// out block t.index += sign * x^shift * prod over the window of out.
void accumulate(const PrimeField& f, PolyArray& out, int out_lo, std::size_t block, const PolyArray& prod, int prod_lo,
                const Terms& terms) {
    for (const auto& t : terms) {
        // Output degree k reads product degree k - shift.
        const int k_first = std::max(out_lo, prod_lo + t.shift);
        const int k_last = std::min(out_lo + out.width - 1, prod_lo + prod.width - 1 + t.shift);
        if (k_first > k_last) continue;
        const std::size_t base = static_cast<std::size_t>(t.index) * block;
        for (std::size_t e = 0; e < block; ++e) {
            std::uint64_t* d = out.at(base + e) + (k_first - out_lo);
            const std::uint64_t* s = prod.at(e) + (k_first - t.shift - prod_lo);
            const int n = k_last - k_first + 1;
            if (t.negated) {
                for (int k = 0; k < n; ++k) d[k] = f.sub(d[k], s[k]);
            } else {
                for (int k = 0; k < n; ++k) d[k] = f.add(d[k], s[k]);
            }
        }
    }
}

struct Layout {
    std::size_t base_x;
    std::size_t base_y;
    std::size_t base_out;
    std::array<const Terms*, 5> tx;
    std::array<const Terms*, 5> ty;
    std::array<const Terms*, 5> tout;
    std::size_t ex = 1;
    std::size_t ey = 1;
    std::size_t eout = 1;
};

// Forward layout (A times B -> Z) and rotated layout (B times C -> A^T).
struct Layouts {
    std::array<Terms, 5> forward_out;
    Layout forward{};
    Layout rotated{};

    Layouts() {
        const auto& prods = base_products();
        for (std::size_t l = 0; l < 5; ++l) {
            for (const auto& t : prods[l].c) {
                // c_ji feeds output entry (i, j).
                const int j = t.index / 2;
                const int i = t.index % 2;
                forward_out[l].push_back({2 * i + j, t.negated, t.shift});
            }
            forward.tx[l] = &prods[l].a;
            forward.ty[l] = &prods[l].b;
            forward.tout[l] = &forward_out[l];
            rotated.tx[l] = &prods[l].b;
            rotated.ty[l] = &prods[l].c;
            rotated.tout[l] = &prods[l].a;
        }
        forward.base_x = 5;
        forward.base_y = 4;
        forward.base_out = 4;
        rotated.base_x = 4;
        rotated.base_y = 4;
        rotated.base_out = 5;
    }
};

const Layouts& layouts() {
    static const Layouts l;
    return l;
}

// Per-depth scratch buffers; depth-first recursion reuses one set per level.
struct Workspace {
    std::vector<PolyArray> xs;
    std::vector<PolyArray> ys;
    std::vector<PolyArray> products;
    explicit Workspace(int levels)
        : xs(static_cast<std::size_t>(levels) + 1), ys(xs.size()), products(xs.size()) {}
};

template <class Leaf>
void recurse(const PrimeField& f, const Layout& lay, const PolyArray& x, const PolyArray& y, int m, int lo, int hi,
             Leaf& leaf, Workspace& ws, PolyArray& out) {
    if (m == 0) {
        leaf(x, y, lo, hi, out);
        return;
    }
    const std::size_t bx = ipow(lay.base_x, m - 1) * lay.ex;
    const std::size_t by = ipow(lay.base_y, m - 1) * lay.ey;
    const std::size_t bout = ipow(lay.base_out, m - 1) * lay.eout;
    out.reset(bout * lay.base_out, hi - lo + 1);
    const auto depth = static_cast<std::size_t>(m);
    PolyArray& xl = ws.xs[depth];
    PolyArray& yl = ws.ys[depth];
    PolyArray& p = ws.products[depth];
    for (std::size_t l = 0; l < 5; ++l) {
        combine(f, x, bx, *lay.tx[l], hi, xl);
        combine(f, y, by, *lay.ty[l], hi, yl);
        const int lo_l = std::max(0, lo - max_shift(*lay.tout[l]));
        recurse(f, lay, xl, yl, m - 1, lo_l, hi, leaf, ws, p);
        accumulate(f, out, lo, bout, p, lo_l, *lay.tout[l]);
    }
}

template <class Leaf>
PolyArray run(const PrimeField& f, const Layout& lay, const PolyArray& x, const PolyArray& y, int m, int lo, int hi,
              Leaf& leaf) {
    Workspace ws(m);
    PolyArray out;
    recurse(f, lay, x, y, m, lo, hi, leaf, ws, out);
    return out;
}

// Scalar-polynomial product restricted to degrees lo..hi.
struct PlainLeaf {
    const PrimeField& f;
    std::uint64_t products = 0;

    void operator()(const PolyArray& x, const PolyArray& y, int lo, int hi, PolyArray& out) {
        out.reset(1, hi - lo + 1);
        const std::uint64_t* a = x.at(0);
        const std::uint64_t* b = y.at(0);
        for (int k = lo; k <= hi; ++k) {
            const int i_first = std::max(0, k - (y.width - 1));
            const int i_last = std::min(k, x.width - 1);
            UInt128 acc = 0;
            int pending = 0;
            for (int i = i_first; i <= i_last; ++i) {
                acc += static_cast<UInt128>(a[i]) * b[k - i];
                if (++pending == 32) {
                    acc = f.reduce(acc);
                    pending = 0;
                }
            }
            if (i_last >= i_first) products += static_cast<std::uint64_t>(i_last - i_first + 1);
            out.c[static_cast<std::size_t>(k - lo)] = f.reduce(acc);
        }
    }
};

struct DigitMaps {
    std::vector<std::size_t> a_dense;     // compact a-pattern -> r * 3^m + c
    std::vector<std::size_t> b_dense;     // compact b-pattern -> k * 2^m + j
    std::vector<std::size_t> full_dense;  // compact full -> row * 2^m + col
    std::vector<std::size_t> full_compact;
};

DigitMaps digit_maps(int m) {
    DigitMaps d;
    const std::size_t two = ipow(2, m);
    const std::size_t three = ipow(3, m);
    d.a_dense.resize(ipow(5, m));
    for (std::size_t idx = 0; idx < d.a_dense.size(); ++idx) {
        std::size_t rest = idx;
        std::size_t r = 0;
        std::size_t c = 0;
        std::size_t p2 = 1;
        std::size_t p3 = 1;
        for (int t = 0; t < m; ++t) {
            const auto [i, k] = kAPattern[rest % 5];
            rest /= 5;
            r += static_cast<std::size_t>(i) * p2;
            c += static_cast<std::size_t>(k) * p3;
            p2 *= 2;
            p3 *= 3;
        }
        d.a_dense[idx] = r * three + c;
    }
    d.b_dense.resize(ipow(4, m));
    d.full_dense.resize(ipow(4, m));
    d.full_compact.resize(two * two);
    for (std::size_t idx = 0; idx < d.b_dense.size(); ++idx) {
        std::size_t rest = idx;
        std::size_t k = 0;
        std::size_t j = 0;
        std::size_t row = 0;
        std::size_t col = 0;
        std::size_t p2 = 1;
        std::size_t p3 = 1;
        for (int t = 0; t < m; ++t) {
            const std::size_t digit = rest % 4;
            rest /= 4;
            const auto [bk, bj] = kBPattern[digit];
            k += static_cast<std::size_t>(bk) * p3;
            j += static_cast<std::size_t>(bj) * p2;
            row += (digit / 2) * p2;
            col += (digit % 2) * p2;
            p2 *= 2;
            p3 *= 3;
        }
        d.b_dense[idx] = k * two + j;
        d.full_dense[idx] = row * two + col;
        d.full_compact[row * two + col] = idx;
    }
    return d;
}

// Digit-by-digit encodings above read the least significant digit first on both sides,
// which is the same as most-significant-first block recursion on both sides.

PolyArray scalars(std::size_t n) { return PolyArray(n, 1); }

FieldMatrix compact_full_to_dense(const PolyArray& z, const DigitMaps& d, std::size_t side) {
    FieldMatrix out(side, side);
    for (std::size_t idx = 0; idx < z.count; ++idx) out.data()[d.full_dense[idx]] = z.at(idx)[0];
    return out;
}

}  // namespace

bool fits_a_pattern(const FieldMatrix& a, int m) {
    const std::size_t two = ipow(2, m);
    const std::size_t three = ipow(3, m);
    if (a.rows() != two || a.cols() != three) return false;
    for (std::size_t r = 0; r < two; ++r)
        for (std::size_t c = 0; c < three; ++c) {
            if (a(r, c) == 0) continue;
            std::size_t rr = r;
            std::size_t cc = c;
            for (int t = 0; t < m; ++t) {
                if (rr % 2 == 1 && cc % 3 == 0) return false;
                rr /= 2;
                cc /= 3;
            }
        }
    return true;
}

bool fits_b_pattern(const FieldMatrix& b, int m) {
    const std::size_t two = ipow(2, m);
    const std::size_t three = ipow(3, m);
    if (b.rows() != three || b.cols() != two) return false;
    for (std::size_t k = 0; k < three; ++k)
        for (std::size_t j = 0; j < two; ++j) {
            if (b(k, j) == 0) continue;
            std::size_t kk = k;
            std::size_t jj = j;
            for (int t = 0; t < m; ++t) {
                if (jj % 2 == 1 && kk % 3 != 0) return false;
                kk /= 3;
                jj /= 2;
            }
        }
    return true;
}

FieldMatrix structured_sparse_mm(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b, int m, OpCounter* ops) {
    if (m < 0 || m > 12) throw InvalidInput("structured level out of range");
    if (!fits_a_pattern(a, m) || !fits_b_pattern(b, m)) throw InvalidInput("input violates the structured sparsity pattern");
    const DigitMaps d = digit_maps(m);
    PolyArray x = scalars(d.a_dense.size());
    for (std::size_t i = 0; i < x.count; ++i) x.c[i] = a.data()[d.a_dense[i]];
    PolyArray y = scalars(d.b_dense.size());
    for (std::size_t i = 0; i < y.count; ++i) y.c[i] = b.data()[d.b_dense[i]];
    PlainLeaf leaf{f};
    const PolyArray z = run(f, layouts().forward, x, y, m, 2 * m, 2 * m, leaf);
    if (ops != nullptr) ops->multiplications += leaf.products;
    return compact_full_to_dense(z, d, ipow(2, m));
}

FieldMatrix rotated_structured_mm(const PrimeField& f, const FieldMatrix& b, const FieldMatrix& c, int m, OpCounter* ops) {
    if (m < 0 || m > 12) throw InvalidInput("structured level out of range");
    const std::size_t two = ipow(2, m);
    if (!fits_b_pattern(b, m) || c.rows() != two || c.cols() != two)
        throw InvalidInput("rotated structured multiply needs a b-pattern matrix and a full square matrix");
    const DigitMaps d = digit_maps(m);
    PolyArray x = scalars(d.b_dense.size());
    for (std::size_t i = 0; i < x.count; ++i) x.c[i] = b.data()[d.b_dense[i]];
    PolyArray y = scalars(d.full_dense.size());
    for (std::size_t i = 0; i < y.count; ++i) y.c[i] = c.data()[d.full_dense[i]];
    PlainLeaf leaf{f};
    const PolyArray at = run(f, layouts().rotated, x, y, m, 2 * m, 2 * m, leaf);
    if (ops != nullptr) ops->multiplications += leaf.products;
    const std::size_t three = ipow(3, m);
    FieldMatrix out(three, two);
    for (std::size_t idx = 0; idx < at.count; ++idx) {
        const std::size_t r = d.a_dense[idx] / three;
        const std::size_t col = d.a_dense[idx] % three;
        out(col, r) = at.at(idx)[0];
    }
    return out;
}

// ---------------------------------------------------------------- Vandermonde

FieldMatrix invert(const PrimeField& f, FieldMatrix m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw InvalidInput("only square matrices are invertible");
    FieldMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m(pivot, col) == 0) ++pivot;
        if (pivot == n) throw InvalidInput("singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(pivot, j), m(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const std::uint64_t scale = f.inv(m(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) = f.mul(m(col, j), scale);
            inv(col, j) = f.mul(inv(col, j), scale);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m(r, col) == 0) continue;
            const std::uint64_t factor = m(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) = f.sub(m(r, j), f.mul(factor, m(col, j)));
                inv(r, j) = f.sub(inv(r, j), f.mul(factor, inv(col, j)));
            }
        }
    }
    return inv;
}

std::vector<std::uint64_t> vandermonde_minor_solve(const PrimeField& f, std::span<const std::uint64_t> elements,
                                                   std::span<const std::size_t> rows,
                                                   std::span<const std::size_t> cols,
                                                   std::span<const std::uint64_t> rhs) {
    const std::size_t n = rows.size();
    if (cols.size() != n || rhs.size() != n) throw InvalidInput("Vandermonde minor must be square and match the rhs");
    FieldMatrix minor(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (cols[j] >= elements.size()) throw InvalidInput("Vandermonde column out of range");
            minor(i, j) = f.pow(elements[cols[j]], rows[i]);
        }
    const FieldMatrix inv = invert(f, minor);
    std::vector<std::uint64_t> w(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc = f.add(acc, f.mul(inv(i, j), rhs[j]));
        w[i] = acc;
    }
    return w;
}

// ---------------------------------------------------------------- plan

CoppersmithPlan::CoppersmithPlan(const PrimeField& f, int level) : field_(f), level_(level) {
    if (level <= 0 || level % 5 != 0 || level > 10) throw InvalidInput("Coppersmith level must be 5 or 10");
    const std::size_t side = std::size_t{1} << level;
    if (f.modulus() <= side + 1) throw InvalidInput("field too small for 2^M distinct Vandermonde elements");
    const int heavy = 4 * level / 5;
    wide_ = std::size_t{1} << heavy;
    narrow_ = std::size_t{1} << (level / 5);
    const std::size_t three = ipow(3, level);
    for (std::size_t c = 0; c < three; ++c) {
        std::size_t rest = c;
        int nonzero = 0;
        for (int t = 0; t < level; ++t) {
            nonzero += rest % 3 != 0 ? 1 : 0;
            rest /= 3;
        }
        if (nonzero == heavy) columns_.push_back(c);
    }
    embedded_ = columns_.size();

    left_ = FieldMatrix(wide_, side);
    for (std::size_t r = 0; r < side; ++r) {
        std::uint64_t power = 1;
        for (std::size_t i = 0; i < wide_; ++i) {
            left_(i, r) = power;
            power = f.mul(power, r + 1);
        }
    }
    right_ = FieldMatrix(side, narrow_);
    for (std::size_t c = 0; c < side; ++c) {
        std::uint64_t power = 1;
        for (std::size_t j = 0; j < narrow_; ++j) {
            right_(c, j) = power;
            power = f.mul(power, c + 1);
        }
    }

    // Digit t of a dense index (least significant first) pairs with compact digit t.
    const auto a_compact = [&](std::size_t r, std::size_t c) {
        std::size_t idx = 0;
        std::size_t scale = 1;
        for (int t = 0; t < level; ++t) {
            const int i = static_cast<int>(r % 2);
            const int k = static_cast<int>(c % 3);
            int digit = 0;
            while (kAPattern[static_cast<std::size_t>(digit)][0] != i || kAPattern[static_cast<std::size_t>(digit)][1] != k) ++digit;
            idx += static_cast<std::size_t>(digit) * scale;
            scale *= 5;
            r /= 2;
            c /= 3;
        }
        return idx;
    };
    const auto b_compact = [&](std::size_t k, std::size_t j) {
        std::size_t idx = 0;
        std::size_t scale = 1;
        for (int t = 0; t < level; ++t) {
            const int kk = static_cast<int>(k % 3);
            const int jj = static_cast<int>(j % 2);
            int digit = 0;
            while (kBPattern[static_cast<std::size_t>(digit)][0] != kk || kBPattern[static_cast<std::size_t>(digit)][1] != jj) ++digit;
            idx += static_cast<std::size_t>(digit) * scale;
            scale *= 4;
            k /= 3;
            j /= 2;
        }
        return idx;
    };

    for (const std::size_t c : columns_) {
        Slots as;
        Slots bs;
        for (std::size_t r = 0; r < side; ++r) {
            bool ok_a = true;
            bool ok_b = true;
            std::size_t rr = r;
            std::size_t cc = c;
            for (int t = 0; t < level; ++t) {
                if (rr % 2 == 1 && cc % 3 == 0) ok_a = false;
                if (rr % 2 == 1 && cc % 3 != 0) ok_b = false;
                rr /= 2;
                cc /= 3;
            }
            if (ok_a) {
                as.dense.push_back(r);
                as.compact.push_back(a_compact(r, c));
            }
            if (ok_b) {
                bs.dense.push_back(r);
                bs.compact.push_back(b_compact(c, r));
            }
        }
        FieldMatrix am(wide_, wide_);
        for (std::size_t i = 0; i < wide_; ++i)
            for (std::size_t s = 0; s < wide_; ++s) am(i, s) = left_(i, as.dense[s]);
        FieldMatrix bm(narrow_, narrow_);
        for (std::size_t s = 0; s < narrow_; ++s)
            for (std::size_t j = 0; j < narrow_; ++j) bm(s, j) = right_(bs.dense[s], j);
        a_inverse_.push_back(invert(f, am));
        b_inverse_.push_back(invert(f, bm));
        a_slots_.push_back(std::move(as));
        b_slots_.push_back(std::move(bs));
    }
}

// ---------------------------------------------------------------- algorithms 1-3

namespace {

// B'' (K x narrow) to the compact b-pattern operand: row q of B'' times the inverse minor.
void embed_rows(const CoppersmithPlan& plan, const FieldMatrix& src, std::uint64_t* dst, OpCounter& ops) {
    const PrimeField& f = plan.field();
    for (std::size_t q = 0; q < plan.embedded(); ++q) {
        const FieldMatrix& inv = plan.b_inverse(q);
        const auto& slots = plan.b_slots(q);
        for (std::size_t s = 0; s < plan.narrow(); ++s) {
            UInt128 acc = 0;
            for (std::size_t j = 0; j < plan.narrow(); ++j) acc += static_cast<UInt128>(src(q, j)) * inv(j, s);
            dst[slots.compact[s]] = f.reduce(acc);
        }
    }
    ops.multiplications += plan.embedded() * plan.narrow() * plan.narrow();
}

// Row q of the result: the a-slots of row q of A^T times the inverse minor.
FieldMatrix extract_rows(const CoppersmithPlan& plan, const std::uint64_t* at, OpCounter& ops) {
    const PrimeField& f = plan.field();
    FieldMatrix out(plan.embedded(), plan.wide());
    for (std::size_t q = 0; q < plan.embedded(); ++q) {
        const FieldMatrix& inv = plan.a_inverse(q);
        const auto& slots = plan.a_slots(q);
        for (std::size_t mcol = 0; mcol < plan.wide(); ++mcol) {
            UInt128 acc = 0;
            for (std::size_t s = 0; s < plan.wide(); ++s) {
                acc += static_cast<UInt128>(at[slots.compact[s]]) * inv(s, mcol);
                if ((s & 31U) == 31U) acc = f.reduce(acc);
            }
            out(q, mcol) = f.reduce(acc);
        }
    }
    ops.multiplications += plan.embedded() * plan.wide() * plan.wide();
    return out;
}

void check_dims(const FieldMatrix& m, std::size_t rows, std::size_t cols, const char* what) {
    if (m.rows() != rows || m.cols() != cols)
        throw InvalidInput(std::string(what) + " must be " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

}  // namespace

FieldMatrix algorithm1(const CoppersmithPlan& plan, const FieldMatrix& a, const FieldMatrix& b, OpCounter* ops) {
    check_dims(a, plan.wide(), plan.embedded(), "algorithm1 left input");
    check_dims(b, plan.embedded(), plan.narrow(), "algorithm1 right input");
    const PrimeField& f = plan.field();
    const int m = plan.level();
    OpCounter local;
    const DigitMaps d = digit_maps(m);

    PolyArray x = scalars(d.a_dense.size());
    for (std::size_t q = 0; q < plan.embedded(); ++q) {
        const FieldMatrix& inv = plan.a_inverse(q);
        const auto& slots = plan.a_slots(q);
        for (std::size_t s = 0; s < plan.wide(); ++s) {
            UInt128 acc = 0;
            for (std::size_t i = 0; i < plan.wide(); ++i) {
                acc += static_cast<UInt128>(inv(s, i)) * a(i, q);
                if ((i & 31U) == 31U) acc = f.reduce(acc);
            }
            x.c[slots.compact[s]] = f.reduce(acc);
        }
    }
    local.multiplications += plan.embedded() * plan.wide() * plan.wide();
    PolyArray y = scalars(d.b_dense.size());
    embed_rows(plan, b, y.c.data(), local);

    PlainLeaf leaf{f};
    const PolyArray z = run(f, layouts().forward, x, y, m, 2 * m, 2 * m, leaf);
    local.multiplications += leaf.products;
    const FieldMatrix zd = compact_full_to_dense(z, d, plan.side());
    const FieldMatrix out = naive_mm(f, plan.left(), naive_mm(f, zd, plan.right(), &local), &local);
    if (ops != nullptr) ops->multiplications += local.multiplications;
    return out;
}

FieldMatrix algorithm2(const CoppersmithPlan& plan, const FieldMatrix& b, const FieldMatrix& c, OpCounter* ops) {
    check_dims(b, plan.embedded(), plan.narrow(), "algorithm2 left input");
    check_dims(c, plan.narrow(), plan.wide(), "algorithm2 right input");
    const PrimeField& f = plan.field();
    const int m = plan.level();
    OpCounter local;
    const DigitMaps d = digit_maps(m);

    PolyArray x = scalars(d.b_dense.size());
    embed_rows(plan, b, x.c.data(), local);
    // C = B' (C'' A'), the cheap association.
    const FieldMatrix full = naive_mm(f, plan.right(), naive_mm(f, c, plan.left(), &local), &local);
    PolyArray y = scalars(d.full_dense.size());
    for (std::size_t i = 0; i < y.count; ++i) y.c[i] = full.data()[d.full_dense[i]];

    PlainLeaf leaf{f};
    const PolyArray at = run(f, layouts().rotated, x, y, m, 2 * m, 2 * m, leaf);
    local.multiplications += leaf.products;
    FieldMatrix out = extract_rows(plan, at.c.data(), local);
    if (ops != nullptr) ops->multiplications += local.multiplications;
    return out;
}

FieldMatrix algorithm3(const CoppersmithPlan& plan, const FieldMatrix& ct, const FieldMatrix& bt, OpCounter* ops) {
    check_dims(ct, plan.wide(), plan.narrow(), "algorithm3 left input");
    check_dims(bt, plan.narrow(), plan.embedded(), "algorithm3 right input");
    return algorithm2(plan, bt.transposed(), ct.transposed(), ops).transposed();
}

// ---------------------------------------------------------------- tensor block

namespace {

// Outer leaf: the inner rotated multiply on the element pair, kept as raw x-polynomials
// and projected onto the embedded slots of the inner A^T.
struct TensorLeaf {
    const PrimeField& f;
    int level;
    const std::vector<std::size_t>& projection;
    PlainLeaf inner;
    Workspace ws;
    PolyArray at;

    TensorLeaf(const PrimeField& field, int m, const std::vector<std::size_t>& proj)
        : f(field), level(m), projection(proj), inner{field}, ws(m) {}

    void operator()(const PolyArray& x_elem, const PolyArray& y_elem, int lo, int hi, PolyArray& out) {
        // x_elem is the inner C operand, y_elem the inner B operand.
        recurse(f, layouts().rotated, y_elem, x_elem, level, lo, hi, inner, ws, at);
        out.reset(projection.size(), at.width);
        for (std::size_t i = 0; i < projection.size(); ++i)
            std::copy_n(at.at(projection[i]), at.width, out.at(i));
    }
};

}  // namespace

FieldMatrix tensor_block_mm(const CoppersmithPlan& plan, const FieldMatrix& xm, const FieldMatrix& ym, OpCounter* ops) {
    const std::size_t k = plan.embedded();
    const std::size_t wide = plan.wide();
    const std::size_t narrow = plan.narrow();
    const std::size_t side = plan.side();
    check_dims(xm, k * wide, narrow * narrow, "tensor block left input");
    check_dims(ym, narrow * narrow, k * wide, "tensor block right input");
    const PrimeField& f = plan.field();
    const int m = plan.level();
    const DigitMaps d = digit_maps(m);
    const std::size_t elems = d.full_dense.size();  // 4^M, both operand element sizes
    OpCounter local;

    // Outer B'' element (q, j) is the wide x narrow block of X; after row embedding each
    // outer b-pattern entry becomes the inner C operand B' (E^T A').
    PolyArray outer_b(elems * elems, 1);
    {
        FieldMatrix elem(wide, narrow);
        for (std::size_t q = 0; q < k; ++q) {
            const FieldMatrix& inv = plan.b_inverse(q);
            const auto& slots = plan.b_slots(q);
            for (std::size_t s = 0; s < narrow; ++s) {
                for (std::size_t r = 0; r < wide; ++r)
                    for (std::size_t c = 0; c < narrow; ++c) {
                        UInt128 acc = 0;
                        for (std::size_t j = 0; j < narrow; ++j)
                            acc += static_cast<UInt128>(inv(j, s)) * xm(q * wide + r, j * narrow + c);
                        elem(r, c) = f.reduce(acc);
                    }
                local.multiplications += wide * narrow * narrow;
                const FieldMatrix inner_c =
                    naive_mm(f, plan.right(), naive_mm(f, elem.transposed(), plan.left(), &local), &local);
                std::uint64_t* dst = outer_b.at(slots.compact[s] * elems);
                for (std::size_t i = 0; i < elems; ++i) dst[i] = inner_c.data()[d.full_dense[i]];
            }
        }
    }

    // Outer C'' element (j, mcol) is the narrow x K block of Y; the outer full operand is
    // B' (C'' A') over elements, and each element is then row-embedded as an inner B.
    PolyArray outer_c(elems * elems, 1);
    {
        const std::size_t esize = narrow * k;
        // ca[(j, col)] = sum_mcol Y(j, mcol) * left(mcol, col)
        std::vector<std::uint64_t> ca(narrow * side * esize, 0);
        for (std::size_t j = 0; j < narrow; ++j)
            for (std::size_t col = 0; col < side; ++col) {
                std::uint64_t* dst = ca.data() + (j * side + col) * esize;
                for (std::size_t a = 0; a < narrow; ++a)
                    for (std::size_t b = 0; b < k; ++b) {
                        UInt128 acc = 0;
                        for (std::size_t mcol = 0; mcol < wide; ++mcol) {
                            acc += static_cast<UInt128>(ym(j * narrow + a, mcol * k + b)) * plan.left()(mcol, col);
                            if ((mcol & 31U) == 31U) acc = f.reduce(acc);
                        }
                        dst[a * k + b] = f.reduce(acc);
                    }
            }
        local.multiplications += narrow * side * esize * wide;
        FieldMatrix elem(narrow, k);
        for (std::size_t row = 0; row < side; ++row)
            for (std::size_t col = 0; col < side; ++col) {
                for (std::size_t e = 0; e < esize; ++e) {
                    UInt128 acc = 0;
                    for (std::size_t j = 0; j < narrow; ++j)
                        acc += static_cast<UInt128>(plan.right()(row, j)) * ca[(j * side + col) * esize + e];
                    elem.data()[e] = f.reduce(acc);
                }
                local.multiplications += esize * narrow;
                embed_rows(plan, elem.transposed(), outer_c.at(d.full_compact[row * side + col] * elems), local);
            }
    }

    std::vector<std::size_t> projection;
    projection.reserve(k * wide);
    for (std::size_t q = 0; q < k; ++q)
        for (std::size_t s = 0; s < wide; ++s) projection.push_back(plan.a_slots(q).compact[s]);

    Layout outer = layouts().rotated;
    outer.ex = elems;
    outer.ey = elems;
    outer.eout = projection.size();
    TensorLeaf leaf(f, m, projection);
    const PolyArray at = run(f, outer, outer_b, outer_c, m, 4 * m, 4 * m, leaf);
    local.multiplications += leaf.inner.products;

    // Outer row extraction over elements, then inner extraction inside each element.
    FieldMatrix result(k * wide, wide * k);
    const std::size_t eout = projection.size();
    std::vector<UInt128> acc(eout);
    std::vector<std::uint64_t> elem(eout);
    for (std::size_t q = 0; q < k; ++q) {
        const FieldMatrix& inv = plan.a_inverse(q);
        const auto& slots = plan.a_slots(q);
        for (std::size_t mcol = 0; mcol < wide; ++mcol) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t s = 0; s < wide; ++s) {
                const std::uint64_t w = inv(s, mcol);
                const std::uint64_t* src = at.at(slots.compact[s] * eout);
                for (std::size_t e = 0; e < eout; ++e) acc[e] += static_cast<UInt128>(src[e]) * w;
                if ((s & 31U) == 31U)
                    for (auto& v : acc) v = f.reduce(v);
            }
            for (std::size_t e = 0; e < eout; ++e) elem[e] = f.reduce(acc[e]);
            // Inner: elem holds the embedded a-slots of the inner A^T, row q' at q' * wide.
            for (std::size_t qi = 0; qi < k; ++qi) {
                const FieldMatrix& inv_i = plan.a_inverse(qi);
                for (std::size_t mi = 0; mi < wide; ++mi) {
                    UInt128 sum = 0;
                    for (std::size_t s = 0; s < wide; ++s) {
                        sum += static_cast<UInt128>(elem[qi * wide + s]) * inv_i(s, mi);
                        if ((s & 31U) == 31U) sum = f.reduce(sum);
                    }
                    result(q * wide + mi, mcol * k + qi) = f.reduce(sum);
                }
            }
        }
    }
    local.multiplications += 2 * k * wide * wide * eout;
    if (ops != nullptr) ops->multiplications += local.multiplications;
    return result;
}

namespace {

FieldMatrix padded(const FieldMatrix& m, std::size_t rows, std::size_t cols) {
    FieldMatrix out(rows, cols);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace

bool alpha_admissible(std::size_t n, std::size_t d, double alpha) {
    if (d <= 1) return true;
    if (n <= 1) return false;
    return std::log(static_cast<double>(d)) <= alpha * std::log(static_cast<double>(n)) + 1e-12;
}

FieldMatrix coppersmith_rect_mm(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b,
                                const CoppersmithParams& params, OpCounter* ops) {
    if (a.cols() != b.rows()) throw InvalidInput("dimension mismatch");
    const std::size_t n = std::max(a.rows(), b.cols());
    const std::size_t d = a.cols();
    if (params.enforce_alpha && !alpha_admissible(n, d, params.alpha))
        throw InvalidInput("inner dimension " + std::to_string(d) + " exceeds N^alpha for N = " + std::to_string(n));
    const CoppersmithPlan plan(f, params.level);
    const std::size_t wide = plan.wide();
    const std::size_t narrow = plan.narrow();
    const std::size_t k = plan.embedded();
    const auto fits = [&](std::size_t rows, std::size_t inner, std::size_t cols) {
        return a.rows() <= rows && d <= inner && b.cols() <= cols;
    };
    // Shapes inside one base algorithm run it once on zero-padded inputs.
    using Base = FieldMatrix (*)(const CoppersmithPlan&, const FieldMatrix&, const FieldMatrix&, OpCounter*);
    const auto single = [&](Base run, std::size_t rows, std::size_t inner, std::size_t cols) {
        const FieldMatrix z = run(plan, padded(a, rows, inner), padded(b, inner, cols), ops);
        FieldMatrix out(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = z(i, j);
        return out;
    };
    if (fits(wide, k, narrow)) return single(&algorithm1, wide, k, narrow);
    if (fits(k, narrow, wide)) return single(&algorithm2, k, narrow, wide);
    if (fits(wide, narrow, k)) return single(&algorithm3, wide, narrow, k);

    const std::size_t block = plan.embedded() * plan.wide();
    const std::size_t chunk = plan.narrow() * plan.narrow();
    FieldMatrix out(a.rows(), b.cols());
    OpCounter local;
    for (std::size_t r0 = 0; r0 < a.rows(); r0 += block)
        for (std::size_t c0 = 0; c0 < b.cols(); c0 += block)
            for (std::size_t k0 = 0; k0 < d; k0 += chunk) {
                FieldMatrix x(block, chunk);
                FieldMatrix y(chunk, block);
                for (std::size_t r = 0; r < block && r0 + r < a.rows(); ++r)
                    for (std::size_t t = 0; t < chunk && k0 + t < d; ++t) x(r, t) = a(r0 + r, k0 + t);
                for (std::size_t t = 0; t < chunk && k0 + t < d; ++t)
                    for (std::size_t c = 0; c < block && c0 + c < b.cols(); ++c) y(t, c) = b(k0 + t, c0 + c);
                if (x.is_zero() || y.is_zero()) continue;
                const FieldMatrix z = tensor_block_mm(plan, x, y, &local);
                for (std::size_t r = 0; r < block && r0 + r < a.rows(); ++r)
                    for (std::size_t c = 0; c < block && c0 + c < b.cols(); ++c)
                        out(r0 + r, c0 + c) = f.add(out(r0 + r, c0 + c), z(r, c));
            }
    if (ops != nullptr) ops->multiplications += local.multiplications;
    return out;
}

}  // namespace accthr
