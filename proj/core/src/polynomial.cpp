#include "accthr/polynomial.hpp"

#include "accthr/errors.hpp"

#include <algorithm>
#include <bit>

namespace accthr {

namespace {

// Sorts and cancels equal pairs.
void canonicalize(std::vector<std::uint64_t>& m) {
    std::sort(m.begin(), m.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        if ((j - i) % 2 == 1) m[out++] = m[i];
        i = j;
    }
    m.resize(out);
}

}  // namespace

F2Polynomial F2Polynomial::constant(bool one) {
    F2Polynomial p;
    if (one) p.monomials_.push_back(0);
    return p;
}

F2Polynomial F2Polynomial::variable(std::size_t v) {
    if (v >= kMaxVariables) throw CapExceeded("F2 polynomials support at most 64 variables");
    F2Polynomial p;
    p.monomials_.push_back(std::uint64_t{1} << v);
    return p;
}

F2Polynomial F2Polynomial::from_monomials(std::vector<std::uint64_t> monomials) {
    F2Polynomial p;
    canonicalize(monomials);
    p.monomials_ = std::move(monomials);
    return p;
}

int F2Polynomial::degree() const {
    int d = -1;
    for (const auto m : monomials_) d = std::max(d, std::popcount(m));
    return d;
}

bool F2Polynomial::eval(std::uint64_t assignment) const {
    bool v = false;
    for (const auto m : monomials_)
        if ((m & ~assignment) == 0) v = !v;
    return v;
}

F2Polynomial& F2Polynomial::operator+=(const F2Polynomial& o) {
    std::vector<std::uint64_t> out;
    out.reserve(monomials_.size() + o.monomials_.size());
    std::set_symmetric_difference(monomials_.begin(), monomials_.end(), o.monomials_.begin(), o.monomials_.end(),
                                  std::back_inserter(out));
    monomials_ = std::move(out);
    return *this;
}

F2Polynomial& F2Polynomial::operator+=(bool one) {
    if (one) *this += constant(true);
    return *this;
}

F2Polynomial F2Polynomial::times(const F2Polynomial& o, std::uint64_t cap) const {
    std::vector<std::uint64_t> out;
    out.reserve(monomials_.size() * o.monomials_.size());
    if (static_cast<double>(monomials_.size()) * static_cast<double>(o.monomials_.size()) > 4.0 * 1024 * 1024 * 64)
        throw CapExceeded("polynomial product too large");
    for (const auto a : monomials_)
        for (const auto b : o.monomials_) out.push_back(a | b);
    canonicalize(out);
    if (out.size() > cap) throw CapExceeded("monomial cap exceeded (" + std::to_string(out.size()) + ")");
    F2Polynomial p;
    p.monomials_ = std::move(out);
    return p;
}

std::string F2Polynomial::to_string() const {
    if (monomials_.empty()) return "0";
    std::string s;
    for (const auto m : monomials_) {
        if (!s.empty()) s += " + ";
        if (m == 0) {
            s += "1";
            continue;
        }
        bool first = true;
        for (std::size_t v = 0; v < kMaxVariables; ++v) {
            if (((m >> v) & 1U) == 0) continue;
            if (!first) s += "*";
            s += "z" + std::to_string(v + 1);
            first = false;
        }
    }
    return s;
}

}  // namespace accthr
