#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace accthr {

// Multilinear polynomial over F2 in at most 64 variables. A monomial is a bit mask of
// its variables (0 is the constant 1); monomials are kept sorted and distinct, so the
// representation is canonical.
class F2Polynomial {
public:
    static constexpr std::size_t kMaxVariables = 64;

    F2Polynomial() = default;  // zero
    static F2Polynomial constant(bool one);
    static F2Polynomial variable(std::size_t v);
    static F2Polynomial from_monomials(std::vector<std::uint64_t> monomials);

    [[nodiscard]] const std::vector<std::uint64_t>& monomials() const { return monomials_; }
    [[nodiscard]] bool is_zero() const { return monomials_.empty(); }
    [[nodiscard]] int degree() const;

    // Bit v of `assignment` is variable v.
    [[nodiscard]] bool eval(std::uint64_t assignment) const;

    F2Polynomial& operator+=(const F2Polynomial& o);
    F2Polynomial& operator+=(bool one);
    friend F2Polynomial operator+(F2Polynomial a, const F2Polynomial& b) { return a += b; }

    // Product with pair cancellation; throws CapExceeded when the result would hold more
    // than `cap` monomials.
    [[nodiscard]] F2Polynomial times(const F2Polynomial& o, std::uint64_t cap) const;

    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const F2Polynomial&, const F2Polynomial&) = default;

private:
    std::vector<std::uint64_t> monomials_;
};

}  // namespace accthr
