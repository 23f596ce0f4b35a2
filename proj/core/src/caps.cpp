#include "accthr/caps.hpp"

#include "accthr/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

namespace accthr {

namespace {

template <typename T>
void override_from(const char* name, T& field) {
    const char* raw = std::getenv(name);
    if (raw == nullptr) return;
    const std::string_view text(raw);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value <= 0)
        throw InvalidInput(std::string(name) + " must be a positive integer");
    field = value;
}

}  // namespace

Caps Caps::from_environment() {
    Caps caps;
    override_from("ACCTHR_ORACLE_N", caps.oracle_inputs);
    override_from("ACCTHR_RANK_CAP", caps.rank);
    override_from("ACCTHR_MONOMIAL_CAP", caps.monomials);
    override_from("ACCTHR_WEIGHT_BITS", caps.weight_bits);
    override_from("ACCTHR_COPY_BITS", caps.copy_bits);
    return caps;
}

}  // namespace accthr
