#include "accthr/bigint.hpp"

#include <limits>
#include <stdexcept>

namespace accthr {

BigInt parse_bigint(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
    }
    if (pos == text.size()) throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    BigInt value = 0;
    for (; pos < text.size(); ++pos) {
        const char ch = text[pos];
        if (ch < '0' || ch > '9') throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
        value *= 10;
        value += ch - '0';
    }
    return negative ? BigInt(-value) : value;
}

std::string to_string(const BigInt& v) { return v.str(); }

std::size_t bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return boost::multiprecision::msb(abs_value(v)) + 1;
}

std::optional<std::int64_t> to_int64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        return std::nullopt;
    return v.convert_to<std::int64_t>();
}

}  // namespace accthr
