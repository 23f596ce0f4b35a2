#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace accthr {

using BigInt = boost::multiprecision::cpp_int;

// Throws std::invalid_argument on anything but an optional sign followed by digits.
BigInt parse_bigint(std::string_view text);

std::string to_string(const BigInt& v);

// Number of bits in |v|; zero has bit length 0.
std::size_t bit_length(const BigInt& v);

std::optional<std::int64_t> to_int64(const BigInt& v);

inline BigInt abs_value(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

}  // namespace accthr
