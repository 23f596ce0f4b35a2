#include "accthr/rng.hpp"

#include <stdexcept>

namespace accthr {

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char ch : text) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng Rng::derive(std::string_view tag, std::uint64_t index) const {
    const std::uint64_t k = mix(mix(key_ ^ fnv1a(tag)) + index * 0xd1b54a32d192ed03ULL);
    return Rng(k, true);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
        const std::uint64_t v = (*this)();
        if (v < limit) return v % bound;
    }
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == max()) return static_cast<std::int64_t>((*this)());
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span + 1));
}

}  // namespace accthr
