#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace accthr {

// Counter-based generator. Output i of the stream keyed by (seed, tag, index) is
// splitmix64(key + i * golden_gamma); streams with different keys are independent
// for all practical purposes and every stream is reproducible from its key alone.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : key_(mix(seed)) {}

    // Child stream keyed by this stream's key, a purpose tag and an index.
    [[nodiscard]] Rng derive(std::string_view tag, std::uint64_t index = 0) const;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + golden_gamma * ++counter_); }

    bool bit() { return ((*this)() >> 63) != 0; }

    // Uniform in [0, bound), bound > 0. Rejection sampling keeps it exact.
    std::uint64_t below(std::uint64_t bound);

    // Uniform in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);

    [[nodiscard]] std::uint64_t key() const { return key_; }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

    Rng(std::uint64_t key, bool) : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace accthr
