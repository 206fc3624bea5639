#pragma once

#include <cmath>
#include <cstdint>

namespace fogmatch {

// SplitMix64 finalizer. Statistically strong enough for Monte Carlo work and
// cheap enough to rehash per entry.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based generator keyed by (seed, stream, substream, counter).
// Any tuple can be opened independently, so trials are reproducible and
// order-independent regardless of the execution schedule.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t s0 = 0,
                        std::uint64_t s1 = 0, std::uint64_t s2 = 0) {
        state_ = mix64(seed ^ 0x632be59bd9b4e019ull);
        state_ = mix64(state_ ^ mix64(s0 ^ 0x1cull));
        state_ = mix64(state_ ^ mix64(s1 ^ 0x2dull));
        state_ = mix64(state_ ^ mix64(s2 ^ 0x3eull));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log argument.
    double uniform_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard exponential via inverse transform.
    double exponential() { return -std::log(uniform_open()); }

    // One draw in {0,...,n-1}, unbiased via rejection on the top range.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

private:
    std::uint64_t state_;
};

// Single hashed uniform in [0,1) for a keyed entry, no object needed.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t s0,
                            std::uint64_t s1, std::uint64_t s2) {
    CounterRng g(seed, s0, s1, s2);
    return g.uniform();
}

} // namespace fogmatch
