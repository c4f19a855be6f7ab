#pragma once

#include <cstdint>

namespace codedsync {

/// SplitMix64: a tiny, seedable, platform-independent generator. Per-trial
/// streams are derived from (seed, trial index) so trials can run in any
/// order, or in parallel, with unchanged output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ull * (trial + 1)));
        mix.next();
        return mix;
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Unbiased uniform draw from [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace codedsync
