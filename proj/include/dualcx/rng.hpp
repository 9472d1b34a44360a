#pragma once

// Small deterministic generator (splitmix64). Seeded runs must replay
// identically across platforms, so nothing from <random> is used.

#include <cstdint>

namespace dualcx {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish value in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    bool chance(unsigned percent) { return below(100) < percent; }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed ^ (0x632be59bd9b4e019ULL * (stream + 1)));
    return rng.next();
}

}  // namespace dualcx
