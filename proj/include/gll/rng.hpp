#pragma once

#include <cstdint>

namespace gll {

// SplitMix64. Used for all seeded randomness so that reports are
// byte-reproducible across compilers (std::uniform_real_distribution is
// implementation-defined).
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0, n)
    uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    SplitMix64 s(a ^ (b * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
    return s.next_u64();
}

} // namespace gll
