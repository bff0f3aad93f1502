#pragma once

#include <cstdint>

namespace drr {

// SplitMix64 stream. Chosen over std::mt19937_64 + std::uniform_int_distribution
// because the distribution adapters are not bit-reproducible across standard
// library implementations; this generator is, and it splits cheaply into
// independent child streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % n;
    }

    bool coin() { return (next() >> 63) != 0; }

    // Independent child stream; advances this stream by one draw.
    Rng split() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }

private:
    std::uint64_t state_;
};

}  // namespace drr
