#pragma once

#include <cstdint>
#include <random>

namespace pglab {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of substream t under a master seed: mix64(master ^ mix64(t)).
/// Trial t sees the same stream whether trials run serially or in parallel.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t t) {
    return mix64(master ^ mix64(t));
}

/// Random stream handle. mt19937_64 output is fully specified by the
/// standard; bounded draws use rejection so results do not depend on the
/// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, bound), bound > 0.
    std::uint32_t below(std::uint32_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % b + 1) % b;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x > limit);
        return std::uint32_t(x % b);
    }

    /// Uniform on [0, 1).
    double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace pglab
