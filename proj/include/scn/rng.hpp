#pragma once

#include <cstdint>

namespace scn {

// SplitMix64. Used everywhere a draw sequence must be a pure function of its
// seed, independent of evaluation order or thread count.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform on [0,1)
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // uniform on [-half_width, half_width]
    double next_symmetric(double half_width) {
        return half_width * (2.0 * next_double() - 1.0);
    }

  private:
    std::uint64_t state_;
};

// Derives a child seed from (seed, key); injective in key for a fixed seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    SplitMix64 g(seed ^ (key * 0x9E3779B97F4A7C15ULL));
    return g.next();
}

}  // namespace scn
