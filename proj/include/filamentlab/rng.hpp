#pragma once

#include <cstdint>

namespace flab {

// Counter-based generator: stream index n under seed s is hash(s, n), so any
// draw is reproducible from (seed, counter) alone regardless of call order.
// Mixing function is splitmix64 (Steele et al.), full-period on the counter.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + counter_++ * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1): 53 mantissa bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace flab
