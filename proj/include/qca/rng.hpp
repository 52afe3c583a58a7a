#pragma once

#include <cstdint>
#include <random>

namespace qca {

// Seeded RNG with hand-rolled distributions. std::uniform_real_distribution
// is implementation-defined, so reproducible runs derive doubles directly
// from the mt19937_64 stream: 53 mantissa bits -> uniform in [0, 1).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Modulo bias is < n/2^64, irrelevant for the
    // small n used here; determinism is what matters.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  private:
    std::mt19937_64 gen_;
};

} // namespace qca
