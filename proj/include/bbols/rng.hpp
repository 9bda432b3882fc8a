#pragma once
#include <cstdint>
#include <cmath>
#include <numbers>

// Deterministic random streams. Every Monte Carlo consumer derives an
// independent stream from (master seed, point index, trial index), so a
// sweep produces identical numbers whether trials run serially or are
// split across threads, and individual trials can be replayed in
// isolation.
//
// The generator is SplitMix64: a 64-bit counter passed through an
// avalanching finalizer. It carries minimal state, is trivially seedable
// from a hash, and is statistically more than adequate for sampling
// matrices and noise. Normal deviates come from Box-Muller rather than
// std::normal_distribution, whose output is implementation defined and
// would break cross-compiler reproducibility of frozen test vectors.

namespace bbols {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent stream for one (point, trial) cell of a sweep.
    static Rng stream(std::uint64_t master, std::uint64_t point,
                      std::uint64_t trial) {
        std::uint64_t s = mix(master + 0x9E3779B97F4A7C15ULL);
        s = mix(s ^ mix(point + 0xBF58476D1CE4E5B9ULL));
        s = mix(s ^ mix(trial + 0x94D049BB133111EBULL));
        return Rng(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, hi).
    double next_uniform(double hi) { return hi * next_unit(); }

    // Standard normal via Box-Muller; generates pairs and caches one.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] keeps the log argument positive.
        double u1 = 1.0 - next_unit();
        double u2 = next_unit();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer in [0, bound) by rejection, so the distribution is
    // exact for any bound.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    // SplitMix64 finalizer, also used to hash seeds together.
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bbols
