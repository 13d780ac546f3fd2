#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dtmec {

// splitmix64; used to derive independent substreams from one master seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Child seed for a named substream (world layout, episode k, agent, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return mix_seed(master ^ mix_seed(tag));
}

// Seeded random stream. Normal draws use Box-Muller explicitly so the
// consumed-value sequence is fixed by the seed alone.
class RngStream {
  public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    double uniform01() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    double normal(double mean, double stddev) {
        if (stddev == 0.0) {
            return mean;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * M_PI * u2);
    }

    // Uniform integer in [0, n).
    std::size_t below(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace dtmec
