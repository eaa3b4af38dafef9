#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

// Deterministic sampling primitives. Everything here is fixed bit-for-bit:
// std::mt19937_64 is fully specified by the standard, and the distribution
// transforms are hand-rolled because the std:: distributions are
// implementation-defined and would break byte-identical outputs across
// standard libraries.

namespace qim::rng {

inline std::uint64_t splitmix64_step(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Splittable-substream contract: derive(seed, i) gives an independent stream
// seed for work item i (mode index, noise layer, run number, ...).
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    splitmix64_step(s);
    return splitmix64_step(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64{seed};
}

// Uniform on the open interval (0,1): 53-bit mantissa, offset half an ulp so
// log() is always finite.
inline double uniform01(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller with a cached spare, drawing pairs of uniform01 values.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01(eng_);
        const double u2 = uniform01(eng_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Poisson counts by accumulating exponential inter-arrival times
// (log form of Knuth's product method; immune to exp(-lambda) underflow).
// O(lambda) uniforms per draw, fine at the photon numbers used here.
inline std::uint64_t poisson(std::mt19937_64& eng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    std::uint64_t count = 0;
    double sum = 0.0;
    for (;;) {
        sum += -std::log(uniform01(eng));
        if (sum >= mean) break;
        ++count;
    }
    return count;
}

} // namespace qim::rng
