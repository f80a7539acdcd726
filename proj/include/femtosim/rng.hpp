#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace femtosim {

// Deterministic RNG wrapper. All distributions are implemented on top of the
// raw 64-bit stream so that results are identical across standard libraries
// and across runs; std::<distribution> types are implementation-defined and
// would break the byte-identical-output contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(mul_shift(gen_(), span));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller (no cached spare, for reproducibility).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Rayleigh by inverse CDF; sigma is the scale parameter (mode), not the mean.
  double rayleigh(double sigma) {
    double u = uniform01();
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    return sigma * std::sqrt(-2.0 * std::log(1.0 - u));
  }

 private:
  static std::uint64_t mul_shift(std::uint64_t x, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(n)) >> 64);
  }

  std::mt19937_64 gen_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-derived child seed: stable under any execution order, so adding
// workers never reorders randomness.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return child_seed(child_seed(master, a), b);
}

inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                                std::uint64_t c) {
  return child_seed(child_seed(master, a, b), c);
}

} // namespace femtosim
