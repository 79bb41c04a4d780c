#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pwb {

// Counter-based generator: output i is the SplitMix64 finalizer applied to
// seed + (i + 1) * golden, so any draw can be addressed directly.
class counter_rng {
public:
  explicit counter_rng(std::uint64_t seed = 0, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
  }
  // Independent stream for repetition k of a seeded experiment.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) { return mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL)); }

  std::uint64_t next_u64() { return at(seed_, counter_++); }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform_open() {
    double u;
    do u = uniform(); while (u == 0.0);
    return u;
  }
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }
  double normal() {
    const double u1 = uniform_open(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  double normal(double mean, double sd) { return mean + sd * normal(); }
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t seed_, counter_;
};

}  // namespace pwb
