#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pwb/error.hpp"
#include "pwb/random.hpp"

namespace pwb {

struct number_moments {
  double mean = 0.0, variance = 0.0;
};

enum class light_class { sub_poissonian, poissonian, super_poissonian };

inline std::string to_string(light_class c) {
  switch (c) {
    case light_class::sub_poissonian: return "sub-poissonian";
    case light_class::poissonian: return "poissonian";
    case light_class::super_poissonian: return "super-poissonian";
  }
  return "?";
}

inline double g2_from_moments(const number_moments& m) {
  if (!(m.mean > 0.0)) throw error(errc::zero_mean, "g2 needs a positive mean photon number");
  return 1.0 + (m.variance - m.mean) / (m.mean * m.mean);
}

inline light_class classify(double g2) {
  if (g2 < 1.0) return light_class::sub_poissonian;
  if (g2 > 1.0) return light_class::super_poissonian;
  return light_class::poissonian;
}

inline number_moments fock_moments(int n) { return {static_cast<double>(n), 0.0}; }
inline number_moments coherent_moments(double mean) { return {mean, mean}; }

inline number_moments thermal_moments(double beta_hbar_omega) {
  if (!(beta_hbar_omega > 0.0)) throw error(errc::domain_error, "beta*hbar*omega must be positive");
  const double n = 1.0 / std::expm1(beta_hbar_omega);
  return {n, n * n + n};
}

struct tmsv_statistics {
  number_moments mode;
  double difference_variance = 0.0;
  double correlation = 0.0;
};

inline tmsv_statistics tmsv_moments(double r) {
  if (!(r >= 0.0)) throw error(errc::domain_error, "squeezing parameter must be non-negative");
  const double s = std::sinh(r), s2 = std::sinh(2.0 * r);
  tmsv_statistics t;
  t.mode = {s * s, 0.25 * s2 * s2};
  t.difference_variance = 0.0;
  t.correlation = r > 0.0 ? 1.0 : 0.0;
  return t;
}

struct count_record {
  std::vector<double> arrival_times;
};

inline count_record simulate_poisson(double rate, double horizon, std::uint64_t seed) {
  if (!(rate > 0.0) || !(horizon > 0.0)) throw error(errc::domain_error, "rate and horizon must be positive");
  counter_rng rng(seed);
  count_record rec;
  double t = rng.exponential(rate);
  while (t < horizon) {
    rec.arrival_times.push_back(t);
    t += rng.exponential(rate);
  }
  return rec;
}

// Number of events in [0, horizon) without materialising arrival times.
inline std::size_t poisson_count(double rate, double horizon, std::uint64_t seed) {
  counter_rng rng(seed);
  std::size_t k = 0;
  double t = rng.exponential(rate);
  while (t < horizon) {
    ++k;
    t += rng.exponential(rate);
  }
  return k;
}

struct branch_result {
  count_record kept, dropped;
};

inline branch_result branch(const count_record& rec, double keep_probability, std::uint64_t seed) {
  if (!(keep_probability >= 0.0 && keep_probability <= 1.0))
    throw error(errc::domain_error, "keep probability must lie in [0, 1]");
  counter_rng rng(seed);
  branch_result out;
  for (double t : rec.arrival_times) (rng.bernoulli(keep_probability) ? out.kept : out.dropped).arrival_times.push_back(t);
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw error(errc::domain_error, "pearson needs equal lengths >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw error(errc::zero_variance, "pearson needs nonzero variances");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct sample_moments {
  double mean, variance;
};

inline sample_moments counts_moments(std::span<const double> counts) {
  double m = 0;
  for (double c : counts) m += c;
  m /= static_cast<double>(counts.size());
  double v = 0;
  for (double c : counts) v += (c - m) * (c - m);
  return {m, v / static_cast<double>(counts.size() - 1)};
}

}  // namespace pwb
