#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "pwb/error.hpp"

namespace pwb {

struct sellmeier_set {
  double a0 = 1.0, a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;

  std::array<double, 5> coefficients() const { return {a0, a1, a2, a3, a4}; }
  static sellmeier_set from(const std::array<double, 5>& c) { return {c[0], c[1], c[2], c[3], c[4]}; }
};

enum class polarization { fast, slow, x, y, z };

struct crystal_spec {
  std::string name;
  std::optional<sellmeier_set> x, y, z;
  double length_um = 10000.0;
  double poling_period_um = 0.0;
  double t0_kelvin = 298.0;
  double alpha_per_kelvin = 0.0;
};

constexpr double pole_guard_um2 = 1e-9;

inline double refractive_index(const sellmeier_set& s, double lambda_um) {
  if (!(lambda_um > 0.0)) throw error(errc::domain_error, "wavelength must be positive");
  const double l2 = lambda_um * lambda_um;
  const double d2 = l2 - s.a2, d4 = l2 - s.a4;
  if ((s.a1 != 0.0 && std::abs(d2) < pole_guard_um2) || (s.a3 != 0.0 && std::abs(d4) < pole_guard_um2))
    throw error(errc::pole_proximity, "wavelength " + std::to_string(lambda_um) + " um sits on a Sellmeier pole");
  const double rad = s.a0 + (s.a1 != 0.0 ? s.a1 / d2 : 0.0) + (s.a3 != 0.0 ? s.a3 / d4 : 0.0);
  if (!(rad > 0.0))
    throw error(errc::negative_radicand, "Sellmeier radicand not positive at " + std::to_string(lambda_um) + " um");
  return std::sqrt(rad);
}

inline double poling_period(const crystal_spec& c, double temperature_k) {
  if (!(c.poling_period_um > 0.0)) throw error(errc::unpoled, "crystal has no poling period");
  return c.poling_period_um * (1.0 + c.alpha_per_kelvin * (temperature_k - c.t0_kelvin));
}

// Grating wavevector 2 pi / Lambda(T); zero for an unpoled crystal.
inline double grating_wavevector(const crystal_spec& c, double temperature_k) {
  if (!(c.poling_period_um > 0.0)) return 0.0;
  return 2.0 * std::numbers::pi / poling_period(c, temperature_k);
}

inline double wavevector_magnitude(double n, double lambda_um) {
  return 2.0 * std::numbers::pi * n / lambda_um;
}

// Propagation is along x; fast/slow pick between the transverse y and z axes.
inline const sellmeier_set& axis_set(const crystal_spec& c, polarization p, double lambda_um) {
  auto need = [&](const std::optional<sellmeier_set>& s, const char* axis) -> const sellmeier_set& {
    if (!s) throw error(errc::validation, std::string("crystal '") + c.name + "' has no " + axis + "-axis coefficients");
    return *s;
  };
  switch (p) {
    case polarization::x: return need(c.x, "x");
    case polarization::y: return need(c.y, "y");
    case polarization::z: return need(c.z, "z");
    case polarization::fast:
    case polarization::slow: {
      if (!c.y || !c.z) return need(c.z, "z");
      const double ny = refractive_index(*c.y, lambda_um), nz = refractive_index(*c.z, lambda_um);
      const bool z_slow = nz >= ny;
      if (p == polarization::slow) return z_slow ? *c.z : *c.y;
      return z_slow ? *c.y : *c.z;
    }
  }
  return need(c.z, "z");
}

inline double index_of(const crystal_spec& c, polarization p, double lambda_um) {
  return refractive_index(axis_set(c, p, lambda_um), lambda_um);
}

inline std::string to_string(polarization p) {
  switch (p) {
    case polarization::fast: return "fast";
    case polarization::slow: return "slow";
    case polarization::x: return "x";
    case polarization::y: return "y";
    case polarization::z: return "z";
  }
  return "z";
}

inline polarization parse_polarization(const std::string& s) {
  if (s == "fast") return polarization::fast;
  if (s == "slow") return polarization::slow;
  if (s == "x") return polarization::x;
  if (s == "y") return polarization::y;
  if (s == "z") return polarization::z;
  throw error(errc::validation, "unknown polarization '" + s + "'");
}

}  // namespace pwb
