#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "pwb/dispersion.hpp"
#include "pwb/numerics/roots.hpp"

namespace pwb {

struct phase_match_query {
  double pump_wavelength_nm = 396.0;
  double pump_theta = 0.0, pump_phi = 0.0;
  double signal_theta = 0.0, signal_phi = 0.0;
  double temperature_k = 298.0;
  polarization pol_pump = polarization::z;
  polarization pol_signal = polarization::z;
  polarization pol_idler = polarization::z;
  int qpm_order = 1;
  int qpm_sign = -1;
};

struct phase_match_solution {
  double signal_wavelength_nm = 0.0;
  double idler_wavelength_nm = 0.0;
  double idler_theta = 0.0;
  double idler_phi = 0.0;
  double mismatch = 0.0;
};

struct mismatch_vector {
  double x = 0.0, y = 0.0, z = 0.0;
  double magnitude = 0.0;
  double idler_theta = 0.0, idler_phi = 0.0;
};

struct wavelength_window {
  double lo_nm, hi_nm;
};

inline double idler_wavelength(double pump_nm, double signal_nm) {
  if (!(pump_nm > 0.0) || !(signal_nm > pump_nm))
    throw error(errc::domain_error, "signal wavelength must exceed the pump wavelength");
  return 1.0 / (1.0 / pump_nm - 1.0 / signal_nm);
}

inline double external_to_internal_angle(double theta_external, double n) {
  return std::asin(std::sin(theta_external) / n);
}

namespace detail {
struct vec3 {
  double x, y, z;
};
inline vec3 direction(double theta, double phi) {
  return {std::cos(theta), std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi)};
}
}  // namespace detail

inline mismatch_vector mismatch(const phase_match_query& q, double signal_nm, const crystal_spec& c) {
  using std::numbers::pi;
  const double lp = q.pump_wavelength_nm * 1e-3, ls = signal_nm * 1e-3;
  const double li = idler_wavelength(q.pump_wavelength_nm, signal_nm) * 1e-3;
  const double kp = wavevector_magnitude(index_of(c, q.pol_pump, lp), lp);
  const double ks = wavevector_magnitude(index_of(c, q.pol_signal, ls), ls);
  const double ki = wavevector_magnitude(index_of(c, q.pol_idler, li), li);
  const auto dp = detail::direction(q.pump_theta, q.pump_phi);
  const auto ds = detail::direction(q.signal_theta, q.signal_phi);
  const double ty = kp * dp.y - ks * ds.y, tz = kp * dp.z - ks * ds.z;
  const double t = std::hypot(ty, tz);
  mismatch_vector m;
  double kix, kiy, kiz;
  if (t <= ki) {
    kiy = ty;
    kiz = tz;
    kix = std::sqrt(ki * ki - t * t);
    m.idler_theta = std::asin(t / ki);
  } else {
    kiy = ki * ty / t;
    kiz = ki * tz / t;
    kix = 0.0;
    m.idler_theta = pi / 2;
  }
  m.idler_phi = t > 0.0 ? std::atan2(tz, ty) : q.signal_phi + pi;
  const double kg = q.qpm_sign * q.qpm_order * grating_wavevector(c, q.temperature_k);
  m.x = kp * dp.x - ks * ds.x - kix + kg;
  m.y = ty - kiy;
  m.z = tz - kiz;
  m.magnitude = std::sqrt(m.x * m.x + m.y * m.y + m.z * m.z);
  return m;
}

inline double idler_angle(const phase_match_query& q, double signal_nm, const crystal_spec& c,
                          std::optional<double> mismatch_tolerance = std::nullopt) {
  if (mismatch_tolerance) {
    const double dk = mismatch(q, signal_nm, c).magnitude;
    if (dk > *mismatch_tolerance)
      throw error(errc::domain_error, "idler angle requested away from phase matching");
  }
  const double lp = q.pump_wavelength_nm * 1e-3, ls = signal_nm * 1e-3;
  const double np = index_of(c, q.pol_pump, lp), ns = index_of(c, q.pol_signal, ls);
  const double grating = c.poling_period_um > 0.0 ? q.qpm_sign * q.qpm_order * ls / poling_period(c, q.temperature_k) : 0.0;
  const double st = std::sin(q.signal_theta);
  const double along = np * ls / lp - ns * std::cos(q.signal_theta) + grating;
  const double den = std::sqrt(ns * ns * st * st + along * along);
  if (den == 0.0) throw error(errc::arcsine_domain, "idler angle undefined");
  const double arg = ns * st / den;
  if (std::abs(arg) > 1.0) throw error(errc::arcsine_domain, "arcsine argument exceeds 1");
  return std::asin(arg);
}

inline phase_match_solution make_solution(const phase_match_query& q, double signal_nm, const crystal_spec& c) {
  const auto m = mismatch(q, signal_nm, c);
  return {signal_nm, idler_wavelength(q.pump_wavelength_nm, signal_nm), m.idler_theta, m.idler_phi, m.magnitude};
}

constexpr double phase_match_residual_limit = 1e-10;

inline std::vector<phase_match_solution> find_signal_roots(const phase_match_query& q, const crystal_spec& c,
                                                           wavelength_window w, double scan_step_nm = 0.1) {
  if (!(w.lo_nm < w.hi_nm)) throw error(errc::domain_error, "empty search window");
  const double lo = std::max(w.lo_nm, q.pump_wavelength_nm * (1.0 + 1e-9));
  auto f = [&](double s) { return mismatch(q, s, c).x; };
  std::vector<phase_match_solution> out;
  auto brackets = numerics::scan_brackets(f, lo, w.hi_nm, scan_step_nm);
  if (brackets.size() > 8) {
    // A mismatch that vanishes identically (equal constant indices, no grating)
    // matches at every wavelength; report the frequency-degenerate point.
    bool flat = true;
    for (const auto& br : brackets) flat = flat && std::abs(br.f_lo) < 1e-12 && std::abs(br.f_hi) < 1e-12;
    const double deg = 2.0 * q.pump_wavelength_nm;
    if (flat && deg >= lo && deg <= w.hi_nm) return {make_solution(q, deg, c)};
  }
  for (const auto& br : brackets) {
    const double s = numerics::find_root(f, br, {1e-11, 1e-14, 300});
    auto sol = make_solution(q, s, c);
    if (sol.mismatch < phase_match_residual_limit) out.push_back(sol);
  }
  return out;
}

inline phase_match_solution solve_signal_wavelength(const phase_match_query& q, const crystal_spec& c,
                                                    wavelength_window w, double scan_step_nm = 0.1) {
  auto roots = find_signal_roots(q, c, w, scan_step_nm);
  if (roots.empty()) throw error(errc::no_root_in_window, "no phase-matched signal wavelength in window");
  if (roots.size() > 1) throw error(errc::multiple_roots, std::to_string(roots.size()) + " phase-matched roots in window");
  return roots.front();
}

inline wavelength_window default_signal_window(double pump_nm) { return {pump_nm * 1.15, pump_nm * 2.0}; }

inline std::vector<phase_match_solution> sweep(phase_match_query q, const crystal_spec& c,
                                               const std::vector<double>& pumps_nm,
                                               std::optional<wavelength_window> w = std::nullopt) {
  std::vector<phase_match_solution> out;
  out.reserve(pumps_nm.size());
  for (double lp : pumps_nm) {
    q.pump_wavelength_nm = lp;
    out.push_back(solve_signal_wavelength(q, c, w.value_or(default_signal_window(lp))));
  }
  return out;
}

}  // namespace pwb
