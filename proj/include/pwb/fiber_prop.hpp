#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pwb/biphoton.hpp"

namespace pwb {

struct fiber_spec {
  double gvd_2beta_s2_per_m = 0.0;
  double length_m = 0.0;
};

struct time_stats {
  double tau_s_ns = 0.0, tau_i_ns = 0.0, rho_t = 0.0;
};

struct time_grid {
  std::vector<double> t_s_ns, t_i_ns;
  std::vector<double> probability;  // row-major [is * n_i + ii]
  double captured_fraction = 1.0;

  std::size_t ns() const { return t_s_ns.size(); }
  std::size_t ni() const { return t_i_ns.size(); }
  double at(std::size_t a, std::size_t b) const { return probability[a * ni() + b]; }
};

// Signed 2*beta*D in ns per PHz (1 s^2 * 1 PHz = 1e24 ns/PHz).
inline double signed_dispersion_scale(const fiber_spec& f) { return f.gvd_2beta_s2_per_m * f.length_m * 1e24; }
inline double dispersion_scale(const fiber_spec& f) { return std::abs(signed_dispersion_scale(f)); }

// Dimensionless far-field parameter 2 beta D sigma^2 (sigma in PHz).
inline double far_field_parameter(const fiber_spec& f, double sigma_omega) {
  return dispersion_scale(f) * 1e6 * sigma_omega * sigma_omega;
}

inline time_stats time_stats_from_frequency(const gaussian_fit_2d& fit, const fiber_spec& f) {
  const double s = dispersion_scale(f);
  return {s * fit.sigma_s, s * fit.sigma_i, fit.rho};
}

inline time_stats moments(const time_grid& g) {
  double s = 0, ms = 0, mi = 0;
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) {
      s += g.at(a, b);
      ms += g.at(a, b) * g.t_s_ns[a];
      mi += g.at(a, b) * g.t_i_ns[b];
    }
  ms /= s;
  mi /= s;
  double vs = 0, vi = 0, cv = 0;
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) {
      const double p = g.at(a, b) / s, ds = g.t_s_ns[a] - ms, di = g.t_i_ns[b] - mi;
      vs += p * ds * ds;
      vi += p * di * di;
      cv += p * ds * di;
    }
  return {std::sqrt(vs), std::sqrt(vi), cv / std::sqrt(vs * vi)};
}

namespace detail {
inline double axis_center(const std::vector<double>& w) { return 0.5 * (w.front() + w.back()); }
}  // namespace detail

// Far-field map t = -2 beta D (omega - omega_c); cell masses carry over unchanged.
inline time_grid propagate_stationary(const jsa_grid& g, const fiber_spec& f) {
  const double s = signed_dispersion_scale(f);
  if (s == 0.0) throw error(errc::zero_dispersion, "stationary-phase map needs nonzero dispersion");
  const double cs = detail::axis_center(g.omega_s), ci = detail::axis_center(g.omega_i);
  time_grid t;
  const std::size_t ns = g.ns(), ni = g.ni();
  t.t_s_ns.resize(ns);
  t.t_i_ns.resize(ni);
  t.probability.resize(ns * ni);
  const bool flip = s > 0;
  for (std::size_t a = 0; a < ns; ++a) t.t_s_ns[flip ? ns - 1 - a : a] = -s * (g.omega_s[a] - cs);
  for (std::size_t b = 0; b < ni; ++b) t.t_i_ns[flip ? ni - 1 - b : b] = -s * (g.omega_i[b] - ci);
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ni; ++b)
      t.probability[(flip ? ns - 1 - a : a) * ni + (flip ? ni - 1 - b : b)] = g.at(a, b);
  return t;
}

// Quadratic spectral phase followed by a separable Fourier sum. Amplitude is
// sqrt(probability) with zero intrinsic phase.
inline time_grid propagate_exact(const jsa_grid& g, const fiber_spec& f) {
  using cd = std::complex<double>;
  const double s = signed_dispersion_scale(f);
  const std::size_t ns = g.ns(), ni = g.ni();
  const double cs = detail::axis_center(g.omega_s), ci = detail::axis_center(g.omega_i);
  const double dws = g.omega_s[1] - g.omega_s[0], dwi = g.omega_i[1] - g.omega_i[0];
  // phase = (s/2) * Omega^2 * 1e6 rad with s in ns/PHz and Omega in PHz
  const double kphase = 0.5 * s * 1e6;
  auto max_detuning = [](const std::vector<double>& w, double c) {
    return std::max(std::abs(w.front() - c), std::abs(w.back() - c));
  };
  if (2.0 * std::abs(kphase) * max_detuning(g.omega_s, cs) * dws > std::numbers::pi ||
      2.0 * std::abs(kphase) * max_detuning(g.omega_i, ci) * dwi > std::numbers::pi)
    throw error(errc::grid_too_coarse, "quadratic fiber phase is undersampled by the frequency grid");

  time_grid t;
  t.t_s_ns.resize(ns);
  t.t_i_ns.resize(ni);
  auto time_axis = [&](std::vector<double>& out, const std::vector<double>& w, double c, double dw) {
    const std::size_t n = w.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (s != 0.0)
        out[k] = -s * (w[k] - c);
      else
        out[k] = 2.0 * std::numbers::pi * (static_cast<double>(k) - 0.5 * static_cast<double>(n - 1)) /
                 (static_cast<double>(n) * dw) * 1e-6;
    }
    if (out.front() > out.back()) std::reverse(out.begin(), out.end());
  };
  time_axis(t.t_s_ns, g.omega_s, cs, dws);
  time_axis(t.t_i_ns, g.omega_i, ci, dwi);

  std::vector<cd> psi(ns * ni);
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ni; ++b) {
      const double os = g.omega_s[a] - cs, oi = g.omega_i[b] - ci;
      psi[a * ni + b] = std::sqrt(g.at(a, b)) * std::polar(1.0, -kphase * (os * os + oi * oi));
    }
  // exp(-i Omega t) with t in ns and Omega in PHz carries a factor 1e6.
  std::vector<cd> ei(ni * ni), es(ns * ns);
  for (std::size_t kb = 0; kb < ni; ++kb)
    for (std::size_t b = 0; b < ni; ++b) ei[kb * ni + b] = std::polar(1.0, -(g.omega_i[b] - ci) * t.t_i_ns[kb] * 1e6);
  for (std::size_t ka = 0; ka < ns; ++ka)
    for (std::size_t a = 0; a < ns; ++a) es[ka * ns + a] = std::polar(1.0, -(g.omega_s[a] - cs) * t.t_s_ns[ka] * 1e6);
  std::vector<cd> half(ns * ni);
  parallel_for(ns, [&](std::size_t a) {
    for (std::size_t kb = 0; kb < ni; ++kb) {
      cd acc = 0;
      for (std::size_t b = 0; b < ni; ++b) acc += psi[a * ni + b] * ei[kb * ni + b];
      half[a * ni + kb] = acc;
    }
  });
  t.probability.assign(ns * ni, 0.0);
  parallel_for(ns, [&](std::size_t ka) {
    std::vector<cd> acc(ni);
    for (std::size_t a = 0; a < ns; ++a) {
      const cd w = es[ka * ns + a];
      for (std::size_t kb = 0; kb < ni; ++kb) acc[kb] += half[a * ni + kb] * w;
    }
    for (std::size_t kb = 0; kb < ni; ++kb) t.probability[ka * ni + kb] = std::norm(acc[kb]);
  });
  // Parseval: sum |psi(t)|^2 dt_s dt_i dw_s dw_i / (2 pi)^2 equals sum |psi(w)|^2.
  const double dts = (t.t_s_ns.back() - t.t_s_ns.front()) / static_cast<double>(ns - 1) * 1e6;
  const double dti = (t.t_i_ns.back() - t.t_i_ns.front()) / static_cast<double>(ni - 1) * 1e6;
  double sum = 0.0, mass = 0.0;
  for (double p : t.probability) sum += p;
  for (double p : g.probability) mass += p;
  t.captured_fraction = sum * dts * dti * dws * dwi / (4.0 * std::numbers::pi * std::numbers::pi) / mass;
  for (double& p : t.probability) p /= sum;
  return t;
}

}  // namespace pwb
