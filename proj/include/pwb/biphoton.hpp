#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "pwb/dispersion.hpp"
#include "pwb/numerics/least_squares.hpp"
#include "pwb/numerics/quadrature.hpp"
#include "pwb/numerics/roots.hpp"
#include "pwb/parallel.hpp"

namespace pwb {

constexpr double c_um_per_fs = 0.299792458;

inline double omega_to_wavelength_um(double omega) { return 2.0 * std::numbers::pi * c_um_per_fs / omega; }
inline double wavelength_um_to_omega(double lambda_um) { return 2.0 * std::numbers::pi * c_um_per_fs / lambda_um; }

// amplitude: tau enters A_p^t exactly as given.
// intensity_std: tau is the reciprocal standard deviation of |A_p^t|^2.
enum class pump_duration_convention { amplitude, intensity_std };

struct pump_spec {
  double center_omega = 0.0;
  double tau_fs = 0.0;
  double width_um = 0.0;
  pump_duration_convention convention = pump_duration_convention::amplitude;

  double amplitude_tau() const {
    return convention == pump_duration_convention::intensity_std ? tau_fs / std::numbers::sqrt2 : tau_fs;
  }
};

struct coupling_spec {
  double signal_width_um = 0.0;
  double idler_width_um = 0.0;
  double signal_offset = 0.0;
  double idler_offset = 0.0;
};

struct jsa_grid_spec {
  int n = 300;
  double range_fraction = 0.02;
  double center_signal = 0.0;
  double center_idler = 0.0;
};

struct biphoton_config {
  polarization pol_pump = polarization::z;
  polarization pol_signal = polarization::z;
  polarization pol_idler = polarization::z;
  int qpm_sign = -1;
  int qpm_order = 1;
  double temperature_k = 298.0;
  int z_order = 64;
};

struct jsa_grid {
  std::vector<double> omega_s, omega_i;
  std::vector<double> probability;  // row-major, index [is * n_i + ii]
  bool normalized = false;

  std::size_t ns() const { return omega_s.size(); }
  std::size_t ni() const { return omega_i.size(); }
  double& at(std::size_t is, std::size_t ii) { return probability[is * ni() + ii]; }
  double at(std::size_t is, std::size_t ii) const { return probability[is * ni() + ii]; }
};

struct gaussian_fit_1d {
  double bias = 0.0, amplitude = 0.0, center = 0.0, fwhm = 0.0;
  double bias_err = 0.0, amplitude_err = 0.0, center_err = 0.0, fwhm_err = 0.0;
  double rss = 0.0;
  int dof = 0;

  double sigma() const { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }
  // Two-sided t-test p-values for (bias, amplitude, center, fwhm).
  std::vector<double> p_values() const {
    std::vector<double> out;
    const double est[] = {bias, amplitude, center, fwhm};
    const double se[] = {bias_err, amplitude_err, center_err, fwhm_err};
    boost::math::students_t dist(std::max(dof, 1));
    for (int k = 0; k < 4; ++k) {
      if (se[k] == 0.0) {
        out.push_back(est[k] == 0.0 ? 1.0 : 0.0);
        continue;
      }
      out.push_back(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(est[k] / se[k]))));
    }
    return out;
  }
};

struct gaussian_fit_2d {
  double center_s = 0.0, center_i = 0.0, sigma_s = 0.0, sigma_i = 0.0, rho = 0.0, scale = 0.0;
  double center_s_err = 0.0, center_i_err = 0.0, sigma_s_err = 0.0, sigma_i_err = 0.0, rho_err = 0.0;
  bool near_singular = false;
};

struct grid_moments {
  double mean_s, mean_i, sd_s, sd_i, rho;
};

inline double pump_temporal_amplitude(double omega, const pump_spec& p) {
  const double tau = p.amplitude_tau();
  const double d = omega - p.center_omega;
  return std::sqrt(tau) / std::pow(std::numbers::pi, 0.25) * std::exp(-tau * tau * d * d / 2.0);
}

enum class tau_convention { eight_ln2, two_sqrt_ln2 };

inline double fwhm_omega_to_tau(double fwhm, tau_convention conv = tau_convention::eight_ln2) {
  if (!(fwhm > 0.0)) throw error(errc::domain_error, "FWHM must be positive");
  if (conv == tau_convention::two_sqrt_ln2) return 2.0 * std::sqrt(std::numbers::ln2) / fwhm;
  return 8.0 * std::numbers::ln2 / fwhm;
}

inline double wave_number(const crystal_spec& c, polarization p, double omega) {
  return index_of(c, p, omega_to_wavelength_um(omega)) * omega / c_um_per_fs;
}

struct transverse {
  double x = 0.0, y = 0.0;
};

inline double phase_mismatch_longitudinal(double omega_s, double omega_i, transverse ks_perp, transverse ki_perp,
                                          const crystal_spec& c, const biphoton_config& cfg, bool paraxial = true) {
  auto kz = [&](double k, transverse t) {
    const double t2 = t.x * t.x + t.y * t.y;
    if (t2 >= k * k) throw error(errc::evanescent_transverse, "transverse wavevector exceeds k");
    return paraxial ? k - t2 / (2.0 * k) : std::sqrt(k * k - t2);
  };
  const double kp = wave_number(c, cfg.pol_pump, omega_s + omega_i);
  const double ks = wave_number(c, cfg.pol_signal, omega_s);
  const double ki = wave_number(c, cfg.pol_idler, omega_i);
  const transverse tp{ks_perp.x + ki_perp.x, ks_perp.y + ki_perp.y};
  return kz(kp, tp) - kz(ks, ks_perp) - kz(ki, ki_perp) +
         cfg.qpm_sign * cfg.qpm_order * grating_wavevector(c, cfg.temperature_k);
}

inline std::vector<double> grid_axis(double center, double z, int n) {
  std::vector<double> a(static_cast<std::size_t>(n));
  const double lo = center * (1.0 - z), hi = center * (1.0 + z);
  for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return a;
}

inline void normalize(jsa_grid& g) {
  double s = 0.0;
  for (double p : g.probability) s += p;
  if (!(s > 0.0) || !std::isfinite(s)) throw error(errc::degenerate_grid, "grid probabilities vanish");
  for (double& p : g.probability) p /= s;
  g.normalized = true;
}

// Spatial overlap after the Gaussian transverse integrals, as a function of
// the z-integration only.
inline std::complex<double> spatial_overlap(double dk0, double kp, double ks, double ki, const pump_spec& pump,
                                            const coupling_spec& cpl, double length_um, int order) {
  using cd = std::complex<double>;
  const double wp2 = pump.width_um * pump.width_um;
  const double ws2 = cpl.signal_width_um * cpl.signal_width_um;
  const double wi2 = cpl.idler_width_um * cpl.idler_width_um;
  auto f = [&](double z) {
    const cd ap(wp2, z / kp), as(ws2, -z / ks), ai(wi2, -z / ki);
    return std::exp(cd(0.0, dk0 * z)) / (ap * as + ap * ai + as * ai);
  };
  const int panels = 1 + static_cast<int>(std::abs(dk0) * length_um / 100.0);
  return numerics::integrate_panels(f, -length_um / 2, length_um / 2, order, panels);
}

inline jsa_grid compute_jsa(const pump_spec& pump, const coupling_spec& cpl, const crystal_spec& c,
                            const jsa_grid_spec& gs, const biphoton_config& cfg = {}) {
  if (!(pump.center_omega > 0 && pump.tau_fs > 0 && pump.width_um > 0))
    throw error(errc::validation, "pump parameters must be positive");
  if (!(cpl.signal_width_um > 0 && cpl.idler_width_um > 0))
    throw error(errc::validation, "coupling widths must be positive");
  if (cpl.signal_offset != 0.0 || cpl.idler_offset != 0.0)
    throw error(errc::validation, "only collinear coupling (zero transverse offsets) is supported");
  if (gs.n < 16 || !(gs.range_fraction > 0 && gs.range_fraction < 0.5) || !(gs.center_signal > 0) ||
      !(gs.center_idler > 0))
    throw error(errc::validation, "invalid grid specification");
  jsa_grid g;
  g.omega_s = grid_axis(gs.center_signal, gs.range_fraction, gs.n);
  g.omega_i = grid_axis(gs.center_idler, gs.range_fraction, gs.n);
  const auto n = static_cast<std::size_t>(gs.n);
  g.probability.assign(n * n, 0.0);
  std::vector<double> ks(n), ki(n);
  for (std::size_t k = 0; k < n; ++k) {
    ks[k] = wave_number(c, cfg.pol_signal, g.omega_s[k]);
    ki[k] = wave_number(c, cfg.pol_idler, g.omega_i[k]);
  }
  const double kg = cfg.qpm_sign * cfg.qpm_order * grating_wavevector(c, cfg.temperature_k);
  parallel_for(n, [&](std::size_t is) {
    for (std::size_t ii = 0; ii < n; ++ii) {
      const double wp = g.omega_s[is] + g.omega_i[ii];
      const double kp = wave_number(c, cfg.pol_pump, wp);
      const double dk0 = kp - ks[is] - ki[ii] + kg;
      const auto theta = spatial_overlap(dk0, kp, ks[is], ki[ii], pump, cpl, c.length_um, cfg.z_order);
      const double a = pump_temporal_amplitude(wp, pump);
      g.probability[is * n + ii] = a * a * std::norm(theta);
    }
  });
  normalize(g);
  return g;
}

inline jsa_grid transpose(const jsa_grid& g) {
  jsa_grid t;
  t.omega_s = g.omega_i;
  t.omega_i = g.omega_s;
  t.normalized = g.normalized;
  t.probability.resize(g.probability.size());
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) t.probability[b * g.ns() + a] = g.at(a, b);
  return t;
}

enum class photon { signal, idler };

struct spectrum {
  std::vector<double> omega, p;
};

inline spectrum marginal(const jsa_grid& g, photon axis) {
  spectrum m;
  if (axis == photon::signal) {
    m.omega = g.omega_s;
    m.p.assign(g.ns(), 0.0);
    for (std::size_t a = 0; a < g.ns(); ++a)
      for (std::size_t b = 0; b < g.ni(); ++b) m.p[a] += g.at(a, b);
  } else {
    m.omega = g.omega_i;
    m.p.assign(g.ni(), 0.0);
    for (std::size_t a = 0; a < g.ns(); ++a)
      for (std::size_t b = 0; b < g.ni(); ++b) m.p[b] += g.at(a, b);
  }
  return m;
}

inline grid_moments moments(const jsa_grid& g) {
  double s = 0, ms = 0, mi = 0;
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) {
      const double p = g.at(a, b);
      s += p;
      ms += p * g.omega_s[a];
      mi += p * g.omega_i[b];
    }
  ms /= s;
  mi /= s;
  double vs = 0, vi = 0, cv = 0;
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) {
      const double p = g.at(a, b) / s, ds = g.omega_s[a] - ms, di = g.omega_i[b] - mi;
      vs += p * ds * ds;
      vi += p * di * di;
      cv += p * ds * di;
    }
  return {ms, mi, std::sqrt(vs), std::sqrt(vi), cv / std::sqrt(vs * vi)};
}

inline gaussian_fit_1d fit_gaussian_1d(const spectrum& sp) {
  const std::size_t n = sp.omega.size();
  if (n < 5 || sp.p.size() != n) throw error(errc::degenerate_fit, "at least 5 samples are required");
  const auto [mn, mx] = std::minmax_element(sp.p.begin(), sp.p.end());
  if (*mx == *mn) throw error(errc::degenerate_fit, "samples are constant");
  const std::size_t peak = static_cast<std::size_t>(mx - sp.p.begin());
  const double half = *mn + 0.5 * (*mx - *mn);
  std::size_t l = peak, r = peak;
  while (l > 0 && sp.p[l] > half) --l;
  while (r + 1 < n && sp.p[r] > half) ++r;
  double w0 = sp.omega[r] - sp.omega[l];
  if (!(w0 > 0)) w0 = (sp.omega.back() - sp.omega.front()) / 4;
  std::vector<numerics::data_point> data(n);
  for (std::size_t k = 0; k < n; ++k) data[k] = {sp.omega[k], sp.p[k], 1.0};
  const double c4 = 4.0 * std::numbers::ln2;
  auto model = [c4](const std::vector<double>& q, double x) {
    const double d = (x - q[2]) / q[3];
    return q[0] + q[1] * std::exp(-c4 * d * d);
  };
  numerics::fit_options opt;
  opt.max_iterations = 500;
  const auto fr = numerics::least_squares_fit(model, data, {*mn, *mx - *mn, sp.omega[peak], w0}, opt);
  gaussian_fit_1d out;
  out.bias = fr.parameters[0];
  out.amplitude = fr.parameters[1];
  out.center = fr.parameters[2];
  out.fwhm = std::abs(fr.parameters[3]);
  out.bias_err = fr.standard_errors[0];
  out.amplitude_err = fr.standard_errors[1];
  out.center_err = fr.standard_errors[2];
  out.fwhm_err = fr.standard_errors[3];
  out.rss = fr.residual_sum_squares;
  out.dof = static_cast<int>(n) - 4;
  if (!(out.fwhm > 0)) throw error(errc::degenerate_fit, "fitted width vanished");
  return out;
}

inline double bivariate_normal(double x, double y, double mx, double my, double sx, double sy, double rho) {
  const double dx = (x - mx) / sx, dy = (y - my) / sy, q = 1.0 - rho * rho;
  return std::exp(-(dx * dx + dy * dy - 2.0 * rho * dx * dy) / (2.0 * q)) /
         (2.0 * std::numbers::pi * sx * sy * std::sqrt(q));
}

inline gaussian_fit_2d fit_gaussian_2d(const jsa_grid& g) {
  if (g.ns() < 3 || g.ni() < 3) throw error(errc::degenerate_fit, "grid too small");
  const auto m = moments(g);
  if (!(m.sd_s > 0 && m.sd_i > 0)) throw error(errc::degenerate_fit, "grid support is degenerate");
  const double cell = (g.omega_s[1] - g.omega_s[0]) * (g.omega_i[1] - g.omega_i[0]);
  double total = 0.0;
  for (double p : g.probability) total += p;
  const double norm = 1.0 / total;
  auto residuals = [&](const std::vector<double>& q) {
    std::vector<double> e(g.probability.size());
    if (!(q[3] > 0 && q[4] > 0 && std::abs(q[5]) < 1.0)) {
      std::fill(e.begin(), e.end(), 1e100);
      return e;
    }
    for (std::size_t a = 0; a < g.ns(); ++a)
      for (std::size_t b = 0; b < g.ni(); ++b)
        e[a * g.ni() + b] =
            q[0] * cell * bivariate_normal(g.omega_s[a], g.omega_i[b], q[1], q[2], q[3], q[4], q[5]) -
            g.at(a, b) * norm;
    return e;
  };
  numerics::fit_options opt;
  opt.max_iterations = 500;
  const double r0 = std::clamp(m.rho, -0.999, 0.999);
  const auto fr = numerics::minimize_residuals(residuals, {1.0, m.mean_s, m.mean_i, m.sd_s, m.sd_i, r0}, opt);
  gaussian_fit_2d out;
  const auto& q = fr.parameters;
  const auto& se = fr.standard_errors;
  out.scale = q[0];
  out.center_s = q[1];
  out.center_i = q[2];
  out.sigma_s = q[3];
  out.sigma_i = q[4];
  out.rho = q[5];
  out.center_s_err = se[1];
  out.center_i_err = se[2];
  out.sigma_s_err = se[3];
  out.sigma_i_err = se[4];
  out.rho_err = se[5];
  out.near_singular = std::abs(out.rho) > 1.0 - 1e-6;
  return out;
}

// Collinear phase-matched signal frequency for the pump centre; the signal
// is searched between degeneracy and omega_p / 1.15.
inline double classical_signal_omega(double omega_pump, const crystal_spec& c, const biphoton_config& cfg) {
  auto f = [&](double ws) { return phase_mismatch_longitudinal(ws, omega_pump - ws, {}, {}, c, cfg); };
  const double lo = omega_pump / 2.0, hi = omega_pump / 1.15;
  const auto brs = numerics::scan_brackets(f, lo, hi, (hi - lo) / 4000.0);
  std::vector<double> roots;
  for (const auto& br : brs) {
    const double w = numerics::find_root(f, br, {1e-14, 0.0, 300});
    if (std::abs(f(w)) < 1e-9) roots.push_back(w);
  }
  if (roots.empty()) throw error(errc::no_root_in_window, "no collinear phase matching for this pump");
  if (roots.size() > 1) throw error(errc::multiple_roots, "several collinear phase-matching solutions");
  return roots.front();
}

// Experimental screen: keep spectra whose Gaussian fit parameters are all
// significant at the given level.
inline bool passes_significance(const gaussian_fit_1d& f, double level = 0.01) {
  const auto pv = f.p_values();
  return pv[1] < level && pv[2] < level && pv[3] < level;
}

// Classical collinear mismatch for a measured (pump, signal) pair; points at or
// above the threshold are dropped from comparisons.
inline bool passes_mismatch_screen(double omega_pump, double omega_signal, const crystal_spec& c,
                                   const biphoton_config& cfg, double threshold = 1e-4) {
  const double dk = phase_mismatch_longitudinal(omega_signal, omega_pump - omega_signal, {}, {}, c, cfg);
  return std::abs(dk) < threshold;
}

}  // namespace pwb
