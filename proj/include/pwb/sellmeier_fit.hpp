#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pwb/numerics/least_squares.hpp"
#include "pwb/parallel.hpp"
#include "pwb/phasematch.hpp"
#include "pwb/random.hpp"

namespace pwb {

struct measurement_point {
  double pump_nm, signal_nm, sigma_nm;
};

struct sellmeier_fit_setup {
  crystal_spec crystal;
  phase_match_query query;
  polarization fitted_axis = polarization::z;
  std::vector<int> free_coefficients{0, 1, 2};
  std::optional<wavelength_window> window;
  bool sigma_weighting = false;
  numerics::fit_options options;
};

struct sellmeier_fit_report {
  std::vector<double> fitted;
  std::vector<double> uncertainties;
  double rss = 0.0;
  double rss_start = 0.0;
  double average_error = 0.0;
  bool converged = false;
  int iterations = 0;
  std::size_t points = 0;
  std::size_t masked_points = 0;
};

namespace detail {

inline sellmeier_set& fitted_set(crystal_spec& c, polarization axis) {
  std::optional<sellmeier_set>* slot = axis == polarization::x ? &c.x : axis == polarization::y ? &c.y : &c.z;
  if (!*slot) throw error(errc::validation, "fitted axis has no starting coefficients");
  return **slot;
}

inline crystal_spec with_coefficients(const sellmeier_fit_setup& s, const std::vector<double>& coeffs) {
  if (coeffs.size() != s.free_coefficients.size())
    throw error(errc::domain_error, "coefficient count does not match the free set");
  crystal_spec c = s.crystal;
  auto& set = fitted_set(c, s.fitted_axis);
  auto a = set.coefficients();
  for (std::size_t k = 0; k < coeffs.size(); ++k) a[static_cast<std::size_t>(s.free_coefficients[k])] = coeffs[k];
  set = sellmeier_set::from(a);
  return c;
}

}  // namespace detail

inline double model_signal_wavelength(double pump_nm, const std::vector<double>& coeffs,
                                      const sellmeier_fit_setup& s, std::optional<double> hint_nm = std::nullopt) {
  const crystal_spec c = detail::with_coefficients(s, coeffs);
  phase_match_query q = s.query;
  q.pump_wavelength_nm = pump_nm;
  const auto win = s.window.value_or(default_signal_window(pump_nm));
  if (hint_nm) {
    const double half = 2.0 + 0.05 * *hint_nm;
    const wavelength_window local{std::max(win.lo_nm, *hint_nm - half), std::min(win.hi_nm, *hint_nm + half)};
    if (local.lo_nm < local.hi_nm) {
      auto roots = find_signal_roots(q, c, local);
      if (roots.size() == 1) return roots.front().signal_wavelength_nm;
    }
  }
  auto roots = find_signal_roots(q, c, win);
  if (roots.empty()) throw error(errc::no_root_in_window, "no phase-matched signal for pump " + std::to_string(pump_nm) + " nm");
  if (roots.size() == 1 || !hint_nm) {
    if (roots.size() > 1) throw error(errc::multiple_roots, "several phase-matched signals for pump " + std::to_string(pump_nm) + " nm");
    return roots.front().signal_wavelength_nm;
  }
  return std::min_element(roots.begin(), roots.end(), [&](const auto& a, const auto& b) {
           return std::abs(a.signal_wavelength_nm - *hint_nm) < std::abs(b.signal_wavelength_nm - *hint_nm);
         })->signal_wavelength_nm;
}

inline std::vector<double> start_coefficients(const sellmeier_fit_setup& s) {
  crystal_spec c = s.crystal;
  const auto a = detail::fitted_set(c, s.fitted_axis).coefficients();
  std::vector<double> out;
  for (int k : s.free_coefficients) out.push_back(a[static_cast<std::size_t>(k)]);
  return out;
}

inline double rss(const std::vector<measurement_point>& pts, const std::vector<double>& coeffs,
                  const sellmeier_fit_setup& s) {
  double sum = 0.0;
  for (const auto& p : pts) {
    const double d = p.signal_nm - model_signal_wavelength(p.pump_nm, coeffs, s, p.signal_nm);
    sum += d * d;
  }
  return sum;
}

inline sellmeier_fit_report fit(const std::vector<measurement_point>& pts, const std::vector<double>& start,
                                const sellmeier_fit_setup& s) {
  if (pts.size() < std::max<std::size_t>(4, start.size()))
    throw error(errc::insufficient_data, "at least 4 measurement points are required");
  for (const auto& p : pts)
    if (!(p.pump_nm > 0 && p.signal_nm > 0 && p.sigma_nm > 0))
      throw error(errc::validation, "measurement points must be positive");
  auto residuals_weighted = [&](const std::vector<double>& c, bool weighted) {
    std::vector<double> e(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const auto& p = pts[i];
      const double w = weighted && s.sigma_weighting ? 1.0 / p.sigma_nm : 1.0;
      try {
        e[i] = w * (model_signal_wavelength(p.pump_nm, c, s, p.signal_nm) - p.signal_nm);
      } catch (const error& ex) {
        if (ex.code() != errc::no_root_in_window && ex.code() != errc::multiple_roots &&
            ex.code() != errc::negative_radicand && ex.code() != errc::pole_proximity)
          throw;
        e[i] = std::numeric_limits<double>::quiet_NaN();
      }
    });
    return e;
  };
  auto residuals = [&](const std::vector<double>& c) { return residuals_weighted(c, true); };
  auto usable_rss = [&](const std::vector<double>& c, std::size_t& used) {
    double sum = 0.0;
    used = 0;
    for (double e : residuals_weighted(c, false))
      if (std::isfinite(e)) {
        sum += e * e;
        ++used;
      }
    return sum;
  };
  sellmeier_fit_report r;
  r.points = pts.size();
  numerics::fit_result fr;
  try {
    fr = numerics::minimize_residuals(residuals, start, s.options);
  } catch (const error& ex) {
    if (ex.code() == errc::insufficient_data) throw error(errc::diverged_fit, ex.what());
    throw;
  }
  r.fitted = fr.parameters;
  r.uncertainties = fr.standard_errors;
  r.converged = fr.converged;
  r.iterations = fr.iterations;
  std::size_t used = 0, used_start = 0;
  r.rss = usable_rss(r.fitted, used);
  r.rss_start = usable_rss(start, used_start);
  r.masked_points = pts.size() - used;
  r.average_error = used ? std::sqrt(r.rss / static_cast<double>(used)) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

inline std::vector<measurement_point> synthesize_noisy_dataset(const std::vector<double>& coeffs,
                                                               const std::vector<double>& pumps_nm,
                                                               double noise_fraction, std::uint64_t seed,
                                                               const sellmeier_fit_setup& s) {
  if (!(noise_fraction >= 0.0 && noise_fraction <= 0.05))
    throw error(errc::domain_error, "noise fraction must lie in [0, 0.05]");
  counter_rng rng(seed);
  std::vector<measurement_point> out;
  out.reserve(pumps_nm.size());
  for (double lp : pumps_nm) {
    const double v = model_signal_wavelength(lp, coeffs, s);
    const double sd = noise_fraction * v;
    const double draw = rng.normal();
    out.push_back({lp, v + sd * draw, sd > 0.0 ? sd : 1.0});
  }
  return out;
}

struct fraction_ranges {
  double first, second;
};

// Spread of the two pole terms a1/(l^2-a2) and a3/(l^2-a4) over a wavelength band.
inline fraction_ranges sellmeier_fraction_ranges(const sellmeier_set& s, double lo_um, double hi_um, int samples = 2001) {
  double f1min = 1e300, f1max = -1e300, f2min = 1e300, f2max = -1e300;
  for (int i = 0; i < samples; ++i) {
    const double l = lo_um + (hi_um - lo_um) * i / (samples - 1);
    const double l2 = l * l;
    const double f1 = s.a1 / (l2 - s.a2), f2 = s.a3 / (l2 - s.a4);
    f1min = std::min(f1min, f1);
    f1max = std::max(f1max, f1);
    f2min = std::min(f2min, f2);
    f2max = std::max(f2max, f2);
  }
  return {f1max - f1min, f2max - f2min};
}

}  // namespace pwb
