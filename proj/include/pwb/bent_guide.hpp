#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pwb/error.hpp"
#include "pwb/numerics/bessel.hpp"
#include "pwb/numerics/quadrature.hpp"
#include "pwb/numerics/roots.hpp"

namespace pwb {

struct bent_guide_spec {
  double inner_radius_um = 0.5;
  double outer_radius_um = 1.5;
  double half_height_um = 0.25;
  double core_index = 2.3;
  double clad_index = 1.0;
  double wavelength_um = 0.8;
};

// Parity of the vertical profile Z(z): even is cos-like, odd is sin-like.
enum class parity { even, odd };

inline std::string to_string(parity p) { return p == parity::even ? "even" : "odd"; }

struct vertical_root {
  parity par;
  int q;
  double beta_w, beta_s;
};

struct azimuthal_root {
  int p;
  double m, gamma;
};

struct bent_mode_solution {
  int p = 0, q = 0;
  parity par = parity::even;
  double beta_w = 0, beta_s = 0, h = 0, m = 0, gamma = 0, order = 0;
  double n_eff = 0, mean_radius = 0;
  bool physical = false;
  double half_height = 0;

  double radial(double r) const {
    const auto b = numerics::bessel_jy(order, h * r);
    return std::sin(gamma) * b.j + std::cos(gamma) * b.y;
  }
  double vertical(double z) const {
    const double az = std::abs(z);
    if (az <= half_height) return par == parity::even ? std::cos(beta_w * z) : std::sin(beta_w * z);
    const double edge = par == parity::even ? std::cos(beta_w * half_height) : std::sin(beta_w * half_height);
    const double sgn = par == parity::even ? 1.0 : (z < 0 ? -1.0 : 1.0);
    return sgn * edge * std::exp(-beta_s * (az - half_height));
  }
  double field(double r, double z) const { return radial(r) * vertical(z); }
};

struct bent_solve_options {
  double m_scan_step = 0.05;
  double guidance_margin = 0.05;
  double boundary_tolerance = 1e-6;
};

inline void validate(const bent_guide_spec& s) {
  if (!(s.inner_radius_um > 0 && s.inner_radius_um < s.outer_radius_um))
    throw error(errc::validation, "radii must satisfy 0 < r1 < r2");
  if (!(s.half_height_um > 0)) throw error(errc::validation, "half height must be positive");
  if (!(s.core_index > s.clad_index && s.clad_index >= 1.0)) throw error(errc::validation, "indices must satisfy n1 > n2 >= 1");
  if (!(s.wavelength_um > 0)) throw error(errc::validation, "wavelength must be positive");
}

inline double vacuum_k(const bent_guide_spec& s) { return 2.0 * std::numbers::pi / s.wavelength_um; }
inline double vertical_v(const bent_guide_spec& s) {
  return vacuum_k(s) * std::sqrt(s.core_index * s.core_index - s.clad_index * s.clad_index);
}

struct vertical_counts {
  int tan_roots, cot_roots;
  int total() const { return tan_roots + cot_roots; }
};

inline vertical_counts count_vertical_modes(const bent_guide_spec& s) {
  const double x = vertical_v(s) * s.half_height_um / std::numbers::pi;
  return {static_cast<int>(std::ceil(x)), std::max(0, static_cast<int>(std::ceil(x - 0.5)))};
}

// tan(b z0) = sqrt(V^2-b^2)/b gives cos-like profiles, cot(b z0) = -sqrt(V^2-b^2)/b sin-like ones.
inline std::vector<vertical_root> vertical_roots(const bent_guide_spec& s) {
  validate(s);
  const double v = vertical_v(s), z0 = s.half_height_um;
  auto gt = [&](double b) { return b * std::sin(b * z0) - std::sqrt(std::max(v * v - b * b, 0.0)) * std::cos(b * z0); };
  auto gc = [&](double b) { return b * std::cos(b * z0) + std::sqrt(std::max(v * v - b * b, 0.0)) * std::sin(b * z0); };
  std::vector<vertical_root> out;
  const double lo = v * 1e-9, step = v / 20000.0;
  auto collect = [&](auto& g, parity par) {
    for (const auto& br : numerics::scan_brackets(g, lo, v, step)) {
      const double b = numerics::find_root(g, br, {1e-14, 0.0, 300});
      if (b >= v) continue;
      out.push_back({par, 0, b, std::sqrt(v * v - b * b)});
    }
  };
  collect(gt, parity::even);
  collect(gc, parity::odd);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.beta_w < b.beta_w; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].q = static_cast<int>(i + 1);
  return out;
}

inline double radial_h(const bent_guide_spec& s, double beta_w) {
  const double k1 = vacuum_k(s) * s.core_index;
  return std::sqrt(k1 * k1 - beta_w * beta_w);
}

inline double bessel_order(double m) { return std::sqrt(m * m + 1.0); }

inline double radial_determinant(const bent_guide_spec& s, double h, double m, double* scale = nullptr) {
  const double nu = bessel_order(m);
  const auto a = numerics::bessel_jy(nu, h * s.inner_radius_um);
  const auto b = numerics::bessel_jy(nu, h * s.outer_radius_um);
  if (scale) *scale = std::abs(a.j * b.y) + std::abs(b.j * a.y);
  return a.j * b.y - b.j * a.y;
}

inline std::vector<azimuthal_root> azimuthal_numbers(const bent_guide_spec& s, double h, double step = 0.05) {
  validate(s);
  if (!(h > 0)) throw error(errc::domain_error, "h must be positive");
  const double mmax = h * s.outer_radius_um;
  if (bessel_order(mmax) > numerics::bessel_max_order)
    throw error(errc::bessel_range, "azimuthal scan needs Bessel order above " + std::to_string(numerics::bessel_max_order));
  auto d = [&](double m) { return radial_determinant(s, h, m); };
  std::vector<azimuthal_root> out;
  for (const auto& br : numerics::scan_brackets(d, step * 1e-3, mmax, step)) {
    const double m = numerics::find_root(d, br, {1e-13, 0.0, 300});
    const double nu = bessel_order(m);
    const auto a = numerics::bessel_jy(nu, h * s.inner_radius_um);
    out.push_back({0, m, std::atan2(-a.y, a.j)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.m > b.m; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].p = static_cast<int>(i + 1);
  return out;
}

inline int estimated_radial_count(const bent_guide_spec& s, double h) {
  return static_cast<int>(std::floor(h * (s.outer_radius_um - s.inner_radius_um) / std::numbers::pi));
}

inline double approximate_azimuthal(const bent_guide_spec& s, double h, int p) {
  const double dr = s.outer_radius_um - s.inner_radius_um, rav = 0.5 * (s.inner_radius_um + s.outer_radius_um);
  const double rad = h * h - std::numbers::pi * std::numbers::pi * p * p / (dr * dr) - 5.0 / (4.0 * rav * rav);
  if (!(rad > 0)) throw error(errc::no_real_solution, "thin-annulus estimate has no real m");
  return rav * std::sqrt(rad);
}

// Nearest-integer m with its relative determinant residual.
struct integer_snap {
  int m;
  double relative_residual;
};

inline integer_snap snap_to_integer(const bent_guide_spec& s, double h, double m) {
  const int mi = std::max(1, static_cast<int>(std::lround(m)));
  double scale = 0;
  const double d = radial_determinant(s, h, mi, &scale);
  return {mi, scale > 0 ? std::abs(d) / scale : 0.0};
}

inline double mean_radius(const bent_mode_solution& mode, const bent_guide_spec& s) {
  auto w2 = [&](double r) {
    const double v = mode.radial(r);
    return v * v;
  };
  const int panels = 32, order = 32;
  const double num = numerics::integrate_panels([&](double r) { return w2(r) * r; }, s.inner_radius_um, s.outer_radius_um, order, panels);
  const double den = numerics::integrate_panels(w2, s.inner_radius_um, s.outer_radius_um, order, panels);
  return num / den;
}

inline double effective_index(const bent_mode_solution& mode, const bent_guide_spec& s) {
  return mode.m / (vacuum_k(s) * mode.mean_radius);
}

inline bent_mode_solution assemble_mode(const bent_guide_spec& s, const vertical_root& vr, const azimuthal_root& ar,
                                        const bent_solve_options& opt = {}) {
  bent_mode_solution mode;
  mode.p = ar.p;
  mode.q = vr.q;
  mode.par = vr.par;
  mode.beta_w = vr.beta_w;
  mode.beta_s = vr.beta_s;
  mode.h = radial_h(s, vr.beta_w);
  mode.m = ar.m;
  mode.gamma = ar.gamma;
  mode.order = bessel_order(ar.m);
  mode.half_height = s.half_height_um;
  double peak = 0.0;
  const int samples = 400;
  for (int i = 0; i <= samples; ++i) {
    const double r = s.inner_radius_um + (s.outer_radius_um - s.inner_radius_um) * i / samples;
    peak = std::max(peak, std::abs(mode.radial(r)));
  }
  const double edge = std::max(std::abs(mode.radial(s.inner_radius_um)), std::abs(mode.radial(s.outer_radius_um)));
  if (!(peak > 0) || edge / peak > opt.boundary_tolerance)
    throw error(errc::boundary_residual, "radial profile does not vanish at the walls");
  mode.mean_radius = mean_radius(mode, s);
  mode.n_eff = effective_index(mode, s);
  mode.physical = mode.n_eff > s.clad_index + opt.guidance_margin;
  return mode;
}

inline std::vector<bent_mode_solution> solve_bent_guide(const bent_guide_spec& s, const bent_solve_options& opt = {}) {
  std::vector<bent_mode_solution> out;
  for (const auto& vr : vertical_roots(s)) {
    const double h = radial_h(s, vr.beta_w);
    for (const auto& ar : azimuthal_numbers(s, h, opt.m_scan_step)) out.push_back(assemble_mode(s, vr, ar, opt));
  }
  return out;
}

struct qff_report {
  double max_residual = 0.0;
  int samples = 0;
};

// Checks that u = sqrt(r) R(r) solves u'' - (nu^2 - 1/4) u / r^2 + h^2 u = 0.
inline qff_report qff_transform_check(const bent_mode_solution& mode, const bent_guide_spec& s, int n = 20001) {
  const double r1 = s.inner_radius_um, r2 = s.outer_radius_um, dr = (r2 - r1) / (n - 1);
  std::vector<double> u(static_cast<std::size_t>(n));
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = r1 + dr * i;
    u[static_cast<std::size_t>(i)] = std::sqrt(r) * mode.radial(r);
    scale = std::max(scale, mode.h * mode.h * std::abs(u[static_cast<std::size_t>(i)]));
  }
  qff_report rep;
  const double c = mode.order * mode.order - 0.25;
  for (int i = 2; i < n - 2; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double r = r1 + dr * i;
    const double upp = (u[k + 1] - 2.0 * u[k] + u[k - 1]) / (dr * dr);
    const double res = upp - c * u[k] / (r * r) + mode.h * mode.h * u[k];
    rep.max_residual = std::max(rep.max_residual, std::abs(res) / scale);
    ++rep.samples;
  }
  return rep;
}

// Coefficient of hbar^2 / (2 M r^2) in the radial effective potential for dimension D.
inline double qff_potential_coefficient(int dimension) {
  return (dimension - 1.0) * (dimension - 3.0) / 4.0;
}

}  // namespace pwb
