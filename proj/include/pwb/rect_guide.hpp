#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pwb/error.hpp"
#include "pwb/numerics/roots.hpp"

namespace pwb {

constexpr double c_um_per_ps = 299.792458;

enum class guide_kind { hollow, dielectric };
enum class mode_family { TE, TM, Ey, Ex };

inline std::string to_string(mode_family f) {
  switch (f) {
    case mode_family::TE: return "TE";
    case mode_family::TM: return "TM";
    case mode_family::Ey: return "Ey";
    case mode_family::Ex: return "Ex";
  }
  return "?";
}

struct rect_guide_spec {
  double width_um = 1.0;
  double height_um = 0.5;
  double core_index = 1.0;
  double clad_index = 1.0;
  guide_kind kind = guide_kind::hollow;
};

struct rect_mode {
  mode_family family;
  int m, n;
  double kx, ky, kz;
  double cutoff_thz = 0.0;
  double kappa_x = 0.0, kappa_y = 0.0;
};

inline double hollow_cutoff_thz(const rect_guide_spec& s, int m, int n) {
  const double kx = m * std::numbers::pi / s.width_um, ky = n * std::numbers::pi / s.height_um;
  return c_um_per_ps / (2.0 * std::numbers::pi) * std::sqrt(kx * kx + ky * ky);
}

inline std::vector<rect_mode> hollow_modes(const rect_guide_spec& s, double f_thz) {
  using std::numbers::pi;
  if (s.kind != guide_kind::hollow) throw error(errc::validation, "hollow_modes needs a hollow guide");
  if (!(f_thz > 0) || !(s.width_um > 0) || !(s.height_um > 0)) throw error(errc::validation, "invalid hollow guide query");
  const double k0 = 2.0 * pi * f_thz / c_um_per_ps;
  const int mmax = static_cast<int>(k0 * s.width_um / pi) + 1, nmax = static_cast<int>(k0 * s.height_um / pi) + 1;
  std::vector<rect_mode> out;
  for (int fam = 0; fam < 2; ++fam)
    for (int m = 0; m <= mmax; ++m)
      for (int n = 0; n <= nmax; ++n) {
        if (fam == 0 && m == 0 && n == 0) continue;
        if (fam == 1 && (m < 1 || n < 1)) continue;
        const double kx = m * pi / s.width_um, ky = n * pi / s.height_um;
        const double kz2 = k0 * k0 - kx * kx - ky * ky;
        if (kz2 <= 0) continue;
        out.push_back({fam == 0 ? mode_family::TE : mode_family::TM, m, n, kx, ky, std::sqrt(kz2),
                       hollow_cutoff_thz(s, m, n)});
      }
  std::sort(out.begin(), out.end(), [](const rect_mode& a, const rect_mode& b) {
    if (a.cutoff_thz != b.cutoff_thz) return a.cutoff_thz < b.cutoff_thz;
    return a.family < b.family;
  });
  return out;
}

// Residual of k d = p pi - 2 atan(ratio * k / kappa) with kappa^2 = kmax^2 - k^2.
inline double marcatili_residual(double k, double d, int p, double ratio, double kmax) {
  const double kappa = std::sqrt(std::max(kmax * kmax - k * k, 0.0));
  return k * d - p * std::numbers::pi + 2.0 * std::atan2(ratio * k, kappa);
}

inline std::vector<double> marcatili_transverse_roots(double d, double ratio, double kmax) {
  std::vector<double> out;
  const int pmax = static_cast<int>(std::ceil(d * kmax / std::numbers::pi));
  for (int p = 1; p <= pmax; ++p) {
    auto f = [&](double k) { return marcatili_residual(k, d, p, ratio, kmax); };
    if (f(0.0) * f(kmax) > 0) continue;
    out.push_back(numerics::find_root(f, numerics::root_bracket::make(f, 0.0, kmax), {1e-15, 0.0, 400}));
  }
  return out;
}

inline std::vector<rect_mode> marcatili_solve(const rect_guide_spec& s, double lambda_um, mode_family pol) {
  if (s.kind != guide_kind::dielectric) throw error(errc::validation, "marcatili_solve needs a dielectric guide");
  if (pol != mode_family::Ey && pol != mode_family::Ex) throw error(errc::validation, "polarization must be Ey or Ex");
  if (!(lambda_um > 0) || !(s.core_index > s.clad_index)) throw error(errc::validation, "invalid dielectric guide query");
  const double k0 = 2.0 * std::numbers::pi / lambda_um;
  const double n1 = s.core_index, n2 = s.clad_index;
  const double kmax = k0 * std::sqrt(n1 * n1 - n2 * n2);
  const double contrast = (n2 * n2) / (n1 * n1);
  const double rx = pol == mode_family::Ey ? 1.0 : contrast, ry = pol == mode_family::Ey ? contrast : 1.0;
  const auto kxs = marcatili_transverse_roots(s.width_um, rx, kmax);
  const auto kys = marcatili_transverse_roots(s.height_um, ry, kmax);
  std::vector<rect_mode> out;
  for (std::size_t p = 0; p < kxs.size(); ++p)
    for (std::size_t q = 0; q < kys.size(); ++q) {
      const double kx = kxs[p], ky = kys[q];
      const double kz2 = k0 * k0 * n1 * n1 - kx * kx - ky * ky;
      if (kz2 <= k0 * k0 * n2 * n2) continue;
      rect_mode m{pol, static_cast<int>(p + 1), static_cast<int>(q + 1), kx, ky, std::sqrt(kz2), 0.0,
                  std::sqrt(kmax * kmax - kx * kx), std::sqrt(kmax * kmax - ky * ky)};
      out.push_back(m);
    }
  if (out.empty()) throw error(errc::no_guided_modes, "no guided Marcatili modes");
  std::sort(out.begin(), out.end(), [](const rect_mode& a, const rect_mode& b) { return a.kz > b.kz; });
  return out;
}

struct sample_grid {
  double x0, x1;
  int nx;
  double y0, y1;
  int ny;
};

struct field_sample {
  double x, y, value;
};

namespace detail {
// Core profile cos(k u - (p-1) pi/2) on |u| <= d/2, exponential tails outside.
inline double marcatili_profile(double u, double d, int p, double k, double kappa) {
  const double phase = (p - 1) * std::numbers::pi / 2;
  if (std::abs(u) <= d / 2) return std::cos(k * u - phase);
  const double edge = std::copysign(d / 2, u);
  return std::cos(k * edge - phase) * std::exp(-kappa * (std::abs(u) - d / 2));
}
}  // namespace detail

// Hollow guides use x in [0, a], y in [0, b]; dielectric guides are centred on
// the core. Dielectric values are the dominant transverse magnetic component,
// which is continuous across all core boundaries; corner regions are zero.
inline double mode_field_value(const rect_mode& m, const rect_guide_spec& s, double x, double y) {
  using std::numbers::pi;
  if (s.kind == guide_kind::hollow) {
    if (x < 0 || x > s.width_um || y < 0 || y > s.height_um) return 0.0;
    const double cx = std::cos(m.kx * x), sx = std::sin(m.kx * x);
    const double cy = std::cos(m.ky * y), sy = std::sin(m.ky * y);
    double ex, ey;
    if (m.family == mode_family::TE) {
      ex = m.ky * cx * sy;
      ey = m.kx * sx * cy;
    } else {
      ex = m.kx * cx * sy;
      ey = m.ky * sx * cy;
    }
    return std::hypot(ex, ey);
  }
  const bool out_x = std::abs(x) > s.width_um / 2, out_y = std::abs(y) > s.height_um / 2;
  if (out_x && out_y) return 0.0;
  return std::abs(detail::marcatili_profile(x, s.width_um, m.m, m.kx, m.kappa_x) *
                  detail::marcatili_profile(y, s.height_um, m.n, m.ky, m.kappa_y));
}

inline std::vector<field_sample> mode_field(const rect_mode& m, const rect_guide_spec& s, const sample_grid& g) {
  std::vector<field_sample> out;
  out.reserve(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.nx == 1 ? g.x0 : g.x0 + (g.x1 - g.x0) * i / (g.nx - 1);
    for (int j = 0; j < g.ny; ++j) {
      const double y = g.ny == 1 ? g.y0 : g.y0 + (g.y1 - g.y0) * j / (g.ny - 1);
      out.push_back({x, y, mode_field_value(m, s, x, y)});
    }
  }
  return out;
}

}  // namespace pwb
