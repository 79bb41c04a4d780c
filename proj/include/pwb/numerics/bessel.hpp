#pragma once

#include <cmath>
#include <numbers>

#include "pwb/error.hpp"

namespace pwb::numerics {

struct bessel_values {
  double j, y, jp, yp;
};

constexpr double bessel_max_order = 200.0;

namespace detail {

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
inline void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
  gampl = 1.0 / std::tgamma(1.0 + mu);
  gammi = 1.0 / std::tgamma(1.0 - mu);
  gam2 = 0.5 * (gammi + gampl);
  if (std::abs(mu) < 0.1) {
    constexpr double c[] = {0.5772156649015329, -0.0420026350340952, -0.0421977345555443,
                            0.0072189432466630, -0.0002152416741149, -0.0000201348547807};
    const double m2 = mu * mu;
    double s = 0.0;
    for (int k = 5; k >= 0; --k) s = s * m2 + c[k];
    gam1 = -s;
  } else {
    gam1 = (gammi - gampl) / (2.0 * mu);
  }
}

}  // namespace detail

inline bessel_values bessel_jy(double nu, double x) {
  using std::numbers::pi;
  if (!(x > 0.0) || !std::isfinite(x))
    throw error(errc::domain_error, "bessel_jy requires x > 0");
  if (!(nu >= 0.0) || nu > bessel_max_order)
    throw error(errc::domain_error, "bessel_jy order outside [0, 200]");

  constexpr double eps = 1e-16, fpmin = 1e-300, xmin = 2.0;
  constexpr int maxit = 200000;
  const int nl = x < xmin ? static_cast<int>(nu + 0.5)
                          : std::max(0, static_cast<int>(nu - x + 1.5));
  const double mu = nu - nl, mu2 = mu * mu;
  const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / pi;

  // Continued fraction for J'_nu / J_nu.
  int isign = 1;
  double h = nu * xi;
  if (h < fpmin) h = fpmin;
  double b = xi2 * nu, d = 0.0, c = h;
  int i = 0;
  for (; i < maxit; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b - 1.0 / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < eps) break;
  }
  if (i == maxit) throw error(errc::max_iterations, "bessel_jy: CF1 did not converge");

  double rjl = isign * 1e-30, rjpl = h * rjl;
  double rjl1 = rjl, rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double t = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * t - rjl;
    rjl = t;
    if (std::abs(rjl) > 1e250) {
      rjl *= 1e-250;
      rjpl *= 1e-250;
      rjl1 *= 1e-250;
      rjp1 *= 1e-250;
    }
  }
  if (rjl == 0.0) rjl = eps;
  const double f = rjpl / rjl;

  double rjmu, rymu, rymup, ry1;
  if (x < xmin) {
    const double x2 = 0.5 * x, pimu = pi * mu;
    double fct = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
    d = -std::log(x2);
    double e = mu * d;
    const double fct2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    detail::temme_gammas(mu, gam1, gam2, gampl, gammi);
    double ff = 2.0 / pi * fct * (gam1 * std::cosh(e) + gam2 * fct2 * d);
    e = std::exp(e);
    double p = e / (gampl * pi);
    double q = 1.0 / (e * pi * gammi);
    const double pimu2 = 0.5 * pimu;
    const double fct3 = std::abs(pimu2) < eps ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = pi * pimu2 * fct3 * fct3;
    c = 1.0;
    d = -x2 * x2;
    double sum = ff + r * q, sum1 = p;
    for (i = 1; i < maxit; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * (ff + r * q);
      sum += del;
      const double del1 = c * p - i * del;
      sum1 += del1;
      if (std::abs(del) < (1.0 + std::abs(sum)) * eps) break;
    }
    if (i == maxit) throw error(errc::max_iterations, "bessel_jy: series did not converge");
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = mu * xi * rymu - ry1;
    rjmu = w / (rymup - f * rymu);
  } else {
    // Steed's continued fraction for p + iq = (J'_mu + i Y'_mu) / (J_mu + i Y_mu).
    double a = 0.25 - mu2, p = -0.5 * xi, q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct, ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den, di = -bi / den;
    double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
    double t = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = t;
    for (i = 2; i < maxit; ++i) {
      a += 2 * (i - 1);
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::abs(dr) + std::abs(di) < fpmin) dr = fpmin;
      fct = a / (cr * cr + ci * ci);
      cr = br + cr * fct;
      ci = bi - ci * fct;
      if (std::abs(cr) + std::abs(ci) < fpmin) cr = fpmin;
      den = dr * dr + di * di;
      dr /= den;
      di = -di / den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      t = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = t;
      if (std::abs(dlr - 1.0) + std::abs(dli) < eps) break;
    }
    if (i == maxit) throw error(errc::max_iterations, "bessel_jy: CF2 did not converge");
    const double gam = (p - f) / q;
    rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = mu * xi * rymu - rymup;
  }
  const double scale = rjmu / rjl;
  bessel_values out{};
  out.j = rjl1 * scale;
  out.jp = rjp1 * scale;
  for (i = 1; i <= nl; ++i) {
    const double t = (mu + i) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = t;
  }
  out.y = rymu;
  out.yp = nu * xi * rymu - ry1;
  return out;
}

inline double cyl_j(double nu, double x) { return bessel_jy(nu, x).j; }
inline double cyl_y(double nu, double x) { return bessel_jy(nu, x).y; }

}  // namespace pwb::numerics
