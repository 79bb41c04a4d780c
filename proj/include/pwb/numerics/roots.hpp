#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "pwb/error.hpp"

namespace pwb::numerics {

struct root_bracket {
  double lo, hi, f_lo, f_hi;

  template <class F>
  static root_bracket make(F&& f, double lo, double hi) {
    return {lo, hi, f(lo), f(hi)};
  }
  bool valid() const { return lo < hi && f_lo * f_hi <= 0.0; }
};

struct root_options {
  double tol = 1e-12;
  double ftol = 0.0;
  int max_iterations = 200;
};

// Brent's method; the bisection step keeps the bracket shrinking geometrically.
template <class F>
double find_root(F&& f, root_bracket br, root_options opt = {}) {
  if (!(br.lo < br.hi) || !(br.f_lo * br.f_hi <= 0.0) || std::isnan(br.f_lo) ||
      std::isnan(br.f_hi))
    throw error(errc::no_sign_change, "bracket does not enclose a sign change");
  if (!(opt.tol > 0.0)) throw error(errc::domain_error, "tolerance must be positive");
  double a = br.lo, b = br.hi, fa = br.f_lo, fb = br.f_hi;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a, fc = fa, d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < opt.max_iterations; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * opt.tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= opt.ftol) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw error(errc::max_iterations, "root not converged within iteration budget");
}

template <class F>
double find_root(F&& f, double lo, double hi, double tol = 1e-12) {
  return find_root(f, root_bracket::make(f, lo, hi), root_options{tol});
}

// Scan [lo, hi] with the given step and return all brackets with a sign change.
// Points where f throws or is not finite break the scan locally.
template <class F>
std::vector<root_bracket> scan_brackets(F&& f, double lo, double hi, double step) {
  std::vector<root_bracket> out;
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  bool have_prev = false;
  double xp = lo, fp = 0.0;
  for (long i = 0; i <= n; ++i) {
    double x = i == n ? hi : lo + step * static_cast<double>(i);
    double fx;
    try {
      fx = f(x);
    } catch (const error&) {
      have_prev = false;
      continue;
    }
    if (!std::isfinite(fx)) {
      have_prev = false;
      continue;
    }
    if (have_prev && (fp * fx < 0.0 || fx == 0.0)) out.push_back({xp, x, fp, fx});
    xp = x;
    fp = fx;
    have_prev = true;
  }
  return out;
}

}  // namespace pwb::numerics
