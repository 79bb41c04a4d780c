#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "pwb/error.hpp"

namespace pwb::numerics {

struct gauss_legendre_rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline gauss_legendre_rule make_gauss_legendre(int order) {
  if (order < 1) throw error(errc::domain_error, "quadrature order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  gauss_legendre_rule r{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

namespace detail {
constexpr int cached_gl_orders = 128;

inline const std::vector<gauss_legendre_rule>& gl_table() {
  static const std::vector<gauss_legendre_rule> table = [] {
    std::vector<gauss_legendre_rule> t;
    t.reserve(cached_gl_orders + 1);
    t.push_back({});
    for (int k = 1; k <= cached_gl_orders; ++k) t.push_back(make_gauss_legendre(k));
    return t;
  }();
  return table;
}
}  // namespace detail

inline gauss_legendre_rule gauss_legendre(int order) {
  if (order >= 1 && order <= detail::cached_gl_orders)
    return detail::gl_table()[static_cast<std::size_t>(order)];
  return make_gauss_legendre(order);
}

template <class F>
auto integrate(F&& f, double a, double b, int order) {
  if (!(a < b)) throw error(errc::domain_error, "integration requires a < b");
  if (order < 2) throw error(errc::domain_error, "quadrature order must be >= 2");
  gauss_legendre_rule local;
  const gauss_legendre_rule* rp;
  if (order <= detail::cached_gl_orders) {
    rp = &detail::gl_table()[static_cast<std::size_t>(order)];
  } else {
    local = make_gauss_legendre(order);
    rp = &local;
  }
  const auto& r = *rp;
  const double hw = 0.5 * (b - a), mid = 0.5 * (a + b);
  using R = decltype(f(mid));
  R sum{};
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(mid + hw * r.nodes[i]);
  return sum * hw;
}

// Composite rule over equal panels.
template <class F>
auto integrate_panels(F&& f, double a, double b, int order, int panels) {
  const double h = (b - a) / panels;
  auto sum = integrate(f, a, a + h, order);
  for (int k = 1; k < panels; ++k) sum += integrate(f, a + k * h, a + (k + 1) * h, order);
  return sum;
}

}  // namespace pwb::numerics
