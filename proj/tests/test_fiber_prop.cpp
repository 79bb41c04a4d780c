#include <cmath>

#include <gtest/gtest.h>

#include "pwb/fiber_prop.hpp"

using namespace pwb;

namespace {

jsa_grid sampled(int n, double z, double ss, double si, double rho) {
  jsa_grid g;
  g.omega_s = grid_axis(1.2, z, n);
  g.omega_i = grid_axis(1.1, z * 1.2 / 1.1, n);
  g.probability.resize(static_cast<std::size_t>(n * n));
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) g.at(a, b) = bivariate_normal(g.omega_s[a], g.omega_i[b], 1.2, 1.1, ss, si, rho);
  normalize(g);
  return g;
}

double chirped_sigma_t(double sigma_w, double s) {
  return std::hypot(1e-6 / (2 * sigma_w), s * sigma_w);
}

}  // namespace

TEST(FiberScale, ReferenceFiber) {
  const fiber_spec f{-2.27e-26, 1e4};
  EXPECT_NEAR(dispersion_scale(f), 227.0, 1e-9);
  EXPECT_NEAR(signed_dispersion_scale(f), -227.0, 1e-9);
  EXPECT_NEAR(1.156 / dispersion_scale(f), 5.093e-3, 1e-6);
}

TEST(FiberScale, FrequencyStatisticsMap) {
  gaussian_fit_2d fit;
  fit.sigma_s = 5.093e-3;
  fit.sigma_i = 5.6e-3;
  fit.rho = 0.95;
  const auto t = time_stats_from_frequency(fit, {-2.27e-26, 1e4});
  EXPECT_NEAR(t.tau_s_ns, 227 * 5.093e-3, 1e-12);
  EXPECT_NEAR(t.tau_i_ns, 227 * 5.6e-3, 1e-12);
  EXPECT_EQ(t.rho_t, 0.95);
}

TEST(Stationary, LinearMapOfMoments) {
  const auto g = sampled(81, 0.02, 0.004, 0.005, 0.7);
  const fiber_spec f{-2.27e-26, 1e4};
  const auto t = propagate_stationary(g, f);
  const auto m = moments(g);
  const auto tm = moments(t);
  EXPECT_NEAR(tm.tau_s_ns, 227 * m.sd_s, 1e-12 * tm.tau_s_ns);
  EXPECT_NEAR(tm.tau_i_ns, 227 * m.sd_i, 1e-12 * tm.tau_i_ns);
  EXPECT_NEAR(tm.rho_t, m.rho, 1e-12);
  double sum = 0;
  for (double p : t.probability) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-13);
  EXPECT_TRUE(std::is_sorted(t.t_s_ns.begin(), t.t_s_ns.end()));
}

TEST(Stationary, SignOfDispersionFlipsCorrelationAxesOnly) {
  const auto g = sampled(41, 0.02, 0.004, 0.005, -0.4);
  const auto a = moments(propagate_stationary(g, {-1e-26, 1e4}));
  const auto b = moments(propagate_stationary(g, {1e-26, 1e4}));
  EXPECT_NEAR(a.rho_t, b.rho_t, 1e-12);
  EXPECT_NEAR(a.tau_s_ns, b.tau_s_ns, 1e-12);
  EXPECT_THROW(propagate_stationary(g, {0.0, 1e4}), error);
}

TEST(Exact, ChirpedGaussianClosedForm) {
  const double sigma = 0.005, s = 0.8;
  const fiber_spec f{s * 1e-24, 1.0};
  EXPECT_NEAR(far_field_parameter(f, sigma), 20.0, 1e-9);
  const auto g = sampled(501, 0.025, sigma, sigma, 0.0);
  const auto t = propagate_exact(g, f);
  const auto m = moments(t);
  const double expect = chirped_sigma_t(sigma, s);
  EXPECT_NEAR(m.tau_s_ns, expect, 0.01 * expect);
  EXPECT_NEAR(m.tau_i_ns, expect, 0.01 * expect);
  EXPECT_NEAR(t.captured_fraction, 1.0, 1e-6);
}

TEST(Exact, NearFieldIsTransformLimited) {
  const double sigma = 0.005, s = 0.02;
  const fiber_spec f{s * 1e-24, 1.0};
  const auto g = sampled(201, 0.025, sigma, sigma, 0.0);
  const auto m = moments(propagate_exact(g, f));
  const double expect = chirped_sigma_t(sigma, s);
  EXPECT_NEAR(m.tau_s_ns, expect, 0.01 * expect);
}

TEST(Exact, AgreesWithStationaryInFarField) {
  const double ss = 0.004, si = 0.005, s = 0.7;
  const fiber_spec f{s * 1e-24, 1.0};
  EXPECT_GT(far_field_parameter(f, ss), 10.0);
  const auto g = sampled(501, 0.025, ss, si, 0.6);
  const auto a = moments(propagate_exact(g, f));
  const auto b = moments(propagate_stationary(g, f));
  EXPECT_NEAR(a.tau_s_ns, b.tau_s_ns, 0.02 * b.tau_s_ns);
  EXPECT_NEAR(a.tau_i_ns, b.tau_i_ns, 0.02 * b.tau_i_ns);
  EXPECT_NEAR(a.rho_t, b.rho_t, 0.02 * b.rho_t);
}

TEST(Exact, RejectsUndersampledPhase) {
  const auto g = sampled(50, 0.025, 0.005, 0.005, 0.0);
  EXPECT_THROW(
      {
        try {
          propagate_exact(g, {-2.27e-26, 1e4});
        } catch (const error& e) {
          EXPECT_EQ(e.code(), errc::grid_too_coarse);
          throw;
        }
      },
      error);
}
