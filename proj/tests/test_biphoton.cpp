#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pwb/biphoton.hpp"
#include "pwb/materials.hpp"
#include "pwb/numerics/quadrature.hpp"
#include "pwb/phasematch.hpp"

using namespace pwb;

namespace {

struct single_coupled {
  crystal_spec crystal = materials::ppktp_396(materials::ppktp_refit_z());
  biphoton_config cfg;
  double omega_p = 4.7375;
  double omega_s0 = classical_signal_omega(4.7375, crystal, cfg);

  jsa_grid grid(int n, double z, double tau_fs = 314.5, double wp = 48.0, double wc = 13.7) const {
    const pump_spec pump{omega_p, tau_fs, wp};
    return compute_jsa(pump, {wc, wc}, crystal, {n, z, omega_s0, omega_p - omega_s0}, cfg);
  }
};

biphoton_config type2_config() {
  biphoton_config cfg;
  cfg.pol_pump = polarization::y;
  cfg.pol_signal = polarization::y;
  cfg.pol_idler = polarization::z;
  cfg.qpm_sign = 1;
  return cfg;
}

jsa_grid sampled(int n, double ms, double mi, double ss, double si, double rho) {
  jsa_grid g;
  g.omega_s = grid_axis(ms, 6 * ss / ms, n);
  g.omega_i = grid_axis(mi, 6 * si / mi, n);
  g.probability.resize(static_cast<std::size_t>(n * n));
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b) g.at(a, b) = bivariate_normal(g.omega_s[a], g.omega_i[b], ms, mi, ss, si, rho);
  normalize(g);
  return g;
}

}  // namespace

TEST(PumpAmplitude, PeakSymmetryNormalization) {
  const pump_spec p{2.4, 100.0, 40.0};
  const double peak = std::sqrt(100.0) / std::pow(std::numbers::pi, 0.25);
  EXPECT_NEAR(pump_temporal_amplitude(2.4, p), peak, 1e-14);
  EXPECT_DOUBLE_EQ(pump_temporal_amplitude(2.4 + 0.003, p), pump_temporal_amplitude(2.4 - 0.003, p));
  const double norm = numerics::integrate_panels(
      [&](double w) { return std::pow(pump_temporal_amplitude(w, p), 2); }, 2.2, 2.6, 64, 8);
  EXPECT_NEAR(norm, 1.0, 1e-8);
}

TEST(PumpAmplitude, IntensityConventionUsesReducedTau) {
  const pump_spec a{2.4, 100.0 / std::numbers::sqrt2, 40.0, pump_duration_convention::amplitude};
  const pump_spec b{2.4, 100.0, 40.0, pump_duration_convention::intensity_std};
  EXPECT_NEAR(pump_temporal_amplitude(2.401, a), pump_temporal_amplitude(2.401, b), 1e-14);
}

TEST(TauConversion, Examples) {
  EXPECT_NEAR(fwhm_omega_to_tau(0.01763), 314.5, 0.1);
  EXPECT_NEAR(fwhm_omega_to_tau(1.0), 5.545, 1e-3);
  EXPECT_NEAR(fwhm_omega_to_tau(0.02), fwhm_omega_to_tau(0.01) / 2, 1e-12);
  EXPECT_NEAR(fwhm_omega_to_tau(1.0, tau_convention::two_sqrt_ln2), 2 * std::sqrt(std::numbers::ln2), 1e-15);
  EXPECT_THROW(fwhm_omega_to_tau(0.0), error);
}

TEST(LongitudinalMismatch, CollinearMatchesPhasematch) {
  const auto c = materials::ppktp_396();
  const biphoton_config cfg;
  phase_match_query q;
  q.pump_wavelength_nm = 396.0;
  const double wp = wavelength_um_to_omega(0.396), ws = wavelength_um_to_omega(0.54);
  const double lam_s = omega_to_wavelength_um(ws) * 1e3;
  EXPECT_NEAR(phase_mismatch_longitudinal(ws, wp - ws, {}, {}, c, cfg), mismatch(q, lam_s, c).x, 1e-9);
}

TEST(LongitudinalMismatch, DegenerateConstantIndex) {
  crystal_spec c;
  c.z = sellmeier_set{3.0, 0, 0, 0, 0};
  EXPECT_NEAR(phase_mismatch_longitudinal(1.7, 1.7, {}, {}, c, {}), 0.0, 1e-12);
}

TEST(LongitudinalMismatch, ParaxialAccuracy) {
  const auto c = materials::ppktp_396();
  const biphoton_config cfg;
  const double ws = 3.5, wi = 1.2;
  const double ks = wave_number(c, polarization::z, ws);
  const double ki = wave_number(c, polarization::z, wi);
  const transverse t{0.05 * ks, 0.0};
  const transverse opposite{-0.05 * ki, 0.0};
  const double a = phase_mismatch_longitudinal(ws, wi, t, opposite, c, cfg, true);
  const double b = phase_mismatch_longitudinal(ws, wi, t, opposite, c, cfg, false);
  EXPECT_LT(std::abs(a - b) / ks, 1e-5);
  EXPECT_THROW(phase_mismatch_longitudinal(ws, wi, {2 * ks, 0}, {}, c, cfg), error);
}

TEST(Jsa, NormalizedAndOnAntiDiagonal) {
  const single_coupled s;
  const auto g = s.grid(80, 0.01);
  double sum = 0, mx = 0;
  for (double p : g.probability) {
    EXPECT_GE(p, 0.0);
    sum += p;
    mx = std::max(mx, p);
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  for (std::size_t a = 0; a < g.ns(); ++a)
    for (std::size_t b = 0; b < g.ni(); ++b)
      if (g.at(a, b) > 1e-3 * mx) EXPECT_LE(std::abs(g.omega_s[a] + g.omega_i[b] - s.omega_p), 4.0 / 314.5);
}

TEST(Jsa, ExchangeTransposes) {
  const auto c = materials::ppktp_type2();
  auto cfg = type2_config();
  const double wp = wavelength_um_to_omega(0.7801);
  const pump_spec pump{wp, 300.0, 41.0};
  const auto g = compute_jsa(pump, {40.0, 55.0}, c, {40, 0.01, 1.2209, 1.19404}, cfg);
  std::swap(cfg.pol_signal, cfg.pol_idler);
  const auto h = compute_jsa(pump, {55.0, 40.0}, c, {40, 0.01, 1.19404, 1.2209}, cfg);
  const auto t = transpose(g);
  ASSERT_EQ(t.probability.size(), h.probability.size());
  for (std::size_t k = 0; k < h.probability.size(); ++k) EXPECT_NEAR(t.probability[k], h.probability[k], 1e-12);
  const auto tt = transpose(t);
  EXPECT_EQ(tt.probability, g.probability);
}

TEST(Jsa, ContinuousWaveLimitIsAntiCorrelated) {
  const single_coupled s;
  const auto g = s.grid(300, 0.004, 10000.0);
  EXPECT_LT(fit_gaussian_2d(g).rho, -0.9);
}

TEST(Jsa, RejectsOffsetsAndBadSpecs) {
  const single_coupled s;
  const pump_spec pump{s.omega_p, 314.5, 48.0};
  coupling_spec off{13.7, 13.7, 0.01, 0.0};
  EXPECT_THROW(compute_jsa(pump, off, s.crystal, {50, 0.01, s.omega_s0, s.omega_p - s.omega_s0}, s.cfg), error);
  EXPECT_THROW(compute_jsa(pump, {13.7, 13.7}, s.crystal, {8, 0.01, s.omega_s0, s.omega_p - s.omega_s0}, s.cfg), error);
}

TEST(Marginal, UniformAndSeparable) {
  jsa_grid u;
  u.omega_s = grid_axis(1.0, 0.1, 20);
  u.omega_i = grid_axis(2.0, 0.1, 30);
  u.probability.assign(600, 1.0);
  normalize(u);
  for (double p : marginal(u, photon::signal).p) EXPECT_NEAR(p, 1.0 / 20, 1e-15);

  jsa_grid g = u;
  std::vector<double> fs(20), fi(30);
  for (std::size_t a = 0; a < 20; ++a) fs[a] = 1.0 + a;
  for (std::size_t b = 0; b < 30; ++b) fi[b] = std::exp(-0.1 * b);
  for (std::size_t a = 0; a < 20; ++a)
    for (std::size_t b = 0; b < 30; ++b) g.at(a, b) = fs[a] * fi[b];
  normalize(g);
  const auto ms = marginal(g, photon::signal), mi = marginal(g, photon::idler);
  double ss = 0, si = 0;
  for (double v : fs) ss += v;
  for (double v : fi) si += v;
  for (std::size_t a = 0; a < 20; ++a) EXPECT_NEAR(ms.p[a], fs[a] / ss, 1e-15);
  for (std::size_t b = 0; b < 30; ++b) EXPECT_NEAR(mi.p[b], fi[b] / si, 1e-15);
}

TEST(Fit1d, ExactGaussianWithOffset) {
  spectrum sp;
  for (int k = 0; k < 101; ++k) {
    const double w = 3.45 + 0.12 * k / 100;
    sp.omega.push_back(w);
    sp.p.push_back(0.002 + 0.05 * std::exp(-4 * std::numbers::ln2 * std::pow((w - 3.512) / 0.0139, 2)));
  }
  const auto f = fit_gaussian_1d(sp);
  EXPECT_NEAR(f.center, 3.512, 1e-9);
  EXPECT_NEAR(f.fwhm, 0.0139, 1e-9);
  EXPECT_NEAR(f.amplitude, 0.05, 1e-9);
  EXPECT_NEAR(f.bias, 0.002, 1e-9);
  EXPECT_LT(f.rss, 1e-20);
  EXPECT_NEAR(f.sigma(), 0.0139 / (2 * std::sqrt(2 * std::numbers::ln2)), 1e-9);
}

TEST(Fit1d, Degenerate) {
  spectrum sp{{1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}};
  EXPECT_THROW(fit_gaussian_1d(sp), error);
  spectrum tiny{{1, 2, 3}, {0, 1, 0}};
  EXPECT_THROW(fit_gaussian_1d(tiny), error);
}

TEST(Fit2d, RecoversBivariateNormal) {
  const auto g = sampled(61, 1.22, 1.19, 0.004, 0.005, 0.5);
  const auto f = fit_gaussian_2d(g);
  EXPECT_NEAR(f.sigma_s, 0.004, 1e-6 * 0.004);
  EXPECT_NEAR(f.sigma_i, 0.005, 1e-6 * 0.005);
  EXPECT_NEAR(f.rho, 0.5, 1e-6);
  EXPECT_NEAR(f.center_s, 1.22, 1e-9);
}

TEST(Fit2d, ProductHasNoCorrelation) {
  const auto g = sampled(51, 2.0, 1.0, 0.01, 0.02, 0.0);
  EXPECT_NEAR(fit_gaussian_2d(g).rho, 0.0, 1e-8);
}

TEST(Convergence, CenterAndWidthStableBeyond100Points) {
  const single_coupled s;
  const auto a = fit_gaussian_1d(marginal(s.grid(100, 0.02), photon::signal));
  const auto b = fit_gaussian_1d(marginal(s.grid(200, 0.02), photon::signal));
  EXPECT_LT(std::abs(a.center - b.center) / b.center, 1e-3);
  EXPECT_LT(std::abs(a.fwhm - b.fwhm) / b.fwhm, 1e-3);
}

TEST(Screens, SignificanceAndMismatch) {
  const single_coupled s;
  const auto f = fit_gaussian_1d(marginal(s.grid(100, 0.02), photon::signal));
  EXPECT_TRUE(passes_significance(f));
  EXPECT_TRUE(passes_mismatch_screen(s.omega_p, s.omega_s0, s.crystal, s.cfg));
  EXPECT_FALSE(passes_mismatch_screen(s.omega_p, s.omega_s0 * 1.01, s.crystal, s.cfg));
}

TEST(Classical, AgreesWithPhasematchSolver) {
  const single_coupled s;
  phase_match_query q;
  q.pump_wavelength_nm = omega_to_wavelength_um(s.omega_p) * 1e3;
  const auto sol = solve_signal_wavelength(q, s.crystal, default_signal_window(q.pump_wavelength_nm));
  EXPECT_NEAR(omega_to_wavelength_um(s.omega_s0) * 1e3, sol.signal_wavelength_nm, 1e-6);
}
