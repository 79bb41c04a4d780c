#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pwb/bent_guide.hpp"

using namespace pwb;

namespace {

const bent_guide_spec reference{};

double oracle_determinant(double h, double m, double r1, double r2) {
  const double nu = std::sqrt(m * m + 1);
  return std::cyl_bessel_j(nu, h * r1) * std::cyl_neumann(nu, h * r2) -
         std::cyl_bessel_j(nu, h * r2) * std::cyl_neumann(nu, h * r1);
}

const bent_mode_solution& find(const std::vector<bent_mode_solution>& modes, int p, int q) {
  for (const auto& m : modes)
    if (m.p == p && m.q == q) return m;
  throw std::runtime_error("mode not found");
}

int sign_changes(const std::vector<double>& v) {
  int n = 0;
  double prev = 0;
  for (double x : v) {
    const double d = x;
    if (prev != 0 && d * prev < 0) ++n;
    if (d != 0) prev = d;
  }
  return n;
}

}  // namespace

TEST(Vertical, ReferenceRootsAndMatching) {
  const auto roots = vertical_roots(reference);
  ASSERT_EQ(roots.size(), 3u);
  const double expect_b[] = {5.03, 9.94, 14.46}, expect_h[] = {17.35, 15.09, 10.8};
  const double k0 = 2 * std::numbers::pi / 0.8, k1 = 2.3 * k0, k2 = k0;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(roots[i].q, static_cast<int>(i + 1));
    EXPECT_NEAR(roots[i].beta_w, expect_b[i], 0.005 * expect_b[i]);
    const double h = radial_h(reference, roots[i].beta_w);
    EXPECT_NEAR(h, expect_h[i], 0.005 * expect_h[i]);
    EXPECT_NEAR(k1 * k1 - roots[i].beta_w * roots[i].beta_w, k2 * k2 + roots[i].beta_s * roots[i].beta_s, 1e-9 * k1 * k1);
  }
}

TEST(Vertical, RootsSatisfyTranscendentalEquations) {
  const double v = vertical_v(reference), z0 = reference.half_height_um;
  for (const auto& r : vertical_roots(reference)) {
    const double rhs = std::sqrt(v * v - r.beta_w * r.beta_w) / r.beta_w;
    if (r.par == parity::even)
      EXPECT_NEAR(std::tan(r.beta_w * z0), rhs, 1e-9 * (1 + rhs));
    else
      EXPECT_NEAR(1.0 / std::tan(r.beta_w * z0), -rhs, 1e-9 * (1 + rhs));
  }
}

TEST(Vertical, CountsMatchRootsAcrossHeights) {
  const auto c = count_vertical_modes(reference);
  EXPECT_EQ(c.tan_roots, 2);
  EXPECT_EQ(c.cot_roots, 1);
  auto thin = reference;
  thin.half_height_um = 1e-4;
  const auto t = count_vertical_modes(thin);
  EXPECT_EQ(t.tan_roots, 1);
  EXPECT_EQ(t.cot_roots, 0);
  for (double z0 : {0.1, 0.25, 0.5, 1.0, 1.37}) {
    auto s = reference;
    s.half_height_um = z0;
    const auto n = count_vertical_modes(s);
    EXPECT_EQ(static_cast<int>(vertical_roots(s).size()), n.tan_roots + n.cot_roots) << z0;
  }
}

TEST(Vertical, WeakContrastLeavesOneRoot) {
  auto s = reference;
  s.core_index = 1.0001;
  const auto roots = vertical_roots(s);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_LT(roots[0].beta_w, vertical_v(s));
  EXPECT_LT(roots[0].beta_w, 0.5);
}

TEST(Azimuthal, ReferenceFirstVerticalOrder) {
  const double h = radial_h(reference, vertical_roots(reference)[0].beta_w);
  const auto roots = azimuthal_numbers(reference, h);
  ASSERT_EQ(roots.size(), 5u);
  EXPECT_EQ(estimated_radial_count(reference, h), 5);
  const double expect[] = {20.54, 16.50, 13.23, 10.26};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(roots[i].m, expect[i], 0.01 * expect[i]);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) EXPECT_GT(roots[i].m, roots[i + 1].m);
  for (const auto& r : roots) {
    const double nu = std::sqrt(r.m * r.m + 1), x1 = h * 0.5, x2 = h * 1.5;
    const double scale = std::hypot(std::cyl_bessel_j(nu, x1), std::cyl_neumann(nu, x1)) *
                         std::hypot(std::cyl_bessel_j(nu, x2), std::cyl_neumann(nu, x2));
    EXPECT_LT(std::abs(oracle_determinant(h, r.m, 0.5, 1.5)) / scale, 1e-9);
  }
}

TEST(Azimuthal, ReferenceThirdVerticalOrder) {
  const double h = radial_h(reference, vertical_roots(reference)[2].beta_w);
  const auto roots = azimuthal_numbers(reference, h);
  ASSERT_EQ(roots.size(), 3u);
  const double expect[] = {11.53, 8.08, 4.56};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(roots[i].m, expect[i], 0.01 * expect[i]);
  EXPECT_EQ(azimuthal_numbers(reference, radial_h(reference, vertical_roots(reference)[1].beta_w)).size(), 4u);
}

TEST(Azimuthal, RejectsBadInput) { EXPECT_THROW(azimuthal_numbers(reference, 0.0), error); }

TEST(Approximate, ThickAndThinAnnulus) {
  EXPECT_NEAR(approximate_azimuthal(reference, 17.35, 1), 17.03, 0.01);
  EXPECT_THROW(approximate_azimuthal(reference, 17.35, 6), error);
  auto error_at = [](double r1, double r2) {
    auto thin = reference;
    thin.inner_radius_um = r1;
    thin.outer_radius_um = r2;
    const double exact = azimuthal_numbers(thin, 17.35).front().m;
    return std::abs(approximate_azimuthal(thin, 17.35, 1) - exact) / exact;
  };
  const double wide = error_at(9.5, 10.5), narrow = error_at(9.75, 10.25);
  EXPECT_LT(wide, 0.01);
  EXPECT_LT(narrow, 0.005);
  EXPECT_LT(narrow, wide / 4);
}

TEST(Assemble, BoundaryParityAndAntinodes) {
  const auto modes = solve_bent_guide(reference);
  EXPECT_EQ(modes.size(), 12u);
  for (const auto& m : modes) {
    double peak = 0;
    for (int i = 0; i <= 200; ++i) peak = std::max(peak, std::abs(m.radial(0.5 + i / 200.0)));
    EXPECT_LT(std::abs(m.radial(0.5)) / peak, 1e-6);
    EXPECT_LT(std::abs(m.radial(1.5)) / peak, 1e-6);
    if (m.par == parity::odd) EXPECT_EQ(m.field(1.0, 0.0), 0.0);
    EXPECT_NEAR(m.vertical(m.half_height * (1 - 1e-12)), m.vertical(m.half_height * (1 + 1e-12)), 1e-9);
    EXPECT_NEAR(m.n_eff, m.m / (2 * std::numbers::pi / 0.8 * m.mean_radius), 1e-12);
    EXPECT_EQ(m.physical, m.n_eff > reference.clad_index + 0.05);
  }
  const auto& fund = find(modes, 1, 1);
  std::vector<double> slope_r, slope_z;
  for (int i = 0; i < 200; ++i) slope_r.push_back(fund.radial(0.5 + (i + 1) / 200.0) - fund.radial(0.5 + i / 200.0));
  for (int i = 0; i < 200; ++i) slope_z.push_back(fund.vertical(-0.6 + 1.2 * (i + 1) / 200) - fund.vertical(-0.6 + 1.2 * i / 200));
  EXPECT_EQ(sign_changes(slope_r), 1);
  EXPECT_EQ(sign_changes(slope_z), 1);
}

TEST(MeanRadius, ReferenceModesAndUniformField) {
  const auto modes = solve_bent_guide(reference);
  EXPECT_NEAR(find(modes, 1, 1).mean_radius, 1.29, 0.05);
  EXPECT_NEAR(find(modes, 3, 1).mean_radius, 1.00, 0.05);

  bent_mode_solution flat;
  flat.order = 0.0;
  flat.h = 1e-8;
  flat.gamma = std::numbers::pi / 2;
  const auto s = reference;
  const double w = flat.radial(1.0);
  EXPECT_GT(std::abs(w), 0.0);
  EXPECT_NEAR(mean_radius(flat, s), (1.5 * 1.5 - 0.5 * 0.5) / 2, 1e-6);
}

TEST(Qff, TransformedRadialEquationHolds) {
  for (const auto& m : solve_bent_guide(reference)) {
    const auto rep = qff_transform_check(m, reference);
    EXPECT_LT(rep.max_residual, 1e-6) << m.p << "," << m.q;
    EXPECT_GT(rep.samples, 1000);
  }
}

TEST(Qff, DimensionCoefficient) {
  EXPECT_DOUBLE_EQ(qff_potential_coefficient(2), -0.25);
  EXPECT_DOUBLE_EQ(qff_potential_coefficient(3), 0.0);
  EXPECT_DOUBLE_EQ(qff_potential_coefficient(1), 0.0);
  EXPECT_DOUBLE_EQ(qff_potential_coefficient(4), 0.75);
}

TEST(Validation, RejectsBadSpecs) {
  auto s = reference;
  s.inner_radius_um = 1.5;
  EXPECT_THROW(solve_bent_guide(s), error);
  s = reference;
  s.clad_index = 2.3;
  EXPECT_THROW(solve_bent_guide(s), error);
  s = reference;
  s.half_height_um = 0;
  EXPECT_THROW(solve_bent_guide(s), error);
  s = reference;
  s.wavelength_um = -1;
  EXPECT_THROW(validate(s), error);
}
