#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pwb/dispersion.hpp"
#include "pwb/materials.hpp"

using namespace pwb;

static long double sellmeier_ld(long double a0, long double a1, long double a2, long double a3, long double a4,
                                long double l) {
  const long double l2 = l * l;
  return std::sqrt(a0 + a1 / (l2 - a2) + a3 / (l2 - a4));
}

TEST(RefractiveIndex, KtpZAtGreen) {
  const double n = refractive_index(materials::ktp_z(), 0.532);
  EXPECT_NEAR(n, static_cast<double>(sellmeier_ld(4.59423L, 0.06206L, 0.04763L, 110.807L, 86.122L, 0.532L)), 1e-14);
  EXPECT_NEAR(n, 1.8887, 1e-4);
}

TEST(RefractiveIndex, ConstantIndex) {
  for (double l : {0.3, 0.8, 1.55, 4.0}) EXPECT_DOUBLE_EQ(refractive_index({4, 0, 0, 0, 0}, l), 2.0);
}

TEST(RefractiveIndex, UnitDenominator) {
  EXPECT_NEAR(refractive_index({1, 0.5, 0.04, 0, 0}, std::sqrt(1.04)), std::sqrt(1.5), 1e-15);
}

TEST(RefractiveIndex, PoleProximity) {
  const sellmeier_set s{2.0, 0.1, 0.25, 0, 0};
  try {
    refractive_index(s, 0.5);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::pole_proximity);
  }
}

TEST(RefractiveIndex, NegativeRadicand) {
  try {
    refractive_index({0.1, -1.0, 0.0, 0, 0}, 1.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::negative_radicand);
  }
}

TEST(RefractiveIndex, NormalDispersionIsMonotone) {
  for (const auto& s : {materials::ktp_x(), materials::ktp_y(), materials::ktp_z()}) {
    double prev = refractive_index(s, 0.35);
    for (double l = 0.36; l < 4.0; l += 0.01) {
      const double n = refractive_index(s, l);
      EXPECT_LT(n, prev) << l;
      prev = n;
    }
  }
}

TEST(PolingPeriod, ReferenceTemperature) {
  const auto c = materials::ppktp_396();
  EXPECT_EQ(poling_period(c, 298.0), 4.01);
  EXPECT_EQ(poling_period(c, 350.0), 4.01);
}

TEST(PolingPeriod, LinearExpansion) {
  auto c = materials::ppktp_396();
  c.alpha_per_kelvin = 1e-5;
  EXPECT_NEAR(poling_period(c, c.t0_kelvin + 10), 4.01 * 1.0001, 1e-15);
  EXPECT_EQ(poling_period(c, c.t0_kelvin), 4.01);
}

TEST(PolingPeriod, Unpoled) {
  crystal_spec c;
  c.z = materials::ktp_z();
  try {
    poling_period(c, 298);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unpoled);
  }
  EXPECT_EQ(grating_wavevector(c, 298), 0.0);
}

TEST(Wavevector, Examples) {
  EXPECT_NEAR(wavevector_magnitude(1.0, 2 * std::numbers::pi), 1.0, 1e-15);
  EXPECT_NEAR(wavevector_magnitude(2.3, 0.8), 18.0642, 1e-4);
  EXPECT_NEAR(wavevector_magnitude(1.0, 0.8), 7.853982, 1e-6);
}

TEST(Axes, FastSlowFollowIndexOrder) {
  const auto c = materials::ppktp_type2();
  EXPECT_EQ(index_of(c, polarization::slow, 0.78), index_of(c, polarization::z, 0.78));
  EXPECT_EQ(index_of(c, polarization::fast, 0.78), index_of(c, polarization::y, 0.78));
  EXPECT_EQ(parse_polarization("slow"), polarization::slow);
  EXPECT_THROW(parse_polarization("w"), error);
}

TEST(Axes, MissingAxisIsReported) {
  const auto c = materials::ppktp_396();
  EXPECT_THROW(index_of(c, polarization::x, 0.8), error);
}
