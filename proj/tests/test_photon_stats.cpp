#include <cmath>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <gtest/gtest.h>

#include "pwb/photon_stats.hpp"

using namespace pwb;

TEST(G2, NamedStates) {
  EXPECT_DOUBLE_EQ(g2_from_moments(coherent_moments(3.7)), 1.0);
  EXPECT_DOUBLE_EQ(g2_from_moments(fock_moments(2)), 0.5);
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(g2_from_moments(fock_moments(n)), 1.0 - 1.0 / n, 1e-15);
  for (double x : {0.01, 0.7, 3.0}) EXPECT_NEAR(g2_from_moments(thermal_moments(x)), 2.0, 1e-12);
  EXPECT_THROW(g2_from_moments(fock_moments(0)), error);
}

TEST(G2, Classification) {
  EXPECT_EQ(classify(0.5), light_class::sub_poissonian);
  EXPECT_EQ(classify(1.0), light_class::poissonian);
  EXPECT_EQ(classify(2.0), light_class::super_poissonian);
  EXPECT_EQ(to_string(classify(0.0)), "sub-poissonian");
}

TEST(Thermal, Moments) {
  const auto m = thermal_moments(std::log(2.0));
  EXPECT_NEAR(m.mean, 1.0, 1e-14);
  EXPECT_NEAR(m.variance, 2.0, 1e-13);
  EXPECT_LT(thermal_moments(50.0).mean, 1e-20);
  EXPECT_THROW(thermal_moments(0.0), error);
}

TEST(Tmsv, Moments) {
  const auto v = tmsv_moments(0.0);
  EXPECT_EQ(v.mode.mean, 0.0);
  EXPECT_EQ(v.mode.variance, 0.0);
  const auto t = tmsv_moments(1.0);
  EXPECT_NEAR(t.mode.mean, 1.3811, 1e-4);
  EXPECT_NEAR(t.mode.variance, 3.29, 5e-3);
  EXPECT_NEAR(t.mode.variance, t.mode.mean + t.mode.mean * t.mode.mean, 1e-13);
  EXPECT_EQ(t.difference_variance, 0.0);
  EXPECT_EQ(t.correlation, 1.0);
  for (double r : {0.05, 0.5, 2.0}) {
    const auto s = tmsv_moments(r);
    EXPECT_GT(s.mode.variance, s.mode.mean);
    EXPECT_NEAR(g2_from_moments(s.mode), 2.0, 1e-12);
  }
  EXPECT_THROW(tmsv_moments(-0.1), error);
}

TEST(Poisson, DeterministicUnderSeed) {
  const auto a = simulate_poisson(1e3, 1.0, 7), b = simulate_poisson(1e3, 1.0, 7), c = simulate_poisson(1e3, 1.0, 8);
  EXPECT_EQ(a.arrival_times, b.arrival_times);
  EXPECT_NE(a.arrival_times, c.arrival_times);
  EXPECT_TRUE(std::is_sorted(a.arrival_times.begin(), a.arrival_times.end()));
  EXPECT_EQ(poisson_count(1e3, 1.0, 7), a.arrival_times.size());
  EXPECT_THROW(simulate_poisson(0.0, 1.0, 1), error);
}

TEST(Poisson, CountsMatchPoissonLaw) {
  const int reps = 100000;
  std::vector<double> counts(reps);
  std::map<std::size_t, int> hist;
  for (int i = 0; i < reps; ++i) {
    const auto k = poisson_count(100.0, 1.0, counter_rng::derive(2024, static_cast<std::uint64_t>(i)));
    counts[static_cast<std::size_t>(i)] = static_cast<double>(k);
    ++hist[k];
  }
  const auto m = counts_moments(counts);
  EXPECT_NEAR(m.mean, 100.0, 2.0);
  EXPECT_NEAR(m.variance, 100.0, 2.0);

  const boost::math::poisson_distribution<> law(100.0);
  double chi2 = 0;
  int bins = 0;
  double tail_obs = 0, tail_exp = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    const double e = reps * boost::math::pdf(law, static_cast<double>(k));
    const double o = hist.count(k) ? hist[k] : 0;
    if (e < 5) {
      tail_obs += o;
      tail_exp += e;
      continue;
    }
    chi2 += (o - e) * (o - e) / e;
    ++bins;
  }
  chi2 += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
  const boost::math::chi_squared_distribution<> ref(bins);
  EXPECT_GT(boost::math::cdf(boost::math::complement(ref, chi2)), 1e-3);
}

TEST(Poisson, ShortHorizonIsUsuallyEmpty) {
  int empty = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) empty += simulate_poisson(1.0, 1e-4, s).arrival_times.empty();
  EXPECT_GE(empty, 995);
}

TEST(Poisson, WaitingTimesAreMemoryless) {
  const auto rec = simulate_poisson(1.0, 2e5, 99);
  std::vector<double> gaps;
  for (std::size_t i = 1; i < rec.arrival_times.size(); ++i) gaps.push_back(rec.arrival_times[i] - rec.arrival_times[i - 1]);
  double over_s = 0, over_st = 0, over_t = 0;
  for (double g : gaps) {
    over_s += g > 0.5;
    over_st += g > 1.5;
    over_t += g > 1.0;
  }
  const double n = static_cast<double>(gaps.size());
  EXPECT_NEAR(over_st / over_s, over_t / n, 0.01);
  EXPECT_NEAR(over_t / n, std::exp(-1.0), 0.01);
}

TEST(Branch, TrivialProbabilities) {
  const auto rec = simulate_poisson(1e3, 1.0, 3);
  const auto all = branch(rec, 1.0, 5);
  EXPECT_EQ(all.kept.arrival_times, rec.arrival_times);
  EXPECT_TRUE(all.dropped.arrival_times.empty());
  const auto none = branch(rec, 0.0, 5);
  EXPECT_EQ(none.dropped.arrival_times, rec.arrival_times);
  EXPECT_THROW(branch(rec, 1.5, 5), error);
}

TEST(Branch, ThinningStaysPoissonian) {
  const int reps = 40000;
  std::vector<double> kept(reps), dropped(reps);
  for (int i = 0; i < reps; ++i) {
    const auto rec = simulate_poisson(1e6, 1e-4, counter_rng::derive(11, static_cast<std::uint64_t>(i)));
    const auto b = branch(rec, 0.3, counter_rng::derive(12, static_cast<std::uint64_t>(i)));
    kept[static_cast<std::size_t>(i)] = static_cast<double>(b.kept.arrival_times.size());
    dropped[static_cast<std::size_t>(i)] = static_cast<double>(b.dropped.arrival_times.size());
    ASSERT_EQ(b.kept.arrival_times.size() + b.dropped.arrival_times.size(), rec.arrival_times.size());
  }
  const auto m = counts_moments(kept);
  EXPECT_NEAR(m.mean / 1e-4, 3e5, 0.01 * 3e5);
  EXPECT_NEAR(m.variance / m.mean, 1.0, 0.03);
  EXPECT_LT(std::abs(pearson(kept, dropped)), 0.02);
}

TEST(Pearson, Examples) {
  std::vector<double> x{1, 2, 3, 4, 5}, y = x, z{-1, -2, -3, -4, -5};
  EXPECT_DOUBLE_EQ(pearson(x, y), 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, z), -1.0);
  counter_rng a(1), b(2);
  std::vector<double> u(100000), v(100000);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = a.uniform();
    v[i] = b.uniform();
  }
  EXPECT_LT(std::abs(pearson(u, v)), 0.01);
  std::vector<double> flat{2, 2, 2, 2, 2};
  EXPECT_THROW(pearson(x, flat), error);
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), error);
}
