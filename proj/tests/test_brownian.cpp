#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "rilab/brownian.hpp"
#include "rilab/lattice.hpp"
#include "rilab/rng.hpp"
#include "rilab/stats.hpp"

using namespace rilab;

TEST(Survival1d, SeriesValues) {
  EXPECT_NEAR(survival_1d(1.0, 3), 0.37082, 1e-4);
  EXPECT_NEAR(survival_1d(1.0), 0.37082, 1e-4);
  EXPECT_LE(survival_1d(8.0), 4 / M_PI * std::exp(-M_PI * M_PI * 8 / 8));
  EXPECT_LE(survival_1d(8.0), 6.6e-5);
  EXPECT_GT(survival_1d(0.5), survival_1d(1.0));
  EXPECT_GT(survival_1d(1.0), survival_1d(2.0));
}

TEST(Survival1d, Errors) {
  EXPECT_THROW(survival_1d(1.0, 0), InputError);
  EXPECT_THROW(survival_1d(0.0), InputError);
  EXPECT_THROW(survival_1d(-1.0), InputError);
}

TEST(SurvivalCube, PowersOfInterval) {
  EXPECT_EQ(survival_cube(0.7, 1), survival_1d(0.7));
  EXPECT_NEAR(survival_cube(1.0, 3), std::pow(0.37082, 3), 5e-4);
  double prev = 1.0;
  for (double t = 0.01; t < 10; t *= 1.1) {
    for (int d = 1; d <= 5; ++d) {
      const double s = survival_cube(t, d);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, survival_cube(t, 1));
      EXPECT_NEAR(s, std::pow(survival_cube(t, 1), d), 1e-15);
    }
    EXPECT_LE(survival_cube(t, 3), prev + 1e-15);
    prev = survival_cube(t, 3);
  }
}

TEST(DensitySigma1, IntegratesToOne) {
  const ExitLaw law{3};
  auto f = [](double t) { return density_sigma1(t, 3); };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0;
  const double cuts[] = {law.t_floor, 0.1, 0.5, 2, 8, law.t_ceiling};
  for (int i = 0; i < 5; ++i) total += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 10, 1e-13);
  EXPECT_NEAR(total, 1.0, 1e-6);
  EXPECT_NEAR(total, survival_cube(law.t_floor, 3) - survival_cube(law.t_ceiling, 3), 1e-10);
}

TEST(DensitySigma1, NonNegativeOnGrid) {
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.02 + i * (40.0 - 0.02) / 999;
    EXPECT_GE(density_sigma1(t, 3), 0.0);
  }
}

TEST(DensitySigma1, DerivativeOfSurvival) {
  const double h = 1e-4;
  for (const double t : {0.5, 1.0, 2.0}) {
    const double fd = (survival_cube(t + h, 3) - survival_cube(t - h, 3)) / (2 * h);
    EXPECT_NEAR(-fd, density_sigma1(t, 3), 1e-5);
  }
}

TEST(DensitySigma1, RefusesBelowFloor) { EXPECT_THROW(density_sigma1(0.01, 3), InputError); }

TEST(LaplaceSigma1, OneDimensionalClosedForm) {
  for (const double lam : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(laplace_sigma1(lam, 1), 1 / std::cosh(std::sqrt(2 * lam)), 1e-8) << lam;
  }
  EXPECT_NEAR(laplace_sigma1(0.5, 1), 0.648054, 1e-6);
}

TEST(LaplaceSigma1, RangeMonotoneConvex) {
  EXPECT_EQ(laplace_sigma1(0.0, 3), 1.0);
  const double h = 0.05;
  double prev = 1.0;
  for (int i = 1; i < 100; ++i) {
    const double lam = i * h;
    const double v = laplace_sigma1(lam, 3);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
    const double second = laplace_sigma1(lam + h, 3) - 2 * v + laplace_sigma1(lam - h, 3);
    EXPECT_GE(second, -1e-8);
  }
}

TEST(LaplaceSigma1, Errors) {
  EXPECT_THROW(laplace_sigma1(-1, 3), InputError);
  EXPECT_THROW(laplace_sigma1(1, 3, 1e-14), NumericalError);
}

TEST(LaplaceSigma1, AgreesWithSampledMean) {
  const double lam = 0.659463 * 3;
  const int n = 100000;
  std::vector<double> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    RandomStream rng(2, static_cast<std::uint64_t>(i), stream_tag::sigma);
    v.push_back(std::exp(-lam * sample_sigma1(3, rng)));
  }
  const auto m = mean_of(v);
  EXPECT_NEAR(laplace_sigma1(lam, 3), m.mean, 3 * m.std_error);
}

TEST(MeanSigma1, OneDimensionIsOne) {
  EXPECT_NEAR(mean_sigma1(1), 1.0, 1e-9);
  EXPECT_NEAR(mean_sigma1(3), 0.4497, 1e-3);
}

TEST(SampleSigma1, KsAndMeans) {
  for (const int d : {1, 3}) {
    const int n = 100000;
    std::vector<double> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) {
      RandomStream rng(7, static_cast<std::uint64_t>(i), stream_tag::sigma);
      const double t = sample_sigma1(d, rng);
      ASSERT_GT(t, 0.0);
      v.push_back(t);
    }
    const double D = ks_distance(v, [d](double t) { return 1 - survival_cube(t, d); });
    EXPECT_LE(D, 0.01) << "d=" << d;
    const auto m = mean_of(v);
    if (d == 1) EXPECT_NEAR(m.mean, 1.0, 0.02);
    EXPECT_NEAR(m.mean, mean_sigma1(d), 3 * m.std_error);
  }
}

TEST(MixtureRule, MassAndMoments) {
  const auto rule = MixtureRule::build(3);
  EXPECT_NEAR(rule.total_mass(), 1.0, 1e-8);
  double mean = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) mean += rule.weights[i] * rule.nodes[i];
  EXPECT_NEAR(mean, mean_sigma1(3), 1e-7);
  for (const double lam : {0.5, 2.0, 6.0}) {
    double lt = rule.mass_below;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) lt += rule.weights[i] * std::exp(-lam * rule.nodes[i]);
    EXPECT_NEAR(lt, laplace_sigma1(lam, 3), 1e-6);
  }
}
