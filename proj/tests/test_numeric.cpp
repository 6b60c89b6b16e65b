#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ordrank/numeric.hpp"
#include "ordrank/random.hpp"
#include "oracles.hpp"

using namespace ordrank;

TEST(NormalCdf, MatchesLongDoubleOracleOnGrid) {
  for (double x = -8.0; x <= 8.0; x += 0.0625) {
    const double want = static_cast<double>(oracle::normal_cdf_ld(x));
    EXPECT_NEAR(numeric::normal_cdf(x), want, 1e-12 * std::max(1.0, want)) << "x=" << x;
    if (x < 0) {
      EXPECT_NEAR(numeric::normal_cdf(x) / want, 1.0, 1e-12) << "relative, x=" << x;
    }
  }
}

TEST(NormalCdf, KnownValues) {
  EXPECT_EQ(numeric::normal_cdf(0.0), 0.5);
  // mpmath, 40 digits
  EXPECT_NEAR(numeric::normal_cdf(0.3), 0.617911422188952637, 1e-15);
  EXPECT_NEAR(numeric::normal_cdf(0.500208359376550153), 0.691535813564496155, 1e-15);
}

TEST(LogNormalCdf, BothTails) {
  // mpmath, 40 digits
  EXPECT_NEAR(numeric::log_normal_cdf(-40.0), -804.6084420137537881, 1e-10);
  EXPECT_NEAR(numeric::log_normal_cdf(-10.0), -53.231285150512470578, 1e-11);
  EXPECT_NEAR(numeric::log_normal_cdf(-3.0), -6.6077262215103495, 1e-13);
  EXPECT_NEAR(numeric::log_normal_cdf(0.5), -0.36894641528865639, 1e-15);
  EXPECT_NEAR(numeric::log_normal_cdf(6.0) / -9.865876455243757e-10, 1.0, 1e-12);
  // continuous across the branch points
  for (double x : {-37.0, 5.0}) {
    EXPECT_NEAR(numeric::log_normal_cdf(x - 1e-9), numeric::log_normal_cdf(x + 1e-9),
                1e-7 * std::fabs(numeric::log_normal_cdf(x)) + 1e-15);
  }
}

TEST(NormalQuantile, TwoSidedLevels) {
  EXPECT_NEAR(numeric::normal_two_sided_z(0.99), 2.5758293035489008, 1e-13);
  EXPECT_NEAR(numeric::normal_two_sided_z(0.95), 1.9599639845400542, 1e-13);
  EXPECT_THROW(numeric::normal_two_sided_z(1.0), DomainError);
  EXPECT_THROW(numeric::normal_two_sided_z(0.0), DomainError);
}

TEST(Elementary, SigmoidSoftplusLogCosh) {
  EXPECT_NEAR(numeric::sigmoid(1.0), 0.731058578630004879, 1e-16);
  EXPECT_EQ(numeric::sigmoid(-800.0), 0.0);
  EXPECT_EQ(numeric::sigmoid(800.0), 1.0);
  EXPECT_NEAR(numeric::softplus(800.0), 800.0, 1e-12);
  EXPECT_NEAR(numeric::softplus(0.0), std::log(2.0), 1e-16);
  EXPECT_NEAR(numeric::log_cosh(0.5), 0.120114506958277525, 1e-16);
  EXPECT_NEAR(numeric::log_cosh(1000.0), 1000.0 - std::log(2.0), 1e-12);
  EXPECT_EQ(numeric::log_cosh(-0.7), numeric::log_cosh(0.7));
}

TEST(Elementary, LogSumExp) {
  const std::vector<double> big{1000.0, 1000.0};
  EXPECT_NEAR(numeric::log_sum_exp(big), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> with_neg_inf{-numeric::kInf, 0.0};
  EXPECT_EQ(numeric::log_sum_exp(with_neg_inf), 0.0);
  const std::vector<double> all_neg_inf{-numeric::kInf};
  EXPECT_EQ(numeric::log_sum_exp(all_neg_inf), -numeric::kInf);
}

TEST(ExactDecimal, RoundTripsBitExactly) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(uniform01(rng) - 0.5, static_cast<int>(uniform_below(rng, 200)) - 100);
    EXPECT_EQ(numeric::parse_exact_decimal(numeric::exact_decimal(v)), v);
  }
  EXPECT_EQ(numeric::parse_exact_decimal("-inf"), -numeric::kInf);
  EXPECT_THROW(numeric::parse_exact_decimal("1.5x"), DataError);
}

TEST(Random, SeedLineageIsStableAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
  Rng a(derive_seed(5, 0, 0)), b(derive_seed(5, 0, 0));
  for (int i = 0; i < 100; ++i) {
    const double u = uniform01(a);
    EXPECT_EQ(u, uniform01(b));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
