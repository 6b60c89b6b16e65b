#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ordrank/large_deviations.hpp"
#include "ordrank/minimize.hpp"
#include "ordrank/specs.hpp"
#include "oracles.hpp"

using namespace ordrank;

namespace {

// -min over lambda of the summed direct log-MGFs of Z_ij (n-item) on a fixed grid.
double nitem_grid_rate(const OrdinalModel& m, const PreferenceVector& theta, std::size_t i, std::size_t j,
                       bool binarized, double half_width, double step) {
  const auto f = [&](double lam) {
    const auto term = [&](std::size_t a, std::size_t b, double mult) {
      const double g = theta.gamma(a, b);
      return binarized ? oracle::direct_log_mgf_sign(m, g, mult * lam) : oracle::direct_log_mgf(m, g, mult * lam);
    };
    double acc = term(i, j, 2.0);
    for (std::size_t k = 0; k < theta.size(); ++k) {
      if (k == i || k == j) continue;
      acc += term(i, k, 1.0) + term(k, j, 1.0);
    }
    return acc;
  };
  return -oracle::grid_min(f, -half_width, half_width, step);
}

}  // namespace

TEST(Minimizer, FindsInteriorAndExpandsBracket) {
  const auto quad = [](double x) { return (x - 3.25) * (x - 3.25) + 1.0; };
  const auto r = minimize_convex(quad, -1.0, 1.0, {});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x, 3.25, 1e-8);
  EXPECT_NEAR(r.fx, 1.0, 1e-14);
  const auto far = minimize_convex([](double x) { return std::cosh(x + 40.0); }, -1.0, 1.0, {});
  EXPECT_NEAR(far.x, -40.0, 1e-7);
}

TEST(RateBinary, Examples) {
  const OrdinalModel m(StrengthLink::identity(), abs_pattern(0.2, 3));
  const auto r = rate_at_zero_binary(m, 0.5);
  EXPECT_NEAR(r.rate, 0.120114506958277525, 1e-15);
  EXPECT_EQ(r.argmin_lambda, -0.5);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(rate_at_zero_binary(m, -0.5).rate, r.rate);
  const auto zero = rate_at_zero_binary(m, 0.0);
  EXPECT_EQ(zero.rate, 0.0);
  EXPECT_TRUE(zero.boundary);
  EXPECT_LT(rate_at_zero_binary(m, 1e-6).rate, 1e-12);
}

TEST(RateOrdinal, DegeneratePatternEqualsBinary) {
  const std::vector<double> w{1.0, 0.0, 0.0};
  const OrdinalModel m(StrengthLink::identity(), PatternDistribution::from_weights(w));
  for (double g : {0.1, 0.5, 1.3}) {
    const auto r = rate_at_zero_ordinal(m, g);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.rate, rate_at_zero_binary(m, g).rate, 1e-12);
  }
}

TEST(RateOrdinal, UniformK2StrictlyInsideAndMatchesGrid) {
  const OrdinalModel m(StrengthLink::identity(), PatternDistribution::uniform(2));
  const auto r = rate_at_zero_ordinal(m, 0.5);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.rate, 0.0);
  EXPECT_LT(r.rate, 0.120114506958277525);
  const double grid = -oracle::grid_min([&](double l) { return oracle::direct_log_mgf(m, 0.5, l); }, -5.5, 5.5, 1e-4);
  EXPECT_NEAR(r.rate, grid, 1e-6);
  // first-order condition at the argmin
  const double h = 1e-5;
  EXPECT_NEAR((m.log_mgf(0.5, r.argmin_lambda + h) - m.log_mgf(0.5, r.argmin_lambda - h)) / (2 * h), 0.0, 1e-6);
}

TEST(RateOrdinal, FuzzOrderingAndGridSoundness) {
  Rng rng(606);
  const std::vector<std::string> links{"cubic", "identity", "tanhsig", "logitnorm"};
  for (int t = 0; t < 40; ++t) {
    const int K = 2 + static_cast<int>(uniform_below(rng, 5));
    const OrdinalModel m(parse_link_spec(links[uniform_below(rng, links.size())]),
                         uniform_below(rng, 2) ? abs_pattern(uniform01(rng) * 1.5, K) : square_pattern(uniform01(rng), K));
    const double g = (0.05 + 0.95 * uniform01(rng)) * (uniform_below(rng, 2) ? 1 : -1);
    const auto ord = rate_at_zero_ordinal(m, g);
    const auto bin = rate_at_zero_binary(m, g);
    ASSERT_TRUE(ord.converged);
    EXPECT_GT(ord.rate, 0.0);
    EXPECT_GT(bin.rate, ord.rate);
    // optimizer minimum is no worse than any point of a 10^4-point grid
    const double hw = std::fabs(m.phi(g)) + 5.0;
    const double grid_min = oracle::grid_min([&](double l) { return m.log_mgf(g, l); }, -hw, hw, 2 * hw / 1e4);
    EXPECT_LE(-ord.rate, grid_min + 1e-9);
  }
}

TEST(RateNItem, TwoItemsReduceToPairRates) {
  const OrdinalModel m(StrengthLink::identity(), abs_pattern(0.3, 4));
  const PreferenceVector theta{{0.2, -0.2}, true};
  EXPECT_NEAR(rate_at_zero_nitem(m, theta, 0, 1, false).rate, rate_at_zero_ordinal(m, 0.4).rate, 1e-12);
  EXPECT_NEAR(rate_at_zero_nitem(m, theta, 0, 1, true).rate, rate_at_zero_binary(m, 0.4).rate, 1e-12);
}

TEST(RateNItem, ThreeItemsMatchGridOracle) {
  const OrdinalModel m(StrengthLink::identity(), PatternDistribution::uniform(2));
  const auto theta = PreferenceVector::equally_spaced(3, 0.3);
  for (bool binarized : {false, true}) {
    const auto r = rate_at_zero_nitem(m, theta, 0, 1, binarized);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.rate, nitem_grid_rate(m, theta, 0, 1, binarized, 3.0, 1e-4), 1e-6) << binarized;
  }
}

TEST(RateNItem, BinarizedDominatesOverFuzz) {
  Rng rng(77);
  const std::vector<std::string> links{"cubic", "identity", "tanhsig", "logitnorm"};
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + uniform_below(rng, 3);
    std::vector<double> v(n);
    for (auto& x : v) x = uniform01(rng) - 0.5;
    const auto theta = PreferenceVector::centered_from(v);
    const OrdinalModel m(parse_link_spec(links[uniform_below(rng, links.size())]),
                         abs_pattern(uniform01(rng), 2 + static_cast<int>(uniform_below(rng, 4))));
    const std::size_t i = uniform_below(rng, n);
    const std::size_t j = (i + 1 + uniform_below(rng, n - 1)) % n;
    const auto ord = rate_at_zero_nitem(m, theta, i, j, false);
    const auto bin = rate_at_zero_nitem(m, theta, i, j, true);
    ASSERT_TRUE(ord.converged && bin.converged);
    EXPECT_GT(ord.rate, 0.0);
    EXPECT_GT(bin.rate, ord.rate);
  }
}

TEST(RateNItem, EdgeCases) {
  const OrdinalModel m(StrengthLink::identity(), PatternDistribution::uniform(2));
  const PreferenceVector theta{{0.1, 0.1, -0.2}, true};
  EXPECT_TRUE(rate_at_zero_nitem(m, theta, 0, 1, false).boundary);
  EXPECT_EQ(rate_at_zero_nitem(m, theta, 0, 1, false).rate, 0.0);
  EXPECT_THROW(rate_at_zero_nitem(m, theta, 1, 1, false), DomainError);
  EXPECT_THROW(rate_at_zero_nitem(m, theta, 0, 3, false), DomainError);
}

TEST(ErrorDecay, PredictionAndCrossover) {
  RateResult zero;
  for (long L : {0L, 10L, 1000L}) EXPECT_EQ(error_decay_prediction(zero, L), 1.0);
  RateResult bin, ord;
  bin.rate = 0.02;
  ord.rate = 0.015;
  double prev = 2.0;
  for (long L = 0; L < 2000; L += 100) {
    const double ratio = error_decay_prediction(bin, L) / error_decay_prediction(ord, L);
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  EXPECT_EQ(predicted_crossover(bin, ord, 10.0), static_cast<long>(std::ceil(std::log(10.0) / 0.005)));
  EXPECT_FALSE(predicted_crossover(ord, bin).has_value());
  RateResult bad;
  bad.converged = false;
  EXPECT_THROW(error_decay_prediction(bad, 10), ConvergenceError);
}

TEST(ErrorDecay, TwoItemBinaryOvertakes) {
  // the binary rate exceeds the ordinal one, so binary error decays faster for large L
  const OrdinalModel m(StrengthLink::identity(), abs_pattern(0.1, 4));
  const auto bin = rate_at_zero_binary(m, 0.15);
  const auto ord = rate_at_zero_ordinal(m, 0.15);
  EXPECT_GT(bin.rate, ord.rate);
  EXPECT_LT(error_decay_prediction(bin, 5000), error_decay_prediction(ord, 5000));
  ASSERT_TRUE(predicted_crossover(bin, ord).has_value());
}
