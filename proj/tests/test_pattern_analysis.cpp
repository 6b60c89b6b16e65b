#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ordrank/pattern_analysis.hpp"
#include "ordrank/random.hpp"
#include "ordrank/specs.hpp"

using namespace ordrank;

namespace {

// SNR from raw weights, no library code involved.
double raw_snr(const std::vector<double>& w) {
  double s = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    s += w[i];
    m1 += w[i] * k;
    m2 += w[i] * k * k;
  }
  m1 /= s;
  m2 /= s;
  return m1 * m1 / (m2 - m1 * m1);
}

// Uniform point on the simplex (normalized exponentials).
std::vector<double> simplex_point(Rng& rng, int K) {
  std::vector<double> w(static_cast<std::size_t>(K));
  double s = 0;
  for (auto& x : w) s += (x = -std::log(1.0 - uniform01(rng)));
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace

TEST(SnrOfPattern, ReferenceValues) {
  EXPECT_NEAR(snr_of_pattern(abs_pattern(0.1, 4)).snr, 4.5523, 1e-3);
  EXPECT_NEAR(snr_of_pattern(abs_pattern(0.9, 4)).snr, 3.5723, 1e-2);
}

TEST(SnrOfPattern, DegenerateIsInfinite) {
  const std::vector<double> w{1.0};
  EXPECT_TRUE(snr_of_pattern(PatternDistribution::from_weights(w)).snr_is_infinite());
  const std::vector<double> w3{0.0, 1.0, 0.0};
  EXPECT_TRUE(snr_of_pattern(PatternDistribution::from_weights(w3)).snr_is_infinite());
}

TEST(SnrOfPattern, ReportInvariants) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const int K = 2 + static_cast<int>(uniform_below(rng, 10));
    const auto w = simplex_point(rng, K);
    const auto r = snr_of_pattern(PatternDistribution::from_weights(w));
    EXPECT_NEAR(r.variance, r.second_moment - r.mean * r.mean, 1e-12);
    EXPECT_GE(r.variance, 0.0);
    EXPECT_NEAR(r.snr, raw_snr(w), 1e-9 * r.snr);
  }
}

TEST(MinimalSnr, UnconstrainedExamples) {
  const auto k2 = minimal_snr_unconstrained(2);
  EXPECT_NEAR(k2.value, 8.0, 1e-14);
  EXPECT_NEAR(k2.pattern.weight(1), 2.0 / 3, 1e-15);
  EXPECT_NEAR(k2.pattern.weight(2), 1.0 / 3, 1e-15);
  const auto k4 = minimal_snr_unconstrained(4);
  EXPECT_NEAR(k4.value, 16.0 / 9, 1e-14);
  EXPECT_NEAR(k4.pattern.weight(1), 0.8, 1e-15);
  EXPECT_EQ(k4.pattern.weight(2), 0.0);
  EXPECT_EQ(k4.pattern.weight(3), 0.0);
  EXPECT_NEAR(k4.pattern.weight(4), 0.2, 1e-15);
  EXPECT_NEAR(k4.pattern.mean(), 1.6, 1e-15);
  EXPECT_NEAR(k4.pattern.variance(), 1.44, 1e-14);
  EXPECT_THROW(minimal_snr_unconstrained(1), DomainError);
}

TEST(MinimalSnr, MonotoneExamples) {
  EXPECT_NEAR(minimal_snr_monotone(2).value, 8.0, 1e-14);
  EXPECT_EQ(minimal_snr_monotone(2).pattern.K(), 2);
  const auto k4 = minimal_snr_monotone(4);
  EXPECT_NEAR(k4.value, 120.0 / 49, 1e-14);
  EXPECT_NEAR(k4.pattern.weight(1), 38.0 / 52, 1e-15);
  for (int k = 2; k <= 4; ++k) EXPECT_NEAR(k4.pattern.weight(k), 14.0 / 156, 1e-15);
  EXPECT_NEAR(k4.pattern.mean(), 20.0 / 13, 1e-14);
  EXPECT_NEAR(k4.pattern.second_moment(), 10.0 / 3, 1e-14);
  EXPECT_THROW(minimal_snr_monotone(0), DomainError);
}

TEST(MinimalSnr, ClosedFormsAgreeWithConstructedPatterns) {
  for (int K = 2; K <= 12; ++K) {
    const double k = K;
    const auto u = minimal_snr_unconstrained(K);
    const auto m = minimal_snr_monotone(K);
    EXPECT_NEAR(u.value, 4 * k / ((k - 1) * (k - 1)), 1e-12);
    EXPECT_NEAR(m.value, 24 * (k + 1) / (4 * k * k - 4 * k + 1), 1e-12);
    EXPECT_NEAR(snr_of_pattern(u.pattern).snr, u.value, 1e-12 * u.value);
    EXPECT_NEAR(snr_of_pattern(m.pattern).snr, m.value, 1e-12 * m.value);
    const auto w = m.pattern.weights();
    EXPECT_TRUE(std::is_sorted(w.rbegin(), w.rend())) << "monotone optimizer must be non-increasing, K=" << K;
    if (K == 2) {
      EXPECT_NEAR(m.value, u.value, 1e-12);
    } else {
      EXPECT_GT(m.value, u.value);
    }
  }
}

TEST(MinimalSnr, RandomSimplexSearchNeverBeatsBounds) {
  Rng rng(20240);
  for (int K : {3, 4, 6}) {
    const double bound_u = minimal_snr_unconstrained(K).value;
    const double bound_m = minimal_snr_monotone(K).value;
    double best_u = numeric::kInf, best_m = numeric::kInf;
    for (int t = 0; t < 10000; ++t) {
      auto w = simplex_point(rng, K);
      best_u = std::min(best_u, raw_snr(w));
      std::sort(w.rbegin(), w.rend());
      best_m = std::min(best_m, raw_snr(w));
    }
    EXPECT_GE(best_u, bound_u - 1e-9) << "K=" << K;
    EXPECT_GE(best_m, bound_m - 1e-9) << "K=" << K;
  }
}

TEST(PatternFromPsi, ShiftInvariance) {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const int K = 1 + static_cast<int>(uniform_below(rng, 8));
    std::vector<double> psi(static_cast<std::size_t>(K));
    for (auto& v : psi) v = -std::ldexp(static_cast<double>(uniform_below(rng, 1 << 20)), -16);
    // power-of-two shift on dyadic psi: psi + C is exact, so the weights must be identical
    std::vector<double> shifted = psi;
    for (auto& v : shifted) v += 8.0;
    EXPECT_EQ(pattern_from_psi(psi), pattern_from_psi(shifted));
    // arbitrary shift: equal up to rounding of psi + C
    const double C = 100.0 * (uniform01(rng) - 0.5);
    std::vector<double> arbitrary = psi;
    for (auto& v : arbitrary) v += C;
    const auto a = pattern_from_psi(psi), b = pattern_from_psi(arbitrary);
    for (int k = 1; k <= K; ++k) EXPECT_NEAR(a.weight(k), b.weight(k), 1e-13);
  }
}
