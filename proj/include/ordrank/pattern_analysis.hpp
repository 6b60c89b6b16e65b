#ifndef ORDRANK_PATTERN_ANALYSIS_HPP
#define ORDRANK_PATTERN_ANALYSIS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordrank/errors.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/pattern.hpp"

namespace ordrank {

/// Moments and SNR(X) = E[X]^2 / Var(X) of a magnitude law.
struct SnrReport {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double snr = 0.0;  ///< +inf for a single-point law.

  bool snr_is_infinite() const noexcept { return std::isinf(snr); }
};

inline SnrReport snr_of_pattern(const PatternDistribution& pattern) {
  SnrReport r;
  r.mean = pattern.mean();
  r.second_moment = pattern.second_moment();
  r.variance = pattern.variance();
  r.snr = (pattern.is_degenerate() || r.variance == 0.0) ? numeric::kInf
                                                         : r.mean * r.mean / r.variance;
  return r;
}

/// A closed-form SNR minimizer together with the bound it attains.
struct MinimalSnr {
  double value = 0.0;
  PatternDistribution pattern;
};

namespace detail {

inline void cross_check(const MinimalSnr& m, const char* which) {
  const double achieved = snr_of_pattern(m.pattern).snr;
  if (!(std::fabs(achieved - m.value) <= 1e-10 * std::max(1.0, m.value))) {
    throw std::logic_error(std::string(which) + ": closed-form pattern does not attain the bound");
  }
}

}  // namespace detail

/// Minimum of SNR(X) over all laws on {1..K}: 4K/(K-1)^2, attained by the two-point
/// law with mass K/(K+1) at 1 and 1/(K+1) at K.
inline MinimalSnr minimal_snr_unconstrained(int K) {
  if (K < 2) throw DomainError("minimal SNR needs K >= 2 (SNR is infinite at K = 1)");
  const double k = K;
  std::vector<double> w(static_cast<std::size_t>(K), 0.0);
  w.front() = k / (k + 1.0);
  w.back() += 1.0 / (k + 1.0);
  MinimalSnr out{4.0 * k / ((k - 1.0) * (k - 1.0)), PatternDistribution::from_weights(w)};
  detail::cross_check(out, "minimal_snr_unconstrained");
  return out;
}

/// Minimum of SNR(X) over non-increasing laws on {1..K}: 24(K+1)/(4K^2-4K+1).
///
/// The minimizer puts p = 2(2K-1)/(K(K-1)(2K+5)) on each of 2..K and the rest,
/// (2K^2+K+2)/(2K^2+5K), on 1.
inline MinimalSnr minimal_snr_monotone(int K) {
  if (K < 2) throw DomainError("minimal SNR needs K >= 2 (SNR is infinite at K = 1)");
  const double k = K;
  const double tail = 2.0 * (2.0 * k - 1.0) / (k * (k - 1.0) * (2.0 * k + 5.0));
  const double head = (2.0 * k * k + k + 2.0) / (2.0 * k * k + 5.0 * k);
  std::vector<double> w(static_cast<std::size_t>(K), tail);
  w.front() = head;
  MinimalSnr out{24.0 * (k + 1.0) / (4.0 * k * k - 4.0 * k + 1.0), PatternDistribution::from_weights(w)};
  detail::cross_check(out, "minimal_snr_monotone");
  return out;
}

}  // namespace ordrank

#endif  // ORDRANK_PATTERN_ANALYSIS_HPP
