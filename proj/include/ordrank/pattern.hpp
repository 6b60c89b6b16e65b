#ifndef ORDRANK_PATTERN_HPP
#define ORDRANK_PATTERN_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ordrank/errors.hpp"
#include "ordrank/numeric.hpp"

namespace ordrank {

/// Law of the outcome magnitude X on {1..K}: weights[k-1] = P(X = k).
///
/// This is the canonical form of the pattern function psi; psi(k) = -inf is a zero
/// weight, and psi + C maps to the same weights.
class PatternDistribution {
public:
  /// Accepts weights summing to one within 1e-12 verbatim; other positive sums are
  /// renormalized.
  static PatternDistribution from_weights(std::span<const double> weights) {
    if (weights.empty()) throw InvalidPattern("pattern needs K >= 1 weights");
    double sum = 0.0;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw InvalidPattern("pattern weights must be finite and non-negative");
      }
      sum += w;
    }
    if (!(sum > 0.0)) throw InvalidPattern("pattern has no positive weight");
    PatternDistribution out;
    out.weights_.assign(weights.begin(), weights.end());
    if (std::fabs(sum - 1.0) > 1e-12) {
      for (double& w : out.weights_) w /= sum;
    }
    out.compute_moments();
    return out;
  }

  static PatternDistribution uniform(int K) {
    if (K < 1) throw DomainError("K must be at least 1");
    std::vector<double> w(static_cast<std::size_t>(K), 1.0 / K);
    return from_weights(w);
  }

  int K() const noexcept { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const noexcept { return weights_; }
  /// P(X = k) for 1 <= k <= K.
  double weight(int k) const { return weights_.at(static_cast<std::size_t>(k - 1)); }

  double mean() const noexcept { return mean_; }
  double second_moment() const noexcept { return second_; }
  double variance() const noexcept { return variance_; }
  int support_size() const noexcept { return support_; }
  bool is_degenerate() const noexcept { return support_ == 1; }

  friend bool operator==(const PatternDistribution&, const PatternDistribution&) = default;

private:
  PatternDistribution() = default;

  void compute_moments() {
    mean_ = second_ = 0.0;
    support_ = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      mean_ += weights_[i] * k;
      second_ += weights_[i] * k * k;
      support_ += weights_[i] > 0.0 ? 1 : 0;
    }
    variance_ = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double d = static_cast<double>(i + 1) - mean_;
      variance_ += weights_[i] * d * d;
    }
  }

  std::vector<double> weights_;
  double mean_ = 0.0;
  double second_ = 0.0;
  double variance_ = 0.0;
  int support_ = 0;
};

/// Softmax of psi in log space; -inf entries become zero weights.
inline PatternDistribution pattern_from_psi(std::span<const double> psi) {
  if (psi.empty()) throw DomainError("pattern_from_psi needs K >= 1 values");
  double hi = -numeric::kInf;
  for (double v : psi) {
    if (std::isnan(v) || v == numeric::kInf) {
      throw InvalidPattern("psi values must be finite or -inf");
    }
    hi = std::max(hi, v);
  }
  if (hi == -numeric::kInf) throw InvalidPattern("all psi values are -inf");
  std::vector<double> w(psi.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    w[i] = std::exp(psi[i] - hi);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return PatternDistribution::from_weights(w);
}

}  // namespace ordrank

#endif  // ORDRANK_PATTERN_HPP
