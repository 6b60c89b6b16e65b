#ifndef ORDRANK_MODEL_HPP
#define ORDRANK_MODEL_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ordrank/errors.hpp"
#include "ordrank/link.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/pattern.hpp"
#include "ordrank/random.hpp"

namespace ordrank {

/// Mean, variance and signal-to-noise ratio of one comparison outcome Y.
struct OutcomeMoments {
  double mean = 0.0;
  double variance = 0.0;
  double snr = 0.0;  ///< +inf when tanh^2(phi(gamma)) rounds to 1.

  bool snr_is_infinite() const noexcept { return std::isinf(snr); }
};

/// Inverse-CDF sampler over the 2K outcomes {-K..-1, 1..K} at a fixed gamma.
///
/// Build once per gamma and reuse; instances are immutable and may be shared, the
/// generator passed to draw() may not.
class OutcomeSampler {
public:
  OutcomeSampler() = default;
  OutcomeSampler(std::vector<double> cumulative, std::vector<int> outcomes)
      : cumulative_(std::move(cumulative)), outcomes_(std::move(outcomes)) {}

  int operator()(Rng& rng) const {
    const double u = uniform01(rng);
    const std::size_t last = outcomes_.size() - 1;
    for (std::size_t i = 0; i < last; ++i) {
      if (u < cumulative_[i]) return outcomes_[i];
    }
    return outcomes_[last];
  }

  std::size_t size() const noexcept { return outcomes_.size(); }

private:
  std::vector<double> cumulative_;
  std::vector<int> outcomes_;
};

/// The ordinal comparison model G(phi, psi, gamma, K).
///
///   P(Y = k) = exp(phi(sign(k) gamma) + psi(k)) / Psi(gamma),   k in {-K..-1, 1..K},
///
/// with Psi(gamma) = 2 cosh(phi(gamma)) sum_k e^{psi(k)}. With normalized weights w
/// this is P(Y = k) = w_|k| * sigmoid(2 sign(k) phi(gamma)), which is how it is
/// evaluated (in log space for the sigmoid factor).
class OrdinalModel {
public:
  OrdinalModel(StrengthLink link, PatternDistribution pattern)
      : link_(std::move(link)), pattern_(std::move(pattern)) {}

  const StrengthLink& link() const noexcept { return link_; }
  const PatternDistribution& pattern() const noexcept { return pattern_; }
  int K() const noexcept { return pattern_.K(); }

  double phi(double gamma) const { return link_(gamma); }

  double log_pmf(double gamma, int k) const {
    check_outcome(k);
    const double w = pattern_.weight(std::abs(k));
    if (w == 0.0) return -numeric::kInf;
    const double signed_phi = phi(k > 0 ? gamma : -gamma);
    return std::log(w) - numeric::softplus(-2.0 * signed_phi);
  }

  double pmf(double gamma, int k) const {
    check_outcome(k);
    const double signed_phi = phi(k > 0 ? gamma : -gamma);
    return pattern_.weight(std::abs(k)) * numeric::sigmoid(2.0 * signed_phi);
  }

  /// Outcome probabilities ordered -K, ..., -1, 1, ..., K.
  std::vector<double> pmf_table(double gamma) const {
    const double p_pos = prob_positive(gamma);
    const double p_neg = numeric::sigmoid(-2.0 * phi(gamma));
    const int K = this->K();
    std::vector<double> table(static_cast<std::size_t>(2 * K));
    for (int m = 1; m <= K; ++m) {
      table[static_cast<std::size_t>(K - m)] = pattern_.weight(m) * p_neg;
      table[static_cast<std::size_t>(K + m - 1)] = pattern_.weight(m) * p_pos;
    }
    return table;
  }

  /// P(Y > 0) = sigmoid(2 phi(gamma)); does not depend on the pattern.
  double prob_positive(double gamma) const { return numeric::sigmoid(2.0 * phi(gamma)); }

  OutcomeMoments moments(double gamma) const {
    const double t = std::tanh(phi(gamma));
    const double t2 = t * t;
    OutcomeMoments m;
    m.mean = t * pattern_.mean();
    m.variance = pattern_.second_moment() - m.mean * m.mean;
    if (t2 >= 1.0) {
      m.snr = numeric::kInf;
      return m;
    }
    const double inv_snr_x = pattern_.variance() / (pattern_.mean() * pattern_.mean());
    m.snr = t2 / (inv_snr_x + 1.0 - t2);
    return m;
  }

  /// log E[e^{lambda Y}] = log sum_k w_k cosh(phi + lambda k) - log cosh(phi).
  double log_mgf(double gamma, double lambda) const {
    if (!std::isfinite(lambda)) throw DomainError("log_mgf needs a finite lambda");
    const double p = phi(gamma);
    std::array<double, 64> small{};
    std::vector<double> big;
    std::span<double> terms;
    const auto K = static_cast<std::size_t>(this->K());
    if (K <= small.size()) {
      terms = std::span<double>(small.data(), K);
    } else {
      big.resize(K);
      terms = big;
    }
    for (std::size_t i = 0; i < K; ++i) {
      const double w = pattern_.weights()[i];
      terms[i] = w > 0.0 ? std::log(w) + numeric::log_cosh(p + lambda * static_cast<double>(i + 1))
                         : -numeric::kInf;
    }
    return numeric::log_sum_exp(terms) - numeric::log_cosh(p);
  }

  OutcomeSampler sampler(double gamma) const {
    const std::vector<double> table = pmf_table(gamma);
    const int K = this->K();
    std::vector<double> cumulative(table.size());
    std::vector<int> outcomes(table.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      acc += table[i];
      cumulative[i] = acc;
      const int idx = static_cast<int>(i);
      outcomes[i] = idx < K ? idx - K : idx - K + 1;
    }
    return {std::move(cumulative), std::move(outcomes)};
  }

  std::vector<int> sample(double gamma, Rng& rng, std::size_t count) const {
    std::vector<int> out;
    out.reserve(count);
    if (count == 0) return out;
    const OutcomeSampler draw = sampler(gamma);
    for (std::size_t i = 0; i < count; ++i) out.push_back(draw(rng));
    return out;
  }

private:
  void check_outcome(int k) const {
    if (k == 0 || std::abs(k) > K()) {
      throw DomainError("outcome k must lie in {-K..-1, 1..K}");
    }
  }

  StrengthLink link_;
  PatternDistribution pattern_;
};

/// Elementwise sign; the image follows G(phi, 0, gamma, 1).
inline std::vector<int> binarize(std::span<const int> outcomes) {
  std::vector<int> out;
  out.reserve(outcomes.size());
  for (int y : outcomes) {
    if (y == 0) throw CorruptData("zero outcome cannot be binarized (ties are outside the model)");
    out.push_back(y > 0 ? 1 : -1);
  }
  return out;
}

}  // namespace ordrank

#endif  // ORDRANK_MODEL_HPP
