#ifndef ORDRANK_LARGE_DEVIATIONS_HPP
#define ORDRANK_LARGE_DEVIATIONS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

#include "ordrank/errors.hpp"
#include "ordrank/minimize.hpp"
#include "ordrank/model.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/ranking.hpp"

namespace ordrank {

/// Cramer rate at zero, I(0) = sup_lambda { -log E[e^{lambda Z}] }, of a
/// misranking event, with the optimizer's diagnostics.
struct RateResult {
  double rate = 0.0;
  double argmin_lambda = 0.0;
  int iterations = 0;
  bool converged = true;
  bool boundary = false;  ///< zero preference gap: rate is 0 by symmetry
};

/// Binary (sign) outcomes: I(0) = log cosh(phi(gamma)), attained at lambda = -phi(gamma).
inline RateResult rate_at_zero_binary(const OrdinalModel& model, double gamma) {
  RateResult r;
  if (gamma == 0.0) {
    r.boundary = true;
    return r;
  }
  const double p = model.phi(gamma);
  r.rate = numeric::log_cosh(p);
  r.argmin_lambda = -p;
  return r;
}

namespace detail {

inline MinimizeOptions rate_minimizer_options() { return {1e-10, 200, 64}; }

template <typename F>
RateResult rate_from_log_mgf(F&& log_mgf, double half_width) {
  const MinimizeResult m = minimize_convex(log_mgf, -half_width, half_width, rate_minimizer_options());
  RateResult r;
  r.rate = std::max(0.0, -m.fx);
  r.argmin_lambda = m.x;
  r.iterations = m.iterations;
  r.converged = m.converged;
  return r;
}

/// log E[e^{lambda sign(Y)}] for Y at gap gamma, given phi(gamma).
inline double binary_log_mgf(double phi, double lambda) {
  return numeric::log_cosh(phi + lambda) - numeric::log_cosh(phi);
}

}  // namespace detail

/// Ordinal outcomes: I(0) = log cosh(phi) - inf_lambda log sum_k w_k cosh(phi + lambda k),
/// computed as -min_lambda log E[e^{lambda Y}].
inline RateResult rate_at_zero_ordinal(const OrdinalModel& model, double gamma) {
  if (gamma == 0.0) {
    RateResult r;
    r.boundary = true;
    return r;
  }
  const double p = model.phi(gamma);
  return detail::rate_from_log_mgf([&](double lambda) { return model.log_mgf(gamma, lambda); },
                                   std::fabs(p) + 5.0);
}

/// Rate of the event S_i <= S_j (or its reverse) for the n-item counting scores.
///
/// The per-round score difference is Z_ij = 2 y_ij + sum_{k != i,j} (y_ik + y_kj); its
/// log-MGF factorizes over the independent comparisons, with the direct comparison
/// evaluated at 2 lambda. With `binarized`, every y is replaced by sign(y).
inline RateResult rate_at_zero_nitem(const OrdinalModel& model, const PreferenceVector& theta, std::size_t i,
                                     std::size_t j, bool binarized) {
  const std::size_t n = theta.size();
  if (i >= n || j >= n || i == j) throw DomainError("rate_at_zero_nitem needs two distinct item indices");
  if (theta.theta[i] == theta.theta[j]) {
    RateResult r;
    r.boundary = true;
    return r;
  }
  struct Term {
    double gamma;
    double phi;
    double multiplier;
  };
  std::vector<Term> terms;
  terms.reserve(2 * n);
  const auto add = [&](std::size_t a, std::size_t b, double mult) {
    const double g = theta.gamma(a, b);
    terms.push_back({g, model.phi(g), mult});
  };
  add(i, j, 2.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    add(i, k, 1.0);
    add(k, j, 1.0);
  }
  double max_phi = 0.0;
  for (const auto& t : terms) max_phi = std::max(max_phi, std::fabs(t.phi));
  const auto log_mgf = [&](double lambda) {
    double acc = 0.0;
    for (const auto& t : terms) {
      const double l = t.multiplier * lambda;
      acc += binarized ? detail::binary_log_mgf(t.phi, l) : model.log_mgf(t.gamma, l);
    }
    return acc;
  };
  return detail::rate_from_log_mgf(log_mgf, max_phi + 5.0);
}

/// Leading-order error-probability scale e^{-L * rate}.
inline double error_decay_prediction(const RateResult& rate, long L) {
  if (!rate.converged) throw ConvergenceError("rate optimization did not converge");
  if (L < 0) throw DomainError("L must be non-negative");
  return std::exp(-static_cast<double>(L) * rate.rate);
}

/// Heuristic crossover size: the smallest L with e^{-L I_binary} * factor <= e^{-L I_ordinal},
/// i.e. the binary error scale is `factor` times smaller. Empty when I_binary <= I_ordinal.
inline std::optional<long> predicted_crossover(const RateResult& binary, const RateResult& ordinal,
                                               double factor = 10.0) {
  if (!(factor >= 1.0)) throw DomainError("crossover factor must be at least 1");
  const double gap = binary.rate - ordinal.rate;
  if (!(gap > 0.0)) return std::nullopt;
  return static_cast<long>(std::ceil(std::log(factor) / gap));
}

}  // namespace ordrank

#endif  // ORDRANK_LARGE_DEVIATIONS_HPP
