#ifndef ORDRANK_TESTS_ORACLES_HPP
#define ORDRANK_TESTS_ORACLES_HPP

// Independent reference computations used by the unit and acceptance suites.
// Nothing here calls into the library's numerical kernels except the link
// itself (phi) and the pattern weights, which are inputs.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "ordrank/model.hpp"

namespace oracle {

/// erf by its Maclaurin series for |x| <= 3 and erfc by a Lentz continued
/// fraction beyond, all in long double.
inline long double erfc_ld(long double x) {
  const long double pi = 3.141592653589793238462643383279502884L;
  if (std::fabs(x) <= 3.0L) {
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
      term *= -x * x / n;
      const long double add = term / (2 * n + 1);
      sum += add;
      if (std::fabs(add) < 1e-30L) break;
    }
    return 1.0L - 2.0L / std::sqrt(pi) * sum;
  }
  if (x < 0) return 2.0L - erfc_ld(-x);
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  const long double tiny = 1e-300L;
  long double f = x, C = x, D = 0.0L;
  for (int n = 1; n < 500; ++n) {
    const long double a = n * 0.5L;
    D = x + a * D;
    if (std::fabs(D) < tiny) D = tiny;
    C = x + a / C;
    if (std::fabs(C) < tiny) C = tiny;
    D = 1.0L / D;
    const long double delta = C * D;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-21L) break;
  }
  return std::exp(-x * x) / std::sqrt(pi) / f;
}

inline long double normal_cdf_ld(long double x) {
  return 0.5L * erfc_ld(-x / std::sqrt(2.0L));
}

/// P(Y = k) straight from the unnormalized table exp(phi(sign(k) gamma)) * w_|k|.
inline std::vector<long double> pmf_table(const ordrank::OrdinalModel& m, double gamma) {
  const int K = m.K();
  std::vector<long double> t;
  long double z = 0.0L;
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    const long double v =
        std::exp(static_cast<long double>(m.phi(k > 0 ? gamma : -gamma))) * m.pattern().weight(std::abs(k));
    t.push_back(v);
    z += v;
  }
  for (auto& v : t) v /= z;
  return t;  // index 0 is k = -K
}

inline int outcome_of(int K, std::size_t idx) {
  const int k = static_cast<int>(idx) - K;
  return k >= 0 ? k + 1 : k;
}

struct TwoItemExact {
  double prob_A_pos = 0.0;
  double prob_B_pos = 0.0;
};

/// Exhaustive enumeration over all (2K)^L outcome sequences.
inline TwoItemExact enumerate_two_item(const ordrank::OrdinalModel& m, double gamma, int L) {
  const auto pmf = pmf_table(m, gamma);
  const std::size_t base = pmf.size();
  std::size_t total = 1;
  for (int l = 0; l < L; ++l) total *= base;
  long double pa = 0.0L, pb = 0.0L;
  std::vector<std::size_t> digits(static_cast<std::size_t>(L), 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    long double p = 1.0L;
    long sum = 0, signs = 0;
    for (int l = 0; l < L; ++l) {
      const std::size_t d = c % base;
      c /= base;
      p *= pmf[d];
      const int y = outcome_of(m.K(), d);
      sum += y;
      signs += y > 0 ? 1 : -1;
    }
    if (sum > 0) pa += p;
    if (signs > 0) pb += p;
  }
  return {static_cast<double>(pa), static_cast<double>(pb)};
}

/// log E[exp(lambda Y)] as a direct sum over the pmf table.
inline double direct_log_mgf(const ordrank::OrdinalModel& m, double gamma, double lambda) {
  const auto pmf = pmf_table(m, gamma);
  long double s = 0.0L;
  for (std::size_t i = 0; i < pmf.size(); ++i) s += pmf[i] * std::exp(static_cast<long double>(lambda) * outcome_of(m.K(), i));
  return static_cast<double>(std::log(s));
}

/// log E[exp(lambda sign(Y))].
inline double direct_log_mgf_sign(const ordrank::OrdinalModel& m, double gamma, double lambda) {
  const auto pmf = pmf_table(m, gamma);
  long double s = 0.0L;
  for (std::size_t i = 0; i < pmf.size(); ++i) s += pmf[i] * std::exp(lambda * (outcome_of(m.K(), i) > 0 ? 1.0L : -1.0L));
  return static_cast<double>(std::log(s));
}

/// min over a uniform grid on [lo, hi] with the given step.
inline double grid_min(const std::function<double(double)>& f, double lo, double hi, double step) {
  double best = f(lo);
  const long n = static_cast<long>(std::ceil((hi - lo) / step));
  for (long i = 1; i <= n; ++i) best = std::min(best, f(std::min(hi, lo + i * step)));
  return best;
}

}  // namespace oracle

#endif  // ORDRANK_TESTS_ORACLES_HPP
