#ifndef ORDRANK_NUMERIC_HPP
#define ORDRANK_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "ordrank/errors.hpp"

namespace ordrank::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// log of the standard normal CDF, accurate in both tails.
///
/// For x > 5 the upper-tail complement is used through log1p; for very negative x,
/// where erfc underflows, the Mills-ratio asymptotic series takes over.
inline double log_normal_cdf(double x) {
  if (x > 5.0) {
    return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
  }
  if (x > -37.0) {
    return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  }
  const double z2 = 1.0 / (x * x);
  const double series = 1.0 - z2 * (1.0 - 3.0 * z2 * (1.0 - 5.0 * z2 * (1.0 - 7.0 * z2)));
  return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

/// Two-sided normal quantile helper: z such that P(|Z| <= z) = level.
inline double normal_two_sided_z(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("confidence level must lie in (0,1)");
  }
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + 0.5 * level);
}

/// Numerically stable logistic function.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log(1 + e^x) without overflow.
inline double softplus(double x) {
  if (x > 0.0) {
    return x + std::log1p(std::exp(-x));
  }
  return std::log1p(std::exp(x));
}

/// log(cosh(x)) = |x| + log1p(e^{-2|x|}) - log 2.
inline double log_cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

/// log(sum exp(v)) with max subtraction; -inf entries contribute nothing.
inline double log_sum_exp(std::span<const double> values) {
  double hi = -kInf;
  for (double v : values) hi = std::max(hi, v);
  if (hi == -kInf) return -kInf;
  if (hi == kInf) return kInf;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

/// Decimal form with 17 significant digits; strtod reads it back bit-exactly.
inline std::string exact_decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_exact_decimal(const std::string& s) {
  if (s == "-inf" || s == "-Infinity") return -kInf;
  if (s == "inf" || s == "Infinity") return kInf;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw DataError("not a decimal number: '" + s + "'");
  }
  return v;
}

}  // namespace ordrank::numeric

#endif  // ORDRANK_NUMERIC_HPP
