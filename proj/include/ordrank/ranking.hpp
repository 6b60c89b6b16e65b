#ifndef ORDRANK_RANKING_HPP
#define ORDRANK_RANKING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ordrank/errors.hpp"
#include "ordrank/model.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/pattern_analysis.hpp"
#include "ordrank/random.hpp"

namespace ordrank {

/// True preference vector theta*. Item i is preferred to j when theta[i] > theta[j].
struct PreferenceVector {
  std::vector<double> theta;
  bool centered = false;

  std::size_t size() const noexcept { return theta.size(); }
  double gamma(std::size_t i, std::size_t j) const { return theta[i] - theta[j]; }

  /// Subtracts the mean so that sum(theta) = 0.
  static PreferenceVector centered_from(std::vector<double> values) {
    if (values.empty()) return {std::move(values), true};
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    for (double& v : values) v -= mean;
    return {std::move(values), true};
  }

  /// n equally spaced, centered, strictly decreasing values with spacing `gap`;
  /// item 0 is the most preferred.
  static PreferenceVector equally_spaced(std::size_t n, double gap) {
    std::vector<double> v(n);
    const double mid = 0.5 * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = gap * (mid - static_cast<double>(i));
    return {std::move(v), true};
  }
};

/// Outcomes y_ij^(l) over L rounds, stored once per unordered pair in i<j
/// orientation; y_ji = -y_ij is materialized on demand. Pairs may be absent.
class ComparisonDataset {
public:
  ComparisonDataset(std::size_t n, std::size_t L)
      : n_(n), L_(L), present_(pair_count(n), 0), outcomes_(pair_count(n) * L, 0) {
    if (n < 2) throw DomainError("a comparison dataset needs at least two items");
    if (L < 1) throw DomainError("a comparison dataset needs at least one round");
  }

  static std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

  std::size_t n() const noexcept { return n_; }
  std::size_t L() const noexcept { return L_; }

  /// Index of the unordered pair {i, j}, i < j, in row-major upper-triangle order.
  std::size_t pair_index(std::size_t i, std::size_t j) const {
    check_pair(i, j);
    if (i > j) std::swap(i, j);
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  /// Stores outcomes oriented as y_ij (i may exceed j; values are flipped as needed).
  void set_pair(std::size_t i, std::size_t j, std::span<const int> y) {
    if (y.size() != L_) throw CorruptData("pair outcome sequence must have exactly L entries");
    const std::size_t p = pair_index(i, j);
    const int orient = i < j ? 1 : -1;
    for (std::size_t l = 0; l < L_; ++l) {
      if (y[l] == 0) throw CorruptData("zero outcome in comparison data");
      if (std::abs(y[l]) > 127) throw CorruptData("outcome magnitude too large");
      outcomes_[p * L_ + l] = static_cast<std::int8_t>(orient * y[l]);
    }
    present_[p] = 1;
  }

  void set_outcome(std::size_t i, std::size_t j, std::size_t l, int y) {
    if (y == 0) throw CorruptData("zero outcome in comparison data");
    if (std::abs(y) > 127) throw CorruptData("outcome magnitude too large");
    if (l >= L_) throw CorruptData("round index out of range");
    const std::size_t p = pair_index(i, j);
    outcomes_[p * L_ + l] = static_cast<std::int8_t>(i < j ? y : -y);
  }

  void mark_present(std::size_t i, std::size_t j) { present_[pair_index(i, j)] = 1; }

  bool has_pair(std::size_t i, std::size_t j) const { return present_[pair_index(i, j)] != 0; }

  bool is_complete() const {
    return std::all_of(present_.begin(), present_.end(), [](auto v) { return v != 0; });
  }

  /// y_ij^(l) with orientation applied.
  int outcome(std::size_t i, std::size_t j, std::size_t l) const {
    const int y = outcomes_[pair_index(i, j) * L_ + l];
    return i < j ? y : -y;
  }

  /// Stored i<j outcomes for the pair.
  std::span<const std::int8_t> upper(std::size_t i, std::size_t j) const {
    return {outcomes_.data() + pair_index(i, j) * L_, L_};
  }

  int max_magnitude() const {
    int m = 0;
    for (std::size_t p = 0; p < present_.size(); ++p) {
      if (!present_[p]) continue;
      for (std::size_t l = 0; l < L_; ++l) m = std::max(m, std::abs(static_cast<int>(outcomes_[p * L_ + l])));
    }
    return m;
  }

private:
  void check_pair(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_ || i == j) throw DomainError("invalid item pair");
  }

  std::size_t n_;
  std::size_t L_;
  std::vector<std::uint8_t> present_;
  std::vector<std::int8_t> outcomes_;
};

/// Counting scores from raw outcomes (ordinal) and their signs (binary).
///
/// The *_totals vectors hold the integer sums before division by L; they sum to
/// zero exactly.
struct ScorePair {
  std::vector<double> ordinal;
  std::vector<double> binary;
  std::vector<std::int64_t> ordinal_totals;
  std::vector<std::int64_t> binary_totals;
  std::size_t L = 0;
};

struct TwoItemMetrics {
  double A = 0.0;  ///< mean outcome
  double B = 0.0;  ///< mean sign
};

inline TwoItemMetrics two_item_metrics(std::span<const int> outcomes) {
  if (outcomes.empty()) throw DomainError("two_item_metrics needs at least one outcome");
  std::int64_t sum = 0;
  std::int64_t signs = 0;
  for (int y : outcomes) {
    if (y == 0) throw CorruptData("zero outcome in comparison data");
    sum += y;
    signs += y > 0 ? 1 : -1;
  }
  const auto L = static_cast<double>(outcomes.size());
  return {static_cast<double>(sum) / L, static_cast<double>(signs) / L};
}

inline ScorePair count_scores(const ComparisonDataset& data) {
  const std::size_t n = data.n();
  ScorePair out;
  out.L = data.L();
  out.ordinal_totals.assign(n, 0);
  out.binary_totals.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!data.has_pair(i, j)) continue;
      std::int64_t sum = 0;
      std::int64_t signs = 0;
      for (auto y : data.upper(i, j)) {
        sum += y;
        signs += y > 0 ? 1 : -1;
      }
      out.ordinal_totals[i] += sum;
      out.ordinal_totals[j] -= sum;
      out.binary_totals[i] += signs;
      out.binary_totals[j] -= signs;
    }
  }
  const auto L = static_cast<double>(out.L);
  out.ordinal.resize(n);
  out.binary.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.ordinal[i] = static_cast<double>(out.ordinal_totals[i]) / L;
    out.binary[i] = static_cast<double>(out.binary_totals[i]) / L;
  }
  return out;
}

/// Fraction of item pairs with (s_i - s_j)(theta_i - theta_j) <= 0; score ties count
/// as errors.
template <typename T>
double kendall_tau(std::span<const T> scores, std::span<const double> theta) {
  if (scores.size() != theta.size()) throw DomainError("kendall_tau: score and theta lengths differ");
  const std::size_t n = scores.size();
  if (n < 2) throw DomainError("kendall_tau needs at least two items");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ds = static_cast<double>(scores[i]) - static_cast<double>(scores[j]);
      const double dt = theta[i] - theta[j];
      // Compare signs rather than the product so tiny differences cannot underflow.
      const bool agree = (ds > 0.0 && dt > 0.0) || (ds < 0.0 && dt < 0.0);
      errors += agree ? 0 : 1;
    }
  }
  return static_cast<double>(errors) / static_cast<double>(n * (n - 1) / 2);
}

inline double kendall_tau(std::span<const double> scores, const PreferenceVector& theta) {
  return kendall_tau<double>(scores, theta.theta);
}

struct ExpectedScores {
  std::vector<double> ordinal;  ///< S*_i = E[X] * sum_j tanh(phi(gamma_ij))
  std::vector<double> binary;   ///< S~*_i = sum_j tanh(phi(gamma_ij))
};

inline ExpectedScores expected_scores(const OrdinalModel& model, const PreferenceVector& theta) {
  const std::size_t n = theta.size();
  ExpectedScores out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) out.binary[i] += std::tanh(model.phi(theta.gamma(i, j)));
    }
    out.ordinal[i] = model.pattern().mean() * out.binary[i];
  }
  return out;
}

struct TwoItemLimits {
  double prob_binary = 0.0;   ///< limit of P(B > 0)
  double prob_ordinal = 0.0;  ///< limit of P(A > 0)
};

/// CLT limits of P(B > 0) and P(A > 0) for two items at gap gamma > 0.
///
/// P(A > 0) uses sinh(phi) / sqrt(1 + cosh^2(phi) / SNR(X)), an equivalent form of
/// tanh / sqrt(1/SNR + 1 - tanh^2) that avoids 1 - tanh^2 cancellation and returns
/// exactly the binary value when SNR(X) is infinite.
inline TwoItemLimits asymptotic_two_item(const OrdinalModel& model, double gamma, long L) {
  if (!(gamma > 0.0)) throw DomainError("asymptotic_two_item needs gamma > 0 (item 1 preferred)");
  if (L < 1) throw DomainError("asymptotic_two_item needs L >= 1");
  const double p = model.phi(gamma);
  const double root_l = std::sqrt(static_cast<double>(L));
  const double snr_x = snr_of_pattern(model.pattern()).snr;
  const double ch = std::cosh(p);
  const double inflation = std::isinf(snr_x) ? 1.0 : std::sqrt(1.0 + ch * ch / snr_x);
  const double sh = std::sinh(p);
  return {numeric::normal_cdf(root_l * sh), numeric::normal_cdf(root_l * sh / inflation)};
}

struct TauLimits {
  double ordinal = 0.0;
  double binary = 0.0;
};

/// Large-L limits of E[tau(S, theta)] and E[tau(S~, theta)] for the full comparison
/// graph:
///
///   tau -> 2/(n(n-1)) sum_{i<j} Phi(-sqrt(2nL) D_ij / sqrt(c + 1 - V_ij)),
///
/// with c = 1/SNR(X) for ordinal scores and c = 0 for binary scores, and for i
/// ranked above j
///
///   D_ij = (1/2n) [2 t_ij + sum_{k != i,j} (t_ik - t_jk)],
///   V_ij = (1/2n) [4 t_ij^2 + sum_{k != i,j} (t_ik^2 + t_jk^2)],   t_ab = tanh(phi(gamma_ab)).
inline TauLimits asymptotic_tau(const OrdinalModel& model, const PreferenceVector& theta, long L) {
  const std::size_t n = theta.size();
  if (n < 2) throw DomainError("asymptotic_tau needs at least two items");
  if (L < 1) throw DomainError("asymptotic_tau needs L >= 1");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return theta.theta[a] > theta.theta[b]; });
  for (std::size_t r = 0; r + 1 < n; ++r) {
    if (!(theta.theta[order[r]] > theta.theta[order[r + 1]])) {
      throw DomainError("asymptotic_tau needs strictly ordered theta (no ties)");
    }
  }
  std::vector<double> t(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) t[a * n + b] = std::tanh(model.phi(theta.gamma(a, b)));

  const double snr_x = snr_of_pattern(model.pattern()).snr;
  const double inv_snr = std::isinf(snr_x) ? 0.0 : 1.0 / snr_x;
  const double nn = static_cast<double>(n);
  const double scale = std::sqrt(2.0 * nn * static_cast<double>(L));
  double sum_ord = 0.0;
  double sum_bin = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = r + 1; s < n; ++s) {
      const std::size_t i = order[r];
      const std::size_t j = order[s];
      double d = 2.0 * t[i * n + j];
      double v = 4.0 * t[i * n + j] * t[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        d += t[i * n + k] - t[j * n + k];
        v += t[i * n + k] * t[i * n + k] + t[j * n + k] * t[j * n + k];
      }
      d /= 2.0 * nn;
      v /= 2.0 * nn;
      sum_ord += numeric::normal_cdf(-scale * d / std::sqrt(inv_snr + 1.0 - v));
      sum_bin += numeric::normal_cdf(-scale * d / std::sqrt(1.0 - v));
    }
  }
  const double pairs = nn * (nn - 1.0) / 2.0;
  return {sum_ord / pairs, sum_bin / pairs};
}

/// Draws a complete dataset with y_ij ~ G(phi, psi, theta_i - theta_j, K).
inline ComparisonDataset simulate_dataset(const OrdinalModel& model, const PreferenceVector& theta,
                                          std::size_t L, Rng& rng) {
  ComparisonDataset data(theta.size(), L);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    for (std::size_t j = i + 1; j < theta.size(); ++j) {
      data.set_pair(i, j, model.sample(theta.gamma(i, j), rng, L));
    }
  }
  return data;
}

/// Reads the `i,j,l,y` CSV (zero-based items, one-based rounds). Items and L are
/// inferred from the maxima; every listed pair must have all L rounds.
inline ComparisonDataset load_comparison_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open comparison file '" + path + "'");
  struct Row {
    std::size_t i, j, l;
    int y;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  std::size_t L = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("i,j,l,y", 0) == 0) continue;
    std::istringstream ss(line);
    long long i = 0, j = 0, l = 0, y = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ss >> i >> c1 >> j >> c2 >> l >> c3 >> y) || c1 != ',' || c2 != ',' || c3 != ',' || i < 0 || j < 0 ||
        l < 1 || i == j) {
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed comparison row '" + line + "'");
    }
    if (y == 0) throw CorruptData(path + ":" + std::to_string(line_no) + ": zero outcome");
    rows.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(l),
                    static_cast<int>(y)});
    n = std::max({n, rows.back().i + 1, rows.back().j + 1});
    L = std::max(L, rows.back().l);
  }
  if (rows.empty()) throw DataError("comparison file '" + path + "' has no rows");
  ComparisonDataset data(n, L);
  std::vector<std::uint8_t> seen(ComparisonDataset::pair_count(n) * L, 0);
  std::vector<std::uint32_t> filled(ComparisonDataset::pair_count(n), 0);
  for (const auto& r : rows) {
    const std::size_t p = data.pair_index(r.i, r.j);
    if (seen[p * L + r.l - 1]++) {
      throw CorruptData("comparison file '" + path + "': pair (" + std::to_string(r.i) + "," + std::to_string(r.j) +
                        ") repeats round " + std::to_string(r.l));
    }
    data.set_outcome(r.i, r.j, r.l - 1, r.y);
    data.mark_present(r.i, r.j);
    ++filled[p];
  }
  for (std::size_t p = 0; p < filled.size(); ++p) {
    if (filled[p] != 0 && filled[p] != L) {
      throw CorruptData("comparison file '" + path + "': a pair does not have exactly L = " + std::to_string(L) +
                        " rounds");
    }
  }
  return data;
}

}  // namespace ordrank

#endif  // ORDRANK_RANKING_HPP
