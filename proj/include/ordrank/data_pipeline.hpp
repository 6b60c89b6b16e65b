#ifndef ORDRANK_DATA_PIPELINE_HPP
#define ORDRANK_DATA_PIPELINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <cerrno>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "ordrank/errors.hpp"
#include "ordrank/model.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/parallel.hpp"
#include "ordrank/random.hpp"

// Ratings -> pairwise rating differences -> split evaluation of sum vs sign-sum
// aggregation.

namespace ordrank {

// ---- ratings -------------------------------------------------------------------

struct RatingRecord {
  std::int64_t user = 0;
  std::int64_t item = 0;
  double rating = 0.0;
  std::optional<std::int64_t> timestamp;

  bool operator==(const RatingRecord&) const = default;
};

/// Ratings with at most one record per (user, item), sorted by (user, item).
struct RatingsTable {
  std::vector<RatingRecord> records;

  std::size_t size() const noexcept { return records.size(); }
};

enum class RatingsFormat { movielens_tab, generic_csv };

inline RatingsFormat parse_ratings_format(const std::string& s) {
  if (s == "movielens-100k-tab" || s == "movielens") return RatingsFormat::movielens_tab;
  if (s == "generic-csv" || s == "csv") return RatingsFormat::generic_csv;
  throw ConfigError("unknown ratings format '" + s + "' (expected movielens-100k-tab|generic-csv)");
}

/// Keeps one record per (user, item): the largest timestamp, and on a tie (or
/// when timestamps are missing) the row that came later in the input.
inline RatingsTable dedup_ratings(std::vector<RatingRecord> rows) {
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a].user != rows[b].user) return rows[a].user < rows[b].user;
    return rows[a].item < rows[b].item;
  });
  RatingsTable table;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const RatingRecord& r = rows[order[k]];
    if (!table.records.empty() && table.records.back().user == r.user && table.records.back().item == r.item) {
      const auto old_ts = table.records.back().timestamp.value_or(std::numeric_limits<std::int64_t>::min());
      const auto new_ts = r.timestamp.value_or(std::numeric_limits<std::int64_t>::min());
      if (new_ts >= old_ts) table.records.back() = r;
      continue;
    }
    table.records.push_back(r);
  }
  return table;
}

namespace detail {

inline bool parse_int64(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == s.c_str() || *end != '\0') return false;
  out = v;
  return true;
}

inline bool parse_finite(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) return false;
  out = v;
  return true;
}

inline std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != ' ' || sep == ' ') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

/// MovieLens 100K `u.data` (user TAB item TAB rating TAB timestamp) or a CSV
/// `user,item,rating[,timestamp]` with an optional header line.
inline RatingsTable load_ratings(const std::string& path, RatingsFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ratings file '" + path + "'");
  const char sep = format == RatingsFormat::movielens_tab ? '\t' : ',';
  std::vector<RatingRecord> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = detail::split_fields(line, sep);
    const auto fail = [&](const std::string& why) {
      return DataError(path + ":" + std::to_string(line_no) + ": " + why + " in row '" + line + "'");
    };
    RatingRecord r;
    const bool want_ts = format == RatingsFormat::movielens_tab;
    if (fields.size() < 3 || fields.size() > 4 || (want_ts && fields.size() != 4)) {
      if (rows.empty() && format == RatingsFormat::generic_csv && line_no == 1) continue;
      throw fail("expected " + std::string(want_ts ? "4" : "3 or 4") + " fields");
    }
    const bool ok = detail::parse_int64(fields[0], r.user) && detail::parse_int64(fields[1], r.item) &&
                    detail::parse_finite(fields[2], r.rating);
    if (!ok) {
      // a non-numeric first line of a CSV is a header
      if (format == RatingsFormat::generic_csv && line_no == 1) continue;
      throw fail("malformed user/item/rating");
    }
    if (fields.size() == 4) {
      std::int64_t ts = 0;
      if (!detail::parse_int64(fields[3], ts)) throw fail("malformed timestamp");
      r.timestamp = ts;
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw DataError("ratings file '" + path + "' contains no ratings");
  return dedup_ratings(std::move(rows));
}

// ---- pairwise differences ----------------------------------------------------

/// Non-zero rating differences for one item pair, oriented item_i - item_j with
/// i < j in the dense index; one entry per user who rated both, in user order.
struct PairSeries {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::vector<double> diffs;

  bool operator==(const PairSeries&) const = default;
};

struct PairComparisons {
  std::vector<std::int64_t> items;  ///< dense index -> original item id (ascending)
  std::vector<PairSeries> pairs;    ///< pairs with at least one non-zero difference, sorted by (i, j)

  std::size_t comparison_count() const {
    std::size_t c = 0;
    for (const auto& p : pairs) c += p.diffs.size();
    return c;
  }

  bool operator==(const PairComparisons&) const = default;
};

inline PairComparisons build_pair_comparisons(const RatingsTable& input, long min_ratings_per_item) {
  if (min_ratings_per_item < 1) throw DomainError("min_ratings_per_item must be at least 1");
  const auto by_user_item = [](const RatingRecord& a, const RatingRecord& b) {
    return a.user != b.user ? a.user < b.user : a.item < b.item;
  };
  // hand-assembled tables may be unsorted; dedup also sorts
  const RatingsTable sorted = std::is_sorted(input.records.begin(), input.records.end(), by_user_item)
                                  ? RatingsTable{}
                                  : dedup_ratings(input.records);
  const RatingsTable& table = sorted.records.empty() ? input : sorted;
  std::map<std::int64_t, long> counts;
  for (const auto& r : table.records) ++counts[r.item];
  PairComparisons out;
  std::map<std::int64_t, std::uint32_t> dense;
  for (const auto& [item, c] : counts) {
    if (c >= min_ratings_per_item) {
      dense[item] = static_cast<std::uint32_t>(out.items.size());
      out.items.push_back(item);
    }
  }
  const std::size_t n = out.items.size();
  if (n < 2) return out;
  std::vector<std::vector<double>> by_pair(n * (n - 1) / 2);
  const auto pair_slot = [n](std::size_t i, std::size_t j) { return i * (2 * n - i - 1) / 2 + (j - i - 1); };

  // records are sorted by (user, item), and dense order follows item order
  std::vector<std::pair<std::uint32_t, double>> user_ratings;
  for (std::size_t k = 0; k < table.records.size();) {
    const std::int64_t user = table.records[k].user;
    user_ratings.clear();
    for (; k < table.records.size() && table.records[k].user == user; ++k) {
      const auto it = dense.find(table.records[k].item);
      if (it != dense.end()) user_ratings.emplace_back(it->second, table.records[k].rating);
    }
    std::sort(user_ratings.begin(), user_ratings.end());
    for (std::size_t a = 0; a < user_ratings.size(); ++a) {
      for (std::size_t b = a + 1; b < user_ratings.size(); ++b) {
        const double d = user_ratings[a].second - user_ratings[b].second;
        if (d != 0.0) by_pair[pair_slot(user_ratings[a].first, user_ratings[b].first)].push_back(d);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto& d = by_pair[pair_slot(i, j)];
      if (!d.empty()) out.pairs.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), std::move(d)});
    }
  }
  return out;
}

// ---- histogram ---------------------------------------------------------------

/// Counts of |difference|. `lower[k]` is the left edge of bin k; with integer
/// data and no custom edges the bins are the magnitudes 1..max, one per integer.
struct Histogram {
  std::vector<double> lower;
  std::vector<double> upper;  ///< exclusive, except the last bin which is closed
  std::vector<std::size_t> counts;
  bool non_increasing = true;
  std::vector<std::string> warnings;
};

inline Histogram ordinal_histogram(const PairComparisons& pairs, std::optional<std::vector<double>> edges = {}) {
  std::vector<double> mags;
  for (const auto& p : pairs.pairs)
    for (double d : p.diffs) mags.push_back(std::fabs(d));
  if (mags.empty()) throw DomainError("histogram of an empty comparison set");
  Histogram h;
  if (edges) {
    if (edges->size() < 2 || !std::is_sorted(edges->begin(), edges->end()) ||
        std::adjacent_find(edges->begin(), edges->end()) != edges->end()) {
      throw ConfigError("histogram edges must be strictly increasing with at least two entries");
    }
    for (std::size_t k = 0; k + 1 < edges->size(); ++k) {
      h.lower.push_back((*edges)[k]);
      h.upper.push_back((*edges)[k + 1]);
    }
    h.counts.assign(h.lower.size(), 0);
    std::size_t outside = 0;
    for (double m : mags) {
      if (m < edges->front() || m > edges->back()) {
        ++outside;
        continue;
      }
      auto it = std::upper_bound(edges->begin(), edges->end(), m);
      std::size_t bin = static_cast<std::size_t>(it - edges->begin()) - 1;
      if (bin >= h.counts.size()) bin = h.counts.size() - 1;
      ++h.counts[bin];
    }
    if (outside) h.warnings.push_back(std::to_string(outside) + " magnitudes fall outside the histogram edges");
  } else {
    const bool integral = std::all_of(mags.begin(), mags.end(), [](double m) { return m == std::floor(m); });
    if (integral) {
      const auto top = static_cast<std::size_t>(*std::max_element(mags.begin(), mags.end()));
      h.counts.assign(top, 0);
      for (std::size_t k = 1; k <= top; ++k) {
        h.lower.push_back(static_cast<double>(k));
        h.upper.push_back(static_cast<double>(k + 1));
      }
      for (double m : mags) ++h.counts[static_cast<std::size_t>(m) - 1];
    } else {
      // one bin per distinct magnitude (quarter-point ratings give a small set)
      std::vector<double> levels = mags;
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      h.lower = levels;
      for (std::size_t k = 0; k < levels.size(); ++k)
        h.upper.push_back(k + 1 < levels.size() ? levels[k + 1] : levels[k]);
      h.counts.assign(levels.size(), 0);
      for (double m : mags)
        ++h.counts[static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), m) - levels.begin())];
    }
  }
  for (std::size_t k = 1; k < h.counts.size(); ++k) {
    if (h.counts[k] > h.counts[k - 1]) h.non_increasing = false;
  }
  if (!h.non_increasing) h.warnings.push_back("magnitude histogram is not non-increasing");
  return h;
}

// ---- t-test ----------------------------------------------------------------------

inline double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw DomainError("Student-t degrees of freedom must be positive");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::students_t(df), t);
}

/// Upper tail P(T > t), accurate far into the tail.
inline double student_t_sf(double t, double df) {
  if (!(df > 0.0)) throw DomainError("Student-t degrees of freedom must be positive");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::students_t(df), t));
}

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
  double mean_difference = 0.0;
  std::size_t n = 0;
  bool degenerate = false;  ///< zero variance of the differences; p is NaN
};

/// Paired two-sided t-test of a against b (d = a - b, df = n - 1).
inline TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DomainError("paired t-test needs equal-length samples");
  if (a.size() < 2) throw DomainError("paired t-test needs at least two pairs");
  TTestResult r;
  r.n = a.size();
  r.df = static_cast<double>(r.n - 1);
  const double n = static_cast<double>(r.n);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] - b[k];
  r.mean_difference = sum / n;
  double ss = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double e = (a[k] - b[k]) - r.mean_difference;
    ss += e * e;
  }
  if (ss == 0.0) {
    r.degenerate = true;
    r.t = r.mean_difference == 0.0 ? 0.0 : std::copysign(numeric::kInf, r.mean_difference);
    r.p = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  r.t = r.mean_difference / se;
  r.p = std::min(1.0, 2.0 * student_t_sf(std::fabs(r.t), r.df));
  return r;
}

// ---- split evaluation ----------------------------------------------------------

enum class TTestPairing { per_pair, per_repetition };

inline TTestPairing parse_pairing(const std::string& s) {
  if (s == "per-pair") return TTestPairing::per_pair;
  if (s == "per-repetition") return TTestPairing::per_repetition;
  throw ConfigError("unknown t-test pairing '" + s + "' (expected per-pair|per-repetition)");
}

inline std::string pairing_name(TTestPairing p) {
  return p == TTestPairing::per_pair ? "per-pair" : "per-repetition";
}

struct EvaluationOptions {
  double train_frac = 0.7;
  long repetitions = 100;
  long min_pair_count = 10;
  std::uint64_t seed = 7;
  TTestPairing pairing = TTestPairing::per_pair;
  int threads = 1;
};

struct PairEvaluation {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::size_t comparisons = 0;
  std::vector<double> ordinal_accuracy;  ///< one entry per repetition
  std::vector<double> binary_accuracy;
};

struct EvaluationReport {
  EvaluationOptions options;
  std::vector<PairEvaluation> pairs;
  std::vector<double> ordinal_by_repetition;  ///< mean over pairs
  std::vector<double> binary_by_repetition;
  std::vector<double> ordinal_by_pair;  ///< mean over repetitions
  std::vector<double> binary_by_pair;
  double mean_ordinal = 0.0;
  double mean_binary = 0.0;
  TTestResult ttest;  ///< binary against ordinal, under options.pairing
};

/// Accuracy of the sign of `aggregate` on the test differences; 0.5 when the
/// aggregate is zero (abstention).
inline double prediction_accuracy(double aggregate, const std::vector<double>& test) {
  if (aggregate == 0.0) return 0.5;
  std::size_t hit = 0;
  for (double d : test) hit += (d > 0.0) == (aggregate > 0.0) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(test.size());
}

/// Repetition `rep` on one pair: shuffle, train on the first round(frac * m)
/// differences (at least one, leaving at least one for testing), score both
/// aggregates on the rest. Returns {ordinal accuracy, binary accuracy}.
inline std::pair<double, double> evaluate_split(const std::vector<double>& diffs, double train_frac, Rng& rng) {
  const std::size_t m = diffs.size();
  std::vector<std::size_t> idx(m);
  for (std::size_t k = 0; k < m; ++k) idx[k] = k;
  for (std::size_t k = m - 1; k > 0; --k) std::swap(idx[k], idx[uniform_below(rng, k + 1)]);
  const auto train = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(m))),
                                             1, m - 1);
  double sum = 0.0;
  long signs = 0;
  for (std::size_t k = 0; k < train; ++k) {
    sum += diffs[idx[k]];
    signs += diffs[idx[k]] > 0.0 ? 1 : -1;
  }
  std::vector<double> test;
  test.reserve(m - train);
  for (std::size_t k = train; k < m; ++k) test.push_back(diffs[idx[k]]);
  return {prediction_accuracy(sum, test), prediction_accuracy(static_cast<double>(signs), test)};
}

inline EvaluationReport evaluate_pair_protocol(const PairComparisons& data, const EvaluationOptions& opt) {
  if (!(opt.train_frac > 0.0 && opt.train_frac < 1.0)) throw DomainError("train_frac must lie in (0,1)");
  if (opt.repetitions < 1) throw DomainError("repetitions must be at least 1");
  const long min_count = std::max<long>(opt.min_pair_count, 2);
  std::vector<std::size_t> eligible;
  for (std::size_t p = 0; p < data.pairs.size(); ++p) {
    if (static_cast<long>(data.pairs[p].diffs.size()) >= min_count) eligible.push_back(p);
  }
  if (eligible.empty()) {
    throw DataError("no item pair has at least " + std::to_string(min_count) + " comparisons");
  }
  const auto reps = static_cast<std::size_t>(opt.repetitions);
  EvaluationReport report;
  report.options = opt;
  // the seed of a pair depends on its (i, j) identity, not on which other pairs are eligible
  report.pairs = parallel_map<PairEvaluation>(eligible.size(), opt.threads, [&](std::size_t e) {
    const PairSeries& s = data.pairs[eligible[e]];
    PairEvaluation ev{s.i, s.j, s.diffs.size(), std::vector<double>(reps), std::vector<double>(reps)};
    const std::uint64_t key = (static_cast<std::uint64_t>(s.i) << 32) | s.j;
    for (std::size_t r = 0; r < reps; ++r) {
      Rng rng(derive_seed(opt.seed, key, r));
      std::tie(ev.ordinal_accuracy[r], ev.binary_accuracy[r]) = evaluate_split(s.diffs, opt.train_frac, rng);
    }
    return ev;
  });
  const auto P = static_cast<double>(report.pairs.size());
  report.ordinal_by_repetition.assign(reps, 0.0);
  report.binary_by_repetition.assign(reps, 0.0);
  for (const auto& ev : report.pairs) {
    double so = 0.0, sb = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      report.ordinal_by_repetition[r] += ev.ordinal_accuracy[r];
      report.binary_by_repetition[r] += ev.binary_accuracy[r];
      so += ev.ordinal_accuracy[r];
      sb += ev.binary_accuracy[r];
    }
    report.ordinal_by_pair.push_back(so / static_cast<double>(reps));
    report.binary_by_pair.push_back(sb / static_cast<double>(reps));
  }
  for (std::size_t r = 0; r < reps; ++r) {
    report.ordinal_by_repetition[r] /= P;
    report.binary_by_repetition[r] /= P;
    report.mean_ordinal += report.ordinal_by_repetition[r];
    report.mean_binary += report.binary_by_repetition[r];
  }
  report.mean_ordinal /= static_cast<double>(reps);
  report.mean_binary /= static_cast<double>(reps);
  if (opt.pairing == TTestPairing::per_pair) {
    if (report.pairs.size() < 2) throw DataError("per-pair t-test needs at least two eligible pairs");
    report.ttest = paired_t_test(report.binary_by_pair, report.ordinal_by_pair);
  } else {
    if (reps < 2) throw DataError("per-repetition t-test needs at least two repetitions");
    report.ttest = paired_t_test(report.binary_by_repetition, report.ordinal_by_repetition);
  }
  return report;
}

namespace detail {

inline nlohmann::json nullable(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace detail

/// Summary JSON; per-pair means are included, per-repetition detail only when asked.
inline nlohmann::json report_to_json(const EvaluationReport& r, bool include_repetitions = false) {
  nlohmann::json j;
  j["train_frac"] = r.options.train_frac;
  j["repetitions"] = r.options.repetitions;
  j["min_pair_count"] = r.options.min_pair_count;
  j["seed"] = r.options.seed;
  j["pairing"] = pairing_name(r.options.pairing);
  j["eligible_pairs"] = r.pairs.size();
  j["mean_accuracy_ordinal"] = r.mean_ordinal;
  j["mean_accuracy_binary"] = r.mean_binary;
  j["t_statistic"] = detail::nullable(r.ttest.t);
  j["p_value"] = detail::nullable(r.ttest.p);
  j["df"] = r.ttest.df;
  j["degenerate"] = r.ttest.degenerate;
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t k = 0; k < r.pairs.size(); ++k) {
    nlohmann::json p{{"i", r.pairs[k].i},
                     {"j", r.pairs[k].j},
                     {"comparisons", r.pairs[k].comparisons},
                     {"accuracy_ordinal", r.ordinal_by_pair[k]},
                     {"accuracy_binary", r.binary_by_pair[k]}};
    if (include_repetitions) {
      p["ordinal_by_repetition"] = r.pairs[k].ordinal_accuracy;
      p["binary_by_repetition"] = r.pairs[k].binary_accuracy;
    }
    pairs.push_back(std::move(p));
  }
  j["pairs"] = std::move(pairs);
  j["accuracy_ordinal_by_repetition"] = r.ordinal_by_repetition;
  j["accuracy_binary_by_repetition"] = r.binary_by_repetition;
  return j;
}

// ---- pairs.bin -----------------------------------------------------------------
//
// "ORDPAIR1", u64 item count, i64 item ids, u64 pair count, then per pair
// u32 i, u32 j, u64 m, m doubles. Native (little-endian) byte order.

namespace detail {

inline constexpr char kPairsMagic[8] = {'O', 'R', 'D', 'P', 'A', 'I', 'R', '1'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::string& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError("pairs file '" + path + "' is truncated");
  return v;
}

}  // namespace detail

inline void write_pairs_bin(const std::string& path, const PairComparisons& data) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write pairs file '" + path + "'");
  os.write(detail::kPairsMagic, sizeof detail::kPairsMagic);
  detail::put<std::uint64_t>(os, data.items.size());
  for (std::int64_t id : data.items) detail::put(os, id);
  detail::put<std::uint64_t>(os, data.pairs.size());
  for (const auto& p : data.pairs) {
    detail::put(os, p.i);
    detail::put(os, p.j);
    detail::put<std::uint64_t>(os, p.diffs.size());
    os.write(reinterpret_cast<const char*>(p.diffs.data()), static_cast<std::streamsize>(p.diffs.size() * sizeof(double)));
  }
  if (!os) throw DataError("failed writing pairs file '" + path + "'");
}

inline PairComparisons read_pairs_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open pairs file '" + path + "'");
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, detail::kPairsMagic, sizeof magic) != 0) {
    throw DataError("'" + path + "' is not a pairs file");
  }
  PairComparisons data;
  const auto n = detail::get<std::uint64_t>(is, path);
  if (n > (1u << 24)) throw CorruptData("pairs file '" + path + "': implausible item count");
  data.items.resize(n);
  for (auto& id : data.items) id = detail::get<std::int64_t>(is, path);
  const auto count = detail::get<std::uint64_t>(is, path);
  if (n < 2 ? count != 0 : count > n * (n - 1) / 2) throw CorruptData("pairs file '" + path + "': bad pair count");
  for (std::uint64_t k = 0; k < count; ++k) {
    PairSeries s;
    s.i = detail::get<std::uint32_t>(is, path);
    s.j = detail::get<std::uint32_t>(is, path);
    const auto m = detail::get<std::uint64_t>(is, path);
    if (s.i >= s.j || s.j >= n) throw CorruptData("pairs file '" + path + "': bad pair index");
    if (!data.pairs.empty() && std::pair(data.pairs.back().i, data.pairs.back().j) >= std::pair(s.i, s.j)) {
      throw CorruptData("pairs file '" + path + "': pairs out of order");
    }
    if (m > (std::uint64_t{1} << 32)) throw CorruptData("pairs file '" + path + "': implausible pair length");
    s.diffs.resize(m);
    for (auto& d : s.diffs) {
      d = detail::get<double>(is, path);
      if (d == 0.0 || !std::isfinite(d)) throw CorruptData("pairs file '" + path + "': zero or non-finite difference");
    }
    data.pairs.push_back(std::move(s));
  }
  if (is.peek() != std::char_traits<char>::eof()) throw CorruptData("pairs file '" + path + "': trailing bytes");
  return data;
}

// ---- synthetic ratings -----------------------------------------------------------

/// Stand-in for a real ratings file: every synthetic user rates one item pair,
/// and the rating difference is a draw of G at gamma = theta_i - theta_j, with
/// item strengths spread uniformly over [-spread, spread]. Ratings live on
/// 1..K+1, so a difference of magnitude d leaves K+1-d placements.
struct SyntheticRatingsOptions {
  std::size_t items = 50;
  std::size_t users_per_pair = 40;
  double spread = 0.3;
  std::uint64_t seed = 7;
};

inline RatingsTable synthesize_ratings(const OrdinalModel& model, const SyntheticRatingsOptions& opt) {
  if (opt.items < 2 || opt.users_per_pair < 1) throw DomainError("synthetic ratings need >= 2 items and >= 1 user per pair");
  Rng rng(derive_seed(opt.seed, 0, 0));
  std::vector<double> theta(opt.items);
  for (double& t : theta) t = opt.spread * (2.0 * uniform01(rng) - 1.0);
  const int top = model.K() + 1;
  RatingsTable table;
  std::int64_t user = 1;
  std::int64_t clock = 0;
  for (std::size_t i = 0; i < opt.items; ++i) {
    for (std::size_t j = i + 1; j < opt.items; ++j) {
      const OutcomeSampler draw = model.sampler(theta[i] - theta[j]);
      for (std::size_t u = 0; u < opt.users_per_pair; ++u, ++user) {
        const int y = draw(rng);
        const int low = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(top - std::abs(y))));
        const int ri = y > 0 ? low + y : low;
        const int rj = y > 0 ? low : low - y;
        table.records.push_back({user, static_cast<std::int64_t>(i + 1), static_cast<double>(ri), ++clock});
        table.records.push_back({user, static_cast<std::int64_t>(j + 1), static_cast<double>(rj), ++clock});
      }
    }
  }
  return table;
}

inline void write_ratings_tab(const std::string& path, const RatingsTable& table) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot write ratings file '" + path + "'");
  for (const auto& r : table.records) {
    os << r.user << '\t' << r.item << '\t' << numeric::exact_decimal(r.rating) << '\t' << r.timestamp.value_or(0)
       << '\n';
  }
}

}  // namespace ordrank

#endif  // ORDRANK_DATA_PIPELINE_HPP
