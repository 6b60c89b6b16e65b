#ifndef ORDRANK_EXPERIMENT_HPP
#define ORDRANK_EXPERIMENT_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordrank/errors.hpp"
#include "ordrank/model.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/parallel.hpp"
#include "ordrank/pattern_analysis.hpp"
#include "ordrank/random.hpp"
#include "ordrank/ranking.hpp"
#include "ordrank/specs.hpp"

// Monte-Carlo harness for the two-item comparison (P(A>0) vs P(B>0)) and the n-item
// Kendall-tau scenarios. Every replication owns a generator seeded from
// derive_seed(base seed, grid point, replication) and results are folded in
// replication order, so output does not depend on the number of worker threads.

namespace ordrank {

enum class Scenario { two_item, scenario1, scenario2, scenario3 };

inline std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::two_item: return "two_item";
    case Scenario::scenario1: return "scenario1";
    case Scenario::scenario2: return "scenario2";
    case Scenario::scenario3: return "scenario3";
  }
  return "?";
}

inline Scenario parse_scenario(const std::string& s) {
  if (s == "two_item") return Scenario::two_item;
  if (s == "scenario1") return Scenario::scenario1;
  if (s == "scenario2") return Scenario::scenario2;
  if (s == "scenario3") return Scenario::scenario3;
  throw ConfigError("unknown scenario '" + s + "' (expected two_item|scenario1|scenario2|scenario3)");
}

/// One experiment: the Cartesian product link x pattern x n x gap x L, each point
/// replicated `reps` times.
///
/// Patterns come either from full specs (`patterns`) or from families
/// (`pattern_families`, "abs"/"sq") crossed with `betas`. For the two-item scenario
/// the gaps are `gammas`; for the tau scenarios theta is equally spaced with width
/// from `gaps`, unless an explicit `theta` is given.
struct ExperimentConfig {
  Scenario scenario = Scenario::two_item;
  std::vector<std::string> links{"identity"};
  std::vector<std::string> patterns;
  std::vector<std::string> pattern_families;
  std::vector<double> betas;
  int K = 4;
  std::vector<int> ns;
  std::vector<double> gammas;
  std::vector<double> gaps;
  std::vector<double> theta;
  std::vector<long> L_grid;
  long reps = 1000;
  std::uint64_t seed = 1;
  double ci_level = 0.99;

  void validate() const {
    if (links.empty()) throw ConfigError("config needs at least one link");
    if (patterns.empty() && (pattern_families.empty() || betas.empty())) {
      throw ConfigError("config needs 'patterns' or 'pattern_families' with 'betas'");
    }
    if (K < 1) throw ConfigError("K must be at least 1");
    if (L_grid.empty()) throw ConfigError("L grid is empty");
    for (std::size_t i = 0; i < L_grid.size(); ++i) {
      if (L_grid[i] < 1) throw ConfigError("L values must be positive");
      if (i > 0 && L_grid[i] <= L_grid[i - 1]) throw ConfigError("L grid must be strictly increasing");
    }
    if (reps < 1) throw ConfigError("reps must be at least 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("ci_level must lie in (0,1)");
    if (scenario == Scenario::two_item) {
      if (gammas.empty()) throw ConfigError("two_item needs 'gammas'");
      for (double g : gammas) {
        if (!(g > 0.0)) throw ConfigError("two_item gammas must be positive");
      }
    } else if (theta.empty()) {
      if (ns.empty() || gaps.empty()) throw ConfigError("tau scenarios need 'ns' and 'gaps' (or 'theta')");
      for (int n : ns) {
        if (n < 2) throw ConfigError("n must be at least 2");
      }
    } else if (theta.size() < 2) {
      throw ConfigError("explicit theta needs at least two items");
    }
  }
};

/// Default experiment grids. Desk scale uses 1e5 two-item
/// replications instead of 1e6; the tau scenarios keep 1000 either way.
inline ExperimentConfig default_config(Scenario scenario, bool paper_scale = false) {
  ExperimentConfig c;
  c.scenario = scenario;
  const auto range = [](long from, long to, long step) {
    std::vector<long> v;
    for (long x = from; x <= to; x += step) v.push_back(x);
    return v;
  };
  const std::vector<std::string> four_links{"cubic", "identity", "tanhsig", "logitnorm"};
  switch (scenario) {
    case Scenario::two_item:
      c.pattern_families = {"abs"};
      c.betas = {0.1, 0.9};
      c.K = 4;
      c.gammas = {0.05, 0.1, 0.15};
      c.L_grid = range(50, 500, 50);
      c.reps = paper_scale ? 1000000 : 100000;
      break;
    case Scenario::scenario1:
      c.links = four_links;
      c.patterns = {"abs:1", "sq:1"};
      c.K = 5;
      c.ns = {10, 20};
      c.gaps = {0.05};
      c.L_grid = range(100, 500, 50);
      break;
    case Scenario::scenario2:
      c.links = four_links;
      c.pattern_families = {"abs", "sq"};
      c.betas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
      c.K = 5;
      c.ns = {10};
      c.gaps = {0.05};
      c.L_grid = {100};
      break;
    case Scenario::scenario3:
      c.links = four_links;
      c.patterns = {"abs:1", "sq:1"};
      c.K = 5;
      c.ns = {10, 20};
      c.gaps = {0.05};
      c.L_grid = range(100, 1000, 100);
      break;
  }
  return c;
}

// ---- config JSON -----------------------------------------------------------

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["scenario"] = scenario_name(c.scenario);
  j["links"] = c.links;
  if (!c.patterns.empty()) j["patterns"] = c.patterns;
  if (!c.pattern_families.empty()) {
    j["pattern_families"] = c.pattern_families;
    j["betas"] = c.betas;
  }
  j["K"] = c.K;
  if (!c.ns.empty()) j["ns"] = c.ns;
  if (!c.gammas.empty()) j["gammas"] = c.gammas;
  if (!c.gaps.empty()) j["gaps"] = c.gaps;
  if (!c.theta.empty()) j["theta"] = c.theta;
  j["L"] = c.L_grid;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["ci_level"] = c.ci_level;
  return j;
}

/// Missing keys fall back to default_config(scenario, paper_scale). A single "link"
/// or "pattern" string is accepted in place of the list forms.
inline ExperimentConfig config_from_json(const nlohmann::json& j, bool paper_scale = false) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  try {
    ExperimentConfig c = default_config(parse_scenario(j.value("scenario", std::string("two_item"))), paper_scale);
    const bool explicit_patterns = j.contains("patterns") || j.contains("pattern");
    const bool explicit_families = j.contains("pattern_families") || j.contains("pattern_family");
    if (explicit_patterns && !explicit_families) c.pattern_families.clear();
    if (explicit_families && !explicit_patterns) c.patterns.clear();
    // list-valued keys also accept a bare scalar; singular aliases are kept for hand-written configs
    const auto list = [&j]<typename T>(const char* key, std::vector<T>& out) {
      if (!j.contains(key)) return;
      const auto& v = j.at(key);
      out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
    };
    list("link", c.links);
    list("links", c.links);
    list("pattern", c.patterns);
    list("patterns", c.patterns);
    list("pattern_family", c.pattern_families);
    list("pattern_families", c.pattern_families);
    list("betas", c.betas);
    if (j.contains("K")) c.K = j.at("K").get<int>();
    list("n", c.ns);
    list("ns", c.ns);
    list("gammas", c.gammas);
    list("gaps", c.gaps);
    list("theta", c.theta);
    list("L", c.L_grid);
    if (j.contains("reps") && !paper_scale) c.reps = j.at("reps").get<long>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("ci_level")) c.ci_level = j.at("ci_level").get<double>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
}

// ---- results ----------------------------------------------------------------

struct MetricEstimate {
  std::string metric;
  double estimate = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  long reps = 0;
  bool flagged = false;  ///< estimate undefined at this grid point (e.g. 0/0 ratio)
};

struct GridPointResult {
  std::size_t grid_id = 0;
  std::string link;
  std::string pattern;
  double beta = std::numeric_limits<double>::quiet_NaN();
  int n = 2;
  int K = 1;
  long L = 0;
  double gamma_or_w = 0.0;
  std::vector<MetricEstimate> metrics;
  double elapsed_seconds = 0.0;

  const MetricEstimate& metric(const std::string& name) const {
    for (const auto& m : metrics) {
      if (m.metric == name) return m;
    }
    throw DomainError("grid point has no metric '" + name + "'");
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<GridPointResult> points;
};

namespace detail {

struct PatternChoice {
  std::string label;
  double beta;
  PatternDistribution pattern;
};

inline std::vector<PatternChoice> expand_patterns(const ExperimentConfig& c) {
  std::vector<PatternChoice> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& spec : c.patterns) {
    double beta = nan;
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if ((head == "abs" || head == "sq") && colon != std::string::npos) {
      beta = detail::parse_number(spec.substr(colon + 1, spec.find(',') - colon - 1), "pattern beta");
    }
    out.push_back({spec, beta, parse_pattern_spec(spec, c.K)});
  }
  for (const auto& family : c.pattern_families) {
    if (family != "abs" && family != "sq") throw ConfigError("unknown pattern family '" + family + "'");
    for (double beta : c.betas) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s:%.10g", family.c_str(), beta);
      out.push_back({buf, beta, family == "abs" ? abs_pattern(beta, c.K) : square_pattern(beta, c.K)});
    }
  }
  return out;
}

inline MetricEstimate bernoulli_estimate(std::string name, long successes, long reps, double z) {
  const double p = static_cast<double>(successes) / static_cast<double>(reps);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
  return {std::move(name), p, se, p - z * se, p + z * se, reps, false};
}

inline MetricEstimate mean_estimate(std::string name, const std::vector<double>& values, double z) {
  const auto R = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / R;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = values.size() > 1 ? std::sqrt(ss / (R - 1.0) / R) : 0.0;
  return {std::move(name), mean, se, mean - z * se, mean + z * se, static_cast<long>(values.size()), false};
}

inline MetricEstimate exact_value(std::string name, double value, long reps) {
  return {std::move(name), value, 0.0, value, value, reps, false};
}

/// R = mean(b) / mean(o) with a delta-method standard error; flagged when mean(o) = 0.
inline MetricEstimate ratio_estimate(std::string name, const std::vector<double>& b, const std::vector<double>& o,
                                     double z) {
  const auto R = static_cast<double>(b.size());
  double mb = 0.0, mo = 0.0;
  for (std::size_t r = 0; r < b.size(); ++r) {
    mb += b[r];
    mo += o[r];
  }
  mb /= R;
  mo /= R;
  MetricEstimate m;
  m.metric = std::move(name);
  m.reps = static_cast<long>(b.size());
  if (mo == 0.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.estimate = m.se = m.ci_lo = m.ci_hi = nan;
    m.flagged = true;
    return m;
  }
  double vb = 0.0, vo = 0.0, cov = 0.0;
  for (std::size_t r = 0; r < b.size(); ++r) {
    vb += (b[r] - mb) * (b[r] - mb);
    vo += (o[r] - mo) * (o[r] - mo);
    cov += (b[r] - mb) * (o[r] - mo);
  }
  const double denom = b.size() > 1 ? R - 1.0 : 1.0;
  vb /= denom;
  vo /= denom;
  cov /= denom;
  const double ratio = mb / mo;
  const double var = std::max(0.0, (vb + ratio * ratio * vo - 2.0 * ratio * cov) / (mo * mo * R));
  m.estimate = ratio;
  m.se = std::sqrt(var);
  m.ci_lo = ratio - z * m.se;
  m.ci_hi = ratio + z * m.se;
  return m;
}

struct TwoItemRecord {
  bool a_positive = false;
  bool b_positive = false;
};

struct TauRecord {
  double ordinal = 0.0;
  double binary = 0.0;
};

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// One two-item replication: L draws at gap gamma; reports A > 0 and B > 0 (strict).
inline detail::TwoItemRecord two_item_replication(const OutcomeSampler& draw, long L, Rng& rng) {
  long sum = 0;
  long signs = 0;
  for (long l = 0; l < L; ++l) {
    const int y = draw(rng);
    sum += y;
    signs += y > 0 ? 1 : -1;
  }
  return {sum > 0, signs > 0};
}

/// One n-item replication on the full graph: Kendall tau of ordinal and binary
/// counting scores against theta. `samplers` is indexed by ComparisonDataset pair
/// order (i < j, row-major).
inline detail::TauRecord tau_replication(const std::vector<OutcomeSampler>& samplers, const PreferenceVector& theta,
                                         long L, Rng& rng) {
  const std::size_t n = theta.size();
  std::vector<std::int64_t> ordinal(n, 0);
  std::vector<std::int64_t> binary(n, 0);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++p) {
      const OutcomeSampler& draw = samplers[p];
      std::int64_t sum = 0;
      std::int64_t signs = 0;
      for (long l = 0; l < L; ++l) {
        const int y = draw(rng);
        sum += y;
        signs += y > 0 ? 1 : -1;
      }
      ordinal[i] += sum;
      ordinal[j] -= sum;
      binary[i] += signs;
      binary[j] -= signs;
    }
  }
  return {kendall_tau<std::int64_t>(ordinal, theta.theta), kendall_tau<std::int64_t>(binary, theta.theta)};
}

inline ExperimentResult run_two_item(const ExperimentConfig& config, int threads = 1) {
  if (config.scenario != Scenario::two_item) throw ConfigError("run_two_item needs scenario two_item");
  config.validate();
  const double z = numeric::normal_two_sided_z(config.ci_level);
  ExperimentResult result{config, {}};
  std::size_t grid_id = 0;
  for (const auto& link_spec : config.links) {
    const StrengthLink link = parse_link_spec(link_spec);
    for (const auto& choice : detail::expand_patterns(config)) {
      const OrdinalModel model(link, choice.pattern);
      for (double gamma : config.gammas) {
        const OutcomeSampler draw = model.sampler(gamma);
        for (long L : config.L_grid) {
          const auto start = std::chrono::steady_clock::now();
          const auto records = parallel_map<detail::TwoItemRecord>(
              static_cast<std::size_t>(config.reps), threads, [&](std::size_t rep) {
                Rng rng(derive_seed(config.seed, grid_id, rep));
                return two_item_replication(draw, L, rng);
              });
          long a = 0, b = 0;
          for (const auto& r : records) {
            a += r.a_positive ? 1 : 0;
            b += r.b_positive ? 1 : 0;
          }
          GridPointResult point;
          point.grid_id = grid_id;
          point.link = link_spec;
          point.pattern = choice.label;
          point.beta = choice.beta;
          point.n = 2;
          point.K = model.K();
          point.L = L;
          point.gamma_or_w = gamma;
          point.metrics.push_back(detail::bernoulli_estimate("prob_A_pos", a, config.reps, z));
          point.metrics.push_back(detail::bernoulli_estimate("prob_B_pos", b, config.reps, z));
          const TwoItemLimits clt = asymptotic_two_item(model, gamma, L);
          point.metrics.push_back(detail::exact_value("clt_prob_A_pos", clt.prob_ordinal, config.reps));
          point.metrics.push_back(detail::exact_value("clt_prob_B_pos", clt.prob_binary, config.reps));
          point.elapsed_seconds = detail::seconds_since(start);
          result.points.push_back(std::move(point));
          ++grid_id;
        }
      }
    }
  }
  return result;
}

namespace detail {

struct ThetaChoice {
  PreferenceVector theta;
  double w;
};

inline std::vector<std::pair<int, std::vector<ThetaChoice>>> expand_thetas(const ExperimentConfig& c) {
  std::vector<std::pair<int, std::vector<ThetaChoice>>> out;
  if (!c.theta.empty()) {
    PreferenceVector t = PreferenceVector::centered_from(c.theta);
    const int n = static_cast<int>(t.size());
    out.push_back({n, {{std::move(t), std::numeric_limits<double>::quiet_NaN()}}});
    return out;
  }
  for (int n : c.ns) {
    std::vector<ThetaChoice> v;
    for (double w : c.gaps) v.push_back({PreferenceVector::equally_spaced(static_cast<std::size_t>(n), w), w});
    out.push_back({n, std::move(v)});
  }
  return out;
}

inline bool strictly_ordered(const PreferenceVector& theta) {
  std::vector<double> v = theta.theta;
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

/// Shared driver for the three tau scenarios; `emit` appends scenario-specific
/// metrics from the per-replication records.
template <typename Emit>
ExperimentResult run_tau_grid(const ExperimentConfig& config, int threads, Emit&& emit) {
  config.validate();
  const double z = numeric::normal_two_sided_z(config.ci_level);
  ExperimentResult result{config, {}};
  std::size_t grid_id = 0;
  const auto thetas = expand_thetas(config);
  for (const auto& link_spec : config.links) {
    const StrengthLink link = parse_link_spec(link_spec);
    for (const auto& choice : expand_patterns(config)) {
      const OrdinalModel model(link, choice.pattern);
      for (const auto& [n, theta_choices] : thetas) {
        for (const auto& tc : theta_choices) {
          const PreferenceVector& theta = tc.theta;
          std::vector<OutcomeSampler> samplers;
          for (std::size_t i = 0; i < theta.size(); ++i)
            for (std::size_t j = i + 1; j < theta.size(); ++j) samplers.push_back(model.sampler(theta.gamma(i, j)));
          for (long L : config.L_grid) {
            const auto start = std::chrono::steady_clock::now();
            const auto records = parallel_map<TauRecord>(static_cast<std::size_t>(config.reps), threads,
                                                         [&](std::size_t rep) {
                                                           Rng rng(derive_seed(config.seed, grid_id, rep));
                                                           return tau_replication(samplers, theta, L, rng);
                                                         });
            std::vector<double> ord(records.size()), bin(records.size());
            for (std::size_t r = 0; r < records.size(); ++r) {
              ord[r] = records[r].ordinal;
              bin[r] = records[r].binary;
            }
            GridPointResult point;
            point.grid_id = grid_id;
            point.link = link_spec;
            point.pattern = choice.label;
            point.beta = choice.beta;
            point.n = n;
            point.K = model.K();
            point.L = L;
            point.gamma_or_w = tc.w;
            point.metrics.push_back(mean_estimate("tau_ordinal", ord, z));
            point.metrics.push_back(mean_estimate("tau_binary", bin, z));
            emit(point, model, theta, ord, bin, z);
            point.elapsed_seconds = seconds_since(start);
            result.points.push_back(std::move(point));
            ++grid_id;
          }
        }
      }
    }
  }
  return result;
}

}  // namespace detail

/// Scenario I: E[tau(S)] and E[tau(S~)] over the L grid, with their large-L limits.
inline ExperimentResult run_scenario1(const ExperimentConfig& config, int threads = 1) {
  if (config.scenario != Scenario::scenario1) throw ConfigError("run_scenario1 needs scenario scenario1");
  return detail::run_tau_grid(config, threads,
                              [&](GridPointResult& point, const OrdinalModel& model, const PreferenceVector& theta,
                                  const std::vector<double>&, const std::vector<double>&, double) {
                                if (!detail::strictly_ordered(theta)) return;
                                const TauLimits lim = asymptotic_tau(model, theta, point.L);
                                point.metrics.push_back(detail::exact_value("limit_tau_ordinal", lim.ordinal, config.reps));
                                point.metrics.push_back(detail::exact_value("limit_tau_binary", lim.binary, config.reps));
                              });
}

/// Scenario II: paired gap E[tau(S)] - E[tau(S~)] next to the exact SNR(X) of each pattern.
inline ExperimentResult run_scenario2(const ExperimentConfig& config, int threads = 1) {
  if (config.scenario != Scenario::scenario2) throw ConfigError("run_scenario2 needs scenario scenario2");
  return detail::run_tau_grid(
      config, threads,
      [&](GridPointResult& point, const OrdinalModel& model, const PreferenceVector&, const std::vector<double>& ord,
          const std::vector<double>& bin, double z) {
        std::vector<double> gap(ord.size());
        for (std::size_t r = 0; r < ord.size(); ++r) gap[r] = ord[r] - bin[r];
        point.metrics.push_back(detail::mean_estimate("tau_gap", gap, z));
        const double snr = snr_of_pattern(model.pattern()).snr;
        point.metrics.push_back(detail::exact_value("snr_pattern", snr, config.reps));
      });
}

/// Scenario III: R(S~, S) = E[tau(S~)] / E[tau(S)] per L; flagged where E[tau(S)] = 0.
inline ExperimentResult run_scenario3(const ExperimentConfig& config, int threads = 1) {
  if (config.scenario != Scenario::scenario3) throw ConfigError("run_scenario3 needs scenario scenario3");
  return detail::run_tau_grid(config, threads,
                              [&](GridPointResult& point, const OrdinalModel&, const PreferenceVector&,
                                  const std::vector<double>& ord, const std::vector<double>& bin, double z) {
                                point.metrics.push_back(detail::ratio_estimate("tau_ratio", bin, ord, z));
                              });
}

inline ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1) {
  switch (config.scenario) {
    case Scenario::two_item: return run_two_item(config, threads);
    case Scenario::scenario1: return run_scenario1(config, threads);
    case Scenario::scenario2: return run_scenario2(config, threads);
    case Scenario::scenario3: return run_scenario3(config, threads);
  }
  throw ConfigError("unknown scenario");
}

// ---- analysis helpers --------------------------------------------------------

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;      ///< points entering the fit
  std::size_t excluded = 0;  ///< flagged or non-positive ratios
};

/// Least-squares slope of log R(S~, S) against L over the points of one
/// (link, pattern, n, w) series, skipping flagged and zero ratios.
inline TrendFit fit_log_ratio_trend(const std::vector<const GridPointResult*>& series) {
  TrendFit fit;
  std::vector<double> xs, ys;
  for (const auto* p : series) {
    const MetricEstimate& m = p->metric("tau_ratio");
    if (m.flagged || !(m.estimate > 0.0)) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(static_cast<double>(p->L));
    ys.push_back(std::log(m.estimate));
  }
  fit.used = xs.size();
  if (xs.size() < 2) return fit;
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

/// Groups grid points into series that differ only in L, in grid order.
inline std::vector<std::vector<const GridPointResult*>> series_by_L(const ExperimentResult& result) {
  std::vector<std::vector<const GridPointResult*>> out;
  const std::size_t per_series = result.config.L_grid.size();
  for (std::size_t i = 0; i < result.points.size(); i += per_series) {
    std::vector<const GridPointResult*> s;
    for (std::size_t k = i; k < std::min(result.points.size(), i + per_series); ++k) s.push_back(&result.points[k]);
    out.push_back(std::move(s));
  }
  return out;
}

// ---- CSV output --------------------------------------------------------------

namespace detail {

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline const char* kExperimentCsvHeader =
    "scenario,link,pattern,beta,n,K,L,gamma_or_w,metric,estimate,se,ci_lo,ci_hi,reps,seed";

/// One row per (grid point, metric). Contains no timing or host data.
inline void write_experiment_csv(std::ostream& os, const ExperimentResult& result) {
  os << kExperimentCsvHeader << '\n';
  const std::string scenario = scenario_name(result.config.scenario);
  for (const auto& p : result.points) {
    for (const auto& m : p.metrics) {
      os << scenario << ',' << detail::csv_field(p.link) << ',' << detail::csv_field(p.pattern) << ','
         << (std::isnan(p.beta) ? std::string() : detail::csv_number(p.beta)) << ',' << p.n << ',' << p.K << ','
         << p.L << ',' << detail::csv_number(p.gamma_or_w) << ',' << m.metric << ',' << detail::csv_number(m.estimate)
         << ',' << detail::csv_number(m.se) << ',' << detail::csv_number(m.ci_lo) << ','
         << detail::csv_number(m.ci_hi) << ',' << m.reps << ',' << result.config.seed << '\n';
    }
  }
}

}  // namespace ordrank

#endif  // ORDRANK_EXPERIMENT_HPP
