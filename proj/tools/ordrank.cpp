// ordrank: command-line front end for the ordinal comparison model.
//
// Machine-readable output (JSON, or CSV for `simulate`) goes to stdout or --out;
// messages go to stderr. Exit codes: 0 ok, 1 usage error, 2 data/convergence error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "ordrank/ordrank.hpp"

namespace {

using nlohmann::json;
using namespace ordrank;

struct Globals {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out;
  bool annotate = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json annotation(std::chrono::steady_clock::time_point start) {
  char host[256] = {0};
  gethostname(host, sizeof host - 1);
  const std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"generated_at", stamp},
          {"host", host},
          {"elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
}

void emit_text(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(g.out, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write '" + g.out + "'");
  os << text;
  if (!os) throw DataError("failed writing '" + g.out + "'");
}

void emit_json(const Globals& g, json j, std::chrono::steady_clock::time_point start) {
  if (g.annotate) j["annotations"] = annotation(start);
  emit_text(g, j.dump(2) + "\n");
}

json snr_json(const PatternDistribution& p) {
  const SnrReport r = snr_of_pattern(p);
  return {{"K", p.K()},
          {"weights", std::vector<double>(p.weights().begin(), p.weights().end())},
          {"mean", r.mean},
          {"second_moment", r.second_moment},
          {"variance", r.variance},
          {"snr", finite_or_null(r.snr)},
          {"snr_infinite", r.snr_is_infinite()}};
}

OrdinalModel make_model(const std::string& link, const std::string& psi, int K) {
  return OrdinalModel(parse_link_spec(link), parse_pattern_spec(psi, K));
}

/// Accepts a JSON file holding an array (or {"theta": [...]}) or an inline comma list.
std::vector<double> parse_theta(const std::string& s) {
  if (!std::filesystem::is_regular_file(s)) {
    std::vector<double> out;
    for (const auto& part : detail::split(s, ',')) out.push_back(detail::parse_number(detail::trim(part), "--theta"));
    return out;
  }
  std::ifstream in(s);
  try {
    const json j = json::parse(in);
    return (j.is_object() ? j.at("theta") : j).get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw DataError("theta file '" + s + "': " + e.what());
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : detail::split(s, ',')) out.push_back(detail::parse_number(detail::trim(part), what));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Ordinal vs binary paired-comparison ranking toolkit", "ordrank"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_flag("--annotate", g.annotate, "Add timestamp/host annotations to JSON output");

  // shared model flags
  std::string link = "identity";
  std::string psi = "uniform";
  int K = 4;
  const auto model_flags = [&](CLI::App* sub) {
    sub->add_option("--link", link, "Strength link: cubic|identity|tanhsig|logitnorm|logitlogistic[:scale]");
    sub->add_option("--psi,--pattern", psi, "Pattern: abs:b|sq:b|uniform|weights:w1,..|min-unconstrained|min-monotone");
    sub->add_option("--K", K, "Maximum outcome magnitude")->check(CLI::PositiveNumber);
  };

  auto* snr = app.add_subcommand("snr", "SNR(X) of a magnitude pattern");
  model_flags(snr);

  auto* snr_min = app.add_subcommand("snr-min", "Closed-form SNR minimizers");
  snr_min->add_option("--K", K, "Maximum outcome magnitude (>= 2)")->required();
  std::string constraint = "both";
  snr_min->add_option("--constraint", constraint, "unconstrained|monotone|both")
      ->check(CLI::IsMember({"unconstrained", "monotone", "both"}));
  bool only_monotone = false;
  snr_min->add_flag("--monotone", only_monotone, "Only the non-increasing construction");

  auto* model_info = app.add_subcommand("model-info", "Model descriptor, pmf and moments at a gap");
  model_flags(model_info);
  double gamma = 0.1;
  model_info->add_option("--gamma", gamma, "Preference gap theta_i - theta_j");

  auto* rates = app.add_subcommand("rates", "Large-deviation rates of binary and ordinal counting");
  model_flags(rates);
  rates->add_option("--gamma", gamma, "Two-item gap (ignored with --theta)");
  std::string theta_text;
  std::size_t rate_i = 0, rate_j = 1;
  rates->add_option("--theta", theta_text, "Comma-separated preference vector for the n-item rate");
  rates->add_option("--i", rate_i, "First item (n-item rate)");
  rates->add_option("--j", rate_j, "Second item (n-item rate)");
  double factor = 10.0;
  rates->add_option("--factor", factor, "Error-ratio factor for the predicted crossover L");

  auto* rank = app.add_subcommand("rank", "Counting scores and Kendall tau on comparison data");
  model_flags(rank);
  std::string data_path;
  long L = 100;
  int n_items = 10;
  double gap = 0.05;
  rank->add_option("--input,--data", data_path, "i,j,l,y CSV; simulated from the model when absent");
  rank->add_option("--theta", theta_text, "True preferences (for tau): comma list or JSON file");
  rank->add_option("--n", n_items, "Items when simulating")->check(CLI::Range(2, 100000));
  rank->add_option("--gap", gap, "Spacing of the simulated preference vector");
  rank->add_option("--L", L, "Rounds per pair when simulating")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiment grid, CSV output");
  std::string config_path;
  std::string scenario_text = "two_item";
  bool paper_scale = false;
  bool dump_config = false;
  std::optional<long> reps;
  simulate->add_option("--config", config_path, "Experiment config JSON");
  simulate->add_option("--scenario", scenario_text, "two_item|scenario1|scenario2|scenario3 (without --config)");
  simulate->add_flag("--paper-scale", paper_scale, "Use the full replication counts");
  simulate->add_option("--reps", reps, "Override the replication count")->check(CLI::PositiveNumber);
  simulate->add_flag("--dump-config", dump_config, "Print the resolved config as JSON and exit");

  auto* ingest = app.add_subcommand("ingest", "Ratings file -> pairwise differences (pairs.bin)");
  std::string format = "movielens-100k-tab";
  std::string ratings_path;
  long min_item_ratings = 1;
  std::string pairs_out;
  bool synthetic = false;
  SyntheticRatingsOptions synth;
  ingest->add_option("--format", format, "movielens-100k-tab|generic-csv");
  ingest->add_option("--path", ratings_path, "Ratings file");
  ingest->add_option("--min-item-ratings", min_item_ratings, "Drop items with fewer ratings")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--pairs-out", pairs_out, "Binary pairs file (default: --out)");
  ingest->add_flag("--synthetic", synthetic, "Generate ratings from the model instead of reading --path");
  ingest->add_option("--items", synth.items, "Synthetic items");
  ingest->add_option("--users-per-pair", synth.users_per_pair, "Synthetic users per item pair");
  ingest->add_option("--spread", synth.spread, "Synthetic item strengths ~ U[-spread, spread]");
  ingest->add_option("--link", link, "Link for --synthetic");
  ingest->add_option("--psi,--pattern", psi, "Pattern for --synthetic");
  ingest->add_option("--K", K, "K for --synthetic")->check(CLI::PositiveNumber);

  auto* evaluate = app.add_subcommand("evaluate", "Split evaluation of sum vs sign-sum aggregation");
  std::string pairs_path;
  EvaluationOptions eval;
  std::string pairing = "per-pair";
  bool per_repetition_detail = false;
  evaluate->add_option("--pairs", pairs_path, "pairs.bin from `ingest`")->required();
  evaluate->add_option("--train-frac", eval.train_frac, "Training fraction")->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--reps", eval.repetitions, "Repetitions")->check(CLI::PositiveNumber);
  evaluate->add_option("--min-pair-count", eval.min_pair_count, "Skip pairs with fewer comparisons");
  evaluate->add_option("--pairing", pairing, "t-test pairing unit")
      ->check(CLI::IsMember({"per-pair", "per-repetition"}));
  evaluate->add_flag("--detail", per_repetition_detail, "Include per-repetition accuracies");

  auto* histogram = app.add_subcommand("histogram", "Histogram of |rating differences|");
  std::string edges_text;
  histogram->add_option("--pairs", pairs_path, "pairs.bin from `ingest`")->required();
  histogram->add_option("--edges", edges_text, "Comma-separated bin edges");

  if (argc <= 1) {
    std::cerr << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*snr) {
      emit_json(g, snr_json(parse_pattern_spec(psi, K)), start);
    } else if (*snr_min) {
      json j{{"K", K}};
      if (only_monotone) constraint = "monotone";
      if (constraint != "monotone") {
        const MinimalSnr m = minimal_snr_unconstrained(K);
        j["unconstrained"] = {{"value", m.value}, {"pattern", snr_json(m.pattern)}};
      }
      if (constraint != "unconstrained") {
        const MinimalSnr m = minimal_snr_monotone(K);
        j["monotone"] = {{"value", m.value}, {"pattern", snr_json(m.pattern)}};
      }
      emit_json(g, j, start);
    } else if (*model_info) {
      const OrdinalModel model = make_model(link, psi, K);
      const OutcomeMoments mom = model.moments(gamma);
      json pmf = json::object();
      for (int k = -model.K(); k <= model.K(); ++k) {
        if (k != 0) pmf[std::to_string(k)] = model.pmf(gamma, k);
      }
      emit_json(g,
                {{"model", model_to_json(model)},
                 {"gamma", gamma},
                 {"phi", model.phi(gamma)},
                 {"pmf", pmf},
                 {"prob_positive", model.prob_positive(gamma)},
                 {"mean", mom.mean},
                 {"variance", mom.variance},
                 {"snr", finite_or_null(mom.snr)},
                 {"snr_infinite", mom.snr_is_infinite()},
                 {"pattern", snr_json(model.pattern())}},
                start);
    } else if (*rates) {
      const OrdinalModel model = make_model(link, psi, K);
      RateResult bin, ord;
      json j{{"model", model_to_json(model)}};
      if (!theta_text.empty()) {
        const PreferenceVector theta{parse_theta(theta_text), false};
        ord = rate_at_zero_nitem(model, theta, rate_i, rate_j, false);
        bin = rate_at_zero_nitem(model, theta, rate_i, rate_j, true);
        j["theta"] = theta.theta;
        j["i"] = rate_i;
        j["j"] = rate_j;
      } else {
        ord = rate_at_zero_ordinal(model, gamma);
        bin = rate_at_zero_binary(model, gamma);
        j["gamma"] = gamma;
      }
      const auto rate_json = [](const RateResult& r) {
        return json{{"rate", r.rate},
                    {"argmin_lambda", r.argmin_lambda},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"boundary", r.boundary}};
      };
      if (!ord.converged || !bin.converged) throw ConvergenceError("rate optimization did not converge");
      j["binary"] = rate_json(bin);
      j["ordinal"] = rate_json(ord);
      const auto cross = predicted_crossover(bin, ord, factor);
      j["crossover_factor"] = factor;
      j["predicted_crossover_L"] = cross ? json(*cross) : json(nullptr);
      j["predicted_crossover_basis"] = "leading-order exp(-L*rate) heuristic";
      emit_json(g, j, start);
    } else if (*rank) {
      const OrdinalModel model = make_model(link, psi, K);
      std::optional<PreferenceVector> theta;
      if (!theta_text.empty()) theta = PreferenceVector{parse_theta(theta_text), false};
      std::optional<ComparisonDataset> data;
      if (!data_path.empty()) {
        data = load_comparison_csv(data_path);
        if (data->max_magnitude() > model.K()) {
          throw CorruptData("outcome magnitude exceeds K = " + std::to_string(model.K()));
        }
      } else {
        if (!theta) theta = PreferenceVector::equally_spaced(static_cast<std::size_t>(n_items), gap);
        Rng rng(derive_seed(g.seed.value_or(1), 0, 0));
        data = simulate_dataset(model, *theta, L, rng);
      }
      if (theta && theta->size() != data->n()) throw ConfigError("--theta length does not match the item count");
      const ScorePair s = count_scores(*data);
      json j{{"n", data->n()}, {"L", data->L()}, {"ordinal_scores", s.ordinal}, {"binary_scores", s.binary}};
      if (theta) {
        j["theta"] = theta->theta;
        j["tau_ordinal"] = kendall_tau(s.ordinal, *theta);
        j["tau_binary"] = kendall_tau(s.binary, *theta);
      }
      emit_json(g, j, start);
    } else if (*simulate) {
      ExperimentConfig config;
      if (!config_path.empty()) {
        if (!std::filesystem::exists(config_path)) throw DataError("config file not found: '" + config_path + "'");
        std::ifstream in(config_path);
        json cj;
        try {
          cj = json::parse(in);
        } catch (const json::parse_error& e) {
          throw DataError("config file '" + config_path + "' is not valid JSON: " + e.what());
        }
        config = config_from_json(cj, paper_scale);
      } else {
        config = default_config(parse_scenario(scenario_text), paper_scale);
      }
      if (g.seed) config.seed = *g.seed;
      if (reps) config.reps = *reps;
      config.validate();
      if (dump_config) {
        emit_json(g, config_to_json(config), start);
      } else {
        const ExperimentResult result = run_experiment(config, g.threads);
        std::ostringstream csv;
        if (g.annotate) csv << "# " << annotation(start).dump() << '\n';
        write_experiment_csv(csv, result);
        emit_text(g, csv.str());
      }
    } else if (*ingest) {
      RatingsTable table;
      if (synthetic) {
        synth.seed = g.seed.value_or(synth.seed);
        table = synthesize_ratings(make_model(link, psi, K), synth);
      } else {
        if (ratings_path.empty()) throw UsageError("ingest needs --path (or --synthetic)");
        table = load_ratings(ratings_path, parse_ratings_format(format));
      }
      const PairComparisons pairs = build_pair_comparisons(table, min_item_ratings);
      const std::string bin_path = pairs_out.empty() ? g.out : pairs_out;
      if (bin_path.empty()) throw UsageError("ingest needs --out or --pairs-out for the pairs file");
      write_pairs_bin(bin_path, pairs);
      json summary{{"ratings", table.size()},
                   {"items_retained", pairs.items.size()},
                   {"pairs", pairs.pairs.size()},
                   {"comparisons", pairs.comparison_count()},
                   {"pairs_file", bin_path}};
      if (g.annotate) summary["annotations"] = annotation(start);
      std::cout << summary.dump(2) << '\n';
    } else if (*evaluate) {
      eval.seed = g.seed.value_or(eval.seed);
      eval.threads = g.threads;
      eval.pairing = parse_pairing(pairing);
      const EvaluationReport report = evaluate_pair_protocol(read_pairs_bin(pairs_path), eval);
      emit_json(g, report_to_json(report, per_repetition_detail), start);
    } else if (*histogram) {
      std::optional<std::vector<double>> edges;
      if (!edges_text.empty()) edges = parse_list(edges_text, "--edges");
      const Histogram h = ordinal_histogram(read_pairs_bin(pairs_path), edges);
      for (const auto& w : h.warnings) std::cerr << "warning: " << w << '\n';
      json bins = json::array();
      for (std::size_t k = 0; k < h.counts.size(); ++k)
        bins.push_back({{"lower", h.lower[k]}, {"upper", h.upper[k]}, {"count", h.counts[k]}});
      emit_json(g, {{"bins", bins}, {"non_increasing", h.non_increasing}}, start);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidPattern& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    // data, corrupt-input, convergence and I/O failures
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
