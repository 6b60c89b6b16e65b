#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ordrank/data_pipeline.hpp"
#include "ordrank/experiment.hpp"
#include "ordrank/specs.hpp"

using namespace ordrank;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ORDRANK_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  return fs::temp_directory_path() / ("ordrank_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("--bogus-flag").code, 1);
  EXPECT_EQ(run("snr --bogus-flag").code, 1);
  EXPECT_EQ(run("simulate --config /nonexistent/config.json").code, 2);
  EXPECT_EQ(run("snr --psi abs:x --K 4").code, 1);
  EXPECT_EQ(run("snr --psi nonsense --K 4").code, 1);
  EXPECT_EQ(run("evaluate --pairs /nonexistent/pairs.bin").code, 2);
  EXPECT_EQ(run("snr --help").code, 0);
}

TEST(Cli, SnrMatchesLibrary) {
  const auto r = run("snr --psi abs:0.1 --K 4");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("snr").get<double>(), 4.5523, 1e-3);
  EXPECT_FALSE(j.at("snr_infinite").get<bool>());
  const auto deg = json::parse(run("snr --psi weights:1").out);
  EXPECT_TRUE(deg.at("snr").is_null());
  EXPECT_TRUE(deg.at("snr_infinite").get<bool>());
  const auto mins = json::parse(run("snr-min --K 4").out);
  EXPECT_NEAR(mins.at("unconstrained").at("value").get<double>(), 16.0 / 9, 1e-12);
  EXPECT_NEAR(mins.at("monotone").at("value").get<double>(), 120.0 / 49, 1e-12);
}

TEST(Cli, ModelInfoRoundTrips) {
  const auto r = run("model-info --link logitlogistic:2 --psi sq:0.5 --K 3 --gamma 0.4");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  const auto m = model_from_json(j.at("model"));
  EXPECT_EQ(m.K(), 3);
  EXPECT_DOUBLE_EQ(j.at("prob_positive").get<double>(), m.prob_positive(0.4));
  EXPECT_DOUBLE_EQ(j.at("pmf").at("-2").get<double>(), m.pmf(0.4, -2));
}

TEST(Cli, SimulateDumpConfigAndDeterminism) {
  const auto dump = run("simulate --scenario scenario1 --reps 7 --dump-config");
  ASSERT_EQ(dump.code, 0);
  const auto cfg = config_from_json(json::parse(dump.out));
  EXPECT_EQ(cfg.reps, 7);
  EXPECT_EQ(cfg.scenario, Scenario::scenario1);

  const auto path = scratch("cfg.json");
  {
    std::ofstream os(path);
    os << R"({"scenario":"two_item","links":["identity"],"patterns":["abs:0.3"],"K":3,"gammas":[0.1,0.2],)"
       << R"("L":[5,10],"reps":3000,"seed":11})";
  }
  const auto a = run("simulate --config " + path.string() + " --threads 1");
  const auto b = run("simulate --config " + path.string() + " --threads 4");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), kExperimentCsvHeader);
  const auto annotated = run("simulate --config " + path.string() + " --annotate");
  EXPECT_EQ(annotated.out.rfind("# {", 0), 0u);
  EXPECT_NE(annotated.out.find(a.out), std::string::npos);
  EXPECT_NE(run("simulate --config " + path.string() + " --seed 12").out, a.out);
  fs::remove(path);
}

TEST(Cli, RatesAndRank) {
  const auto r = json::parse(run("rates --psi abs:0.1 --K 4 --gamma 0.15").out);
  EXPECT_GT(r.at("binary").at("rate").get<double>(), r.at("ordinal").at("rate").get<double>());
  EXPECT_TRUE(r.at("predicted_crossover_L").is_number());
  const auto rank = run("rank --n 5 --gap 0.2 --L 40 --seed 3");
  ASSERT_EQ(rank.code, 0);
  const auto j = json::parse(rank.out);
  EXPECT_GE(j.at("tau_ordinal").get<double>(), 0.0);
  EXPECT_LE(j.at("tau_binary").get<double>(), 1.0);
  EXPECT_EQ(run("rank --n 5 --gap 0.2 --L 40 --seed 3").out, rank.out);
}

TEST(Cli, IngestEvaluateHistogram) {
  const auto ratings = scratch("ratings.tab");
  const auto pairs = scratch("pairs.bin");
  {
    std::ofstream os(ratings);
    // two users, three items; user 2 repeats item 3 later with a new rating
    os << "1\t1\t5\t1\n1\t2\t3\t2\n1\t3\t1\t3\n2\t1\t4\t4\n2\t2\t4\t5\n2\t3\t2\t6\n2\t3\t1\t7\n";
  }
  const auto ing = run("ingest --format movielens-100k-tab --path " + ratings.string() + " --pairs-out " +
                       pairs.string());
  ASSERT_EQ(ing.code, 0);
  const auto s = json::parse(ing.out);
  EXPECT_EQ(s.at("ratings").get<int>(), 6);
  EXPECT_EQ(s.at("items_retained").get<int>(), 3);
  const auto data = read_pairs_bin(pairs.string());
  EXPECT_EQ(data.comparison_count(), 5u);  // user 2 rated items 1 and 2 equally

  const auto hist = json::parse(run("histogram --pairs " + pairs.string()).out);
  ASSERT_EQ(hist.at("bins").size(), 4u);
  EXPECT_EQ(hist.at("bins")[0].at("count").get<int>(), 0);
  EXPECT_EQ(hist.at("bins")[1].at("count").get<int>(), 2);

  // too few comparisons per pair for the default threshold
  EXPECT_EQ(run("evaluate --pairs " + pairs.string()).code, 2);

  const auto synth = run("ingest --synthetic --items 6 --users-per-pair 30 --pairs-out " + pairs.string());
  ASSERT_EQ(synth.code, 0);
  const auto ev = run("evaluate --pairs " + pairs.string() + " --reps 20");
  ASSERT_EQ(ev.code, 0);
  const auto e = json::parse(ev.out);
  EXPECT_EQ(e.at("eligible_pairs").get<int>(), 15);
  EXPECT_EQ(e.at("pairing").get<std::string>(), "per-pair");
  EXPECT_EQ(run("evaluate --pairs " + pairs.string() + " --reps 20 --threads 3").out, ev.out);
  fs::remove(ratings);
  fs::remove(pairs);
}
