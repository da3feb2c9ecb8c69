#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <regex>
#include <sstream>

#include "tsqc/cli.hpp"
#include "tsqc/io.hpp"

using namespace tsqc;

namespace {

std::filesystem::path data(const char* name) { return std::filesystem::path(TSQC_TEST_DATA) / name; }

std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

EnsembleConfig oracle_config(std::uint64_t trials, std::uint64_t seed) {
  EnsembleConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("scenario file matches the built-in three holes") {
  const Scenario file = load_scenario(data("three_holes.json"));
  const Scenario built = three_holes();
  CHECK(file.name == built.name);
  REQUIRE(file.candidates.size() == built.candidates.size());
  for (std::size_t c = 0; c < file.candidates.size(); ++c) {
    CHECK(file.candidates[c].labels() == built.candidates[c].labels());
    for (std::size_t k = 0; k < file.candidates[c].size(); ++k) {
      CHECK(max_abs_diff(file.candidates[c].projectors()[k].matrix(), built.candidates[c].projectors()[k].matrix()) <=
            1e-12);
    }
  }
}

TEST_CASE("scenario round trip through JSON") {
  for (const Scenario& s : {three_holes(), random_scenario(4, 9)}) {
    Json j = scenario_to_json(s);
    Json k = scenario_to_json(scenario_from_json(j));
    // The final basis is recovered from rank-1 projectors, which may move the
    // last bit; everything else must survive unchanged.
    const Json& fj = j["final"]["basis"];
    const Json& fk = k["final"]["basis"];
    REQUIRE(fj.size() == fk.size());
    for (std::size_t v = 0; v < fj.size(); ++v) {
      for (std::size_t i = 0; i < fj[v].size(); ++i) {
        for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(fj[v][i][c].get<double>() - fk[v][i][c].get<double>()) <= 1e-15);
      }
    }
    j["final"].erase("basis");
    k["final"].erase("basis");
    CHECK(k == j);
  }
}

TEST_CASE("scenario parse errors name their location") {
  const auto syntax = error_message([] { (void)load_scenario(data("syntax_error.json")); });
  CHECK(syntax.rfind("ParseError: line ", 0) == 0);

  Json j = scenario_to_json(three_holes());
  j["pre"] = "nonsense";
  const auto typed = error_message([&] { (void)scenario_from_json(j); });
  CHECK(typed.find("/pre") != std::string::npos);

  const auto incomplete = error_message([] { (void)load_scenario(data("bad_incomplete.json")); });
  CHECK(incomplete.rfind("InvalidMeasurement", 0) == 0);
  CHECK(incomplete.find("completeness") != std::string::npos);

  CHECK_THROWS_AS((void)load_scenario(data("does_not_exist.json")), Error);
}

TEST_CASE("report JSON round trip is exact") {
  const auto rep = counterfactual_report(three_holes(), oracle_config(20000, 42));
  const ReportDocument doc{std::string(kToolVersion), "2026-01-01T00:00:00Z", {}, rep};
  const Json j = report_to_json(doc);
  CHECK(j.at("tool").get<std::string>() == "tsqc");
  CHECK(j.at("generator").get<std::string>() == "splitmix64");
  CHECK(j.at("block_size").get<std::uint64_t>() == kBlockSize);
  CHECK(report_to_json(report_from_json(j)) == j);
  // Text form keeps every bit of the doubles.
  CHECK(report_to_json(report_from_json(Json::parse(j.dump()))) == j);

  const auto ens = run_preselected(three_holes().two_state.pre(), three_holes().candidates[2],
                                   EnsembleConfig{1000, 1, SelectionMode::preselected, 1});
  CHECK(ensemble_to_json(ensemble_from_json(ensemble_to_json(ens))) == ensemble_to_json(ens));
}

TEST_CASE("printed table agrees with the JSON report to six decimals") {
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "tsqc_io_test_report.json";
  cli::RunOptions opt;
  opt.scenario = data("three_holes.json");
  opt.trials = 20000;
  opt.seed = 42;
  opt.json = out;
  std::ostringstream text;
  std::ostringstream err;
  REQUIRE(cli::cmd_run(opt, text, err) == cli::kSuccess);
  std::ifstream in(out);
  const Json j = Json::parse(in);
  std::filesystem::remove(out);

  const std::string table = text.str();
  for (const auto& c : j.at("candidates")) {
    for (const auto& e : c.at("abl")) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "p(%s)=%.6f", e.at("label").get<std::string>().c_str(), e.at("p").get<double>());
      CHECK_MESSAGE(table.find(buf) != std::string::npos, buf);
    }
  }
}

TEST_CASE("cli exit codes") {
  std::ostringstream out;
  std::ostringstream err;
  cli::RunOptions opt;
  opt.trials = 5000;

  opt.scenario = data("three_holes.json");
  CHECK(cli::cmd_run(opt, out, err) == cli::kSuccess);
  opt.rule = cli::Rule::kastner;
  out.str("");
  CHECK(cli::cmd_run(opt, out, err) == cli::kSuccess);
  CHECK(out.str().find("warning: weights sum to 3.000000") != std::string::npos);
  opt.rule = cli::Rule::all;

  opt.scenario = data("impossible.json");
  CHECK(cli::cmd_run(opt, out, err) == cli::kImpossibleOnly);
  opt.scenario = data("bad_incomplete.json");
  CHECK(cli::cmd_run(opt, out, err) == cli::kInvalidInput);
  opt.scenario = data("syntax_error.json");
  CHECK(cli::cmd_run(opt, out, err) == cli::kInvalidInput);

  cli::RaffleOptions raffle;
  raffle.coins = 0;
  CHECK(cli::cmd_raffle(raffle, out, err) == cli::kInvalidInput);
  raffle.coins = 100;
  raffle.held = false;
  out.str("");
  CHECK(cli::cmd_raffle(raffle, out, err) == cli::kSuccess);
  CHECK(out.str().find("contradiction=true") != std::string::npos);

  CHECK(cli::rule_from_string("born-predictive") == cli::Rule::born_predictive);
  CHECK_THROWS_AS((void)cli::rule_from_string("bayes"), Error);
}

TEST_CASE("quick verify passes") {
  cli::VerifyOptions v;
  v.seed = 3;
  v.quick = true;
  v.scenarios = 20;
  std::ostringstream out;
  CHECK(cli::cmd_verify(v, out) == cli::kSuccess);
  CHECK(std::regex_search(out.str(), std::regex("result: PASS")));
}
