// tsqc: time-symmetric quantum counterfactuals from the command line.
//
//   tsqc run SCENARIO.json [--trials N] [--seed S] [--rule R] [--json OUT]
//   tsqc verify --seed S [--trials N] [--quick] [--workers W]
//   tsqc raffle --coins N (--held | --not-held) [--alpha A] [--beta B] [--seed S]

#include <iostream>

#include <CLI11.hpp>

#include "tsqc/cli.hpp"
#include "tsqc/io.hpp"

int main(int argc, char** argv) {
  std::cout << std::unitbuf;
  const auto tol = tsqc::Tolerances::from_environment();

  CLI::App app{"Time-symmetric quantum counterfactual probabilities with a Monte Carlo oracle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsqc::kToolVersion));

  tsqc::cli::RunOptions run;
  std::string rule = "all";
  std::string run_json;
  bool no_oracle = false;
  auto* run_cmd = app.add_subcommand("run", "Evaluate every rule on a scenario file and check it with the oracle");
  run_cmd->add_option("scenario", run.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--trials", run.trials, "Oracle trials per candidate measurement")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
  run_cmd->add_option("--k-sigma", run.k_sigma, "Standard errors allowed by the oracle comparison")->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "Worker threads (output does not depend on this)")->capture_default_str();
  run_cmd->add_option("--rule", rule, "Rule(s) to print")
      ->check(CLI::IsMember({"all", "abl", "kastner", "born-predictive", "born-retrodictive"}))
      ->capture_default_str();
  run_cmd->add_option("--json", run_json, "Write the report document to this path");
  run_cmd->add_flag("--no-oracle", no_oracle, "Analytic rules only");

  tsqc::cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the analytic-vs-oracle verification suite");
  verify_cmd->add_option("--seed", verify.seed, "Random seed")->required();
  verify_cmd->add_option("--trials", verify.trials, "Oracle trials per candidate")->capture_default_str();
  verify_cmd->add_option("--k-sigma", verify.k_sigma, "Standard errors allowed")->capture_default_str();
  verify_cmd->add_option("--scenarios", verify.scenarios, "Random scenarios to check")->capture_default_str();
  verify_cmd->add_option("--workers", verify.workers, "Worker threads (output does not depend on this)")
      ->capture_default_str();
  verify_cmd->add_flag("--quick", verify.quick, "10^3 trials at k_sigma 6");

  tsqc::cli::RaffleOptions raffle;
  std::string raffle_json;
  bool held = false;
  bool not_held = false;
  auto* raffle_cmd = app.add_subcommand("raffle", "Simulate the quantum raffle and its T=N contradiction");
  raffle_cmd->add_option("--coins", raffle.coins, "Number of coins (entrants)")->required();
  auto* held_flag = raffle_cmd->add_flag("--held", held, "The raffle is held (coins are flipped)");
  raffle_cmd->add_flag("--not-held", not_held, "No raffle (coins stay ready)")->excludes(held_flag);
  raffle_cmd->add_option("--alpha", raffle.alpha_re, "Real part of the heads amplitude")->capture_default_str();
  raffle_cmd->add_option("--alpha-im", raffle.alpha_im, "Imaginary part of the heads amplitude");
  raffle_cmd->add_option("--beta", raffle.beta_re, "Real part of the tails amplitude")->capture_default_str();
  raffle_cmd->add_option("--beta-im", raffle.beta_im, "Imaginary part of the tails amplitude");
  raffle_cmd->add_option("--seed", raffle.seed, "Random seed")->capture_default_str();
  raffle_cmd->add_option("--workers", raffle.workers, "Worker threads")->capture_default_str();
  raffle_cmd->add_option("--json", raffle_json, "Write the raffle report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tsqc::cli::kInvalidInput;
  }

  if (*run_cmd) {
    run.rule = tsqc::cli::rule_from_string(rule);
    run.oracle = !no_oracle;
    if (!run_json.empty()) run.json = run_json;
    return tsqc::cli::cmd_run(run, std::cout, std::cerr, tol);
  }
  if (*verify_cmd) return tsqc::cli::cmd_verify(verify, std::cout, tol);

  raffle.held = !not_held;
  if (!raffle_json.empty()) raffle.json = raffle_json;
  return tsqc::cli::cmd_raffle(raffle, std::cout, std::cerr, tol);
}
