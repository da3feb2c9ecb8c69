#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "tsqc/scenarios.hpp"

namespace tsqc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 1,           // parse or validation failure, usage errors
  kImpossibleOnly = 2,         // every candidate has an impossible post-selection
  kOracleDisagreement = 3,     // some analytic value failed its oracle check
};

enum class Rule { all, abl, kastner, born_predictive, born_retrodictive };

struct RunOptions {
  std::filesystem::path scenario;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  double k_sigma = 5.0;
  unsigned workers = 1;
  Rule rule = Rule::all;
  bool oracle = true;
  std::optional<std::filesystem::path> json;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  double k_sigma = 5.0;
  std::size_t scenarios = 100;
  unsigned workers = 1;
  /// 10^3 trials at k_sigma 6.
  bool quick = false;
};

struct RaffleOptions {
  std::uint64_t coins = 0;
  bool held = true;
  double alpha_re = 1.0 / 1.4142135623730951;
  double alpha_im = 0.0;
  double beta_re = 1.0 / 1.4142135623730951;
  double beta_im = 0.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::optional<std::filesystem::path> json;
};

[[nodiscard]] Rule rule_from_string(std::string_view s);

/// Prints the counterfactual table for a scenario file and optionally writes
/// the JSON report document.
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err, const Tolerances& tol = {});

/// Named scenarios plus `scenarios` random ones (dims cycling 2..6). Output
/// depends only on the options, never on time or worker count.
int cmd_verify(const VerifyOptions& opt, std::ostream& out, const Tolerances& tol = {});

int cmd_raffle(const RaffleOptions& opt, std::ostream& out, std::ostream& err, const Tolerances& tol = {});

/// Table rendering shared by `run` and the Python bindings.
void print_report(const CounterfactualReport& rep, Rule rule, bool with_oracle, std::ostream& out);

}  // namespace tsqc::cli
