#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tsqc/scenarios.hpp"

namespace tsqc {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

// Scenario files
//
//   {
//     "format_version": 1,
//     "name": "three_holes",
//     "dim": 3,
//     "basis_labels": ["hole1", "hole2", "hole3"],
//     "pre":  [[re, im], ...],          // plain numbers are read as real
//     "post": [[re, im], ...],
//     "t_a": 0, "t_b": 1,
//     "measurements": [
//       {"name": "M1", "partition": [{"label": "hole1", "basis": ["hole1"]}, ...]},
//       {"name": "X",  "projectors": [{"label": "x0", "matrix": [[[re, im], ...], ...]}, ...]}
//     ],
//     "final": {"name": "exit", "basis": [[[re, im], ...], ...],
//               "labels": ["B", ...], "b_label": "B"}
//   }
//
// Partition groups name computational basis vectors by their basis_labels.
// Parse failures throw ParseError naming the line (syntax) or the JSON
// pointer of the offending field; scenarios that parse but break an
// invariant throw ValidationError (or a more specific kind).

[[nodiscard]] Scenario scenario_from_json(const Json& j, const Tolerances& tol = {});
[[nodiscard]] Scenario parse_scenario(std::string_view text, const Tolerances& tol = {});
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path, const Tolerances& tol = {});
/// Measurements are written as explicit projector matrices.
[[nodiscard]] Json scenario_to_json(const Scenario& s);

/// A counterfactual report plus what is needed to reproduce it.
struct ReportDocument {
  std::string tool_version{kToolVersion};
  std::string created_utc;
  Tolerances tolerances;
  CounterfactualReport report;
};

[[nodiscard]] Json report_to_json(const ReportDocument& doc);
[[nodiscard]] ReportDocument report_from_json(const Json& j);

[[nodiscard]] Json ensemble_to_json(const EnsembleReport& r);
[[nodiscard]] EnsembleReport ensemble_from_json(const Json& j);
[[nodiscard]] Json raffle_to_json(const RaffleReport& r);

/// Current UTC time as ISO 8601, for document metadata only.
[[nodiscard]] std::string utc_timestamp();

}  // namespace tsqc
