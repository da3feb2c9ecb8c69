#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tsqc/ensemble.hpp"
#include "tsqc/hilbert.hpp"
#include "tsqc/rng.hpp"
#include "tsqc/rules.hpp"

namespace tsqc {

/// An actual record (pre-selection at t_a, post-selection at t_b) together
/// with the measurements one might counterfactually have made in between and
/// the final measurement whose `b_label` outcome realizes the post-selection.
struct Scenario {
  std::string name;
  TwoState two_state;
  std::vector<ProjectiveMeasurement> candidates;
  ProjectiveMeasurement final_measurement;
  std::string b_label;
  std::string notes;
  /// Names of the computational basis vectors; empty means "0", "1", ...
  std::vector<std::string> basis_labels;
};

/// Throws ValidationError (or the more specific kind) unless every dimension
/// agrees, every measurement is valid, and the b_label projector is rank 1
/// with range ket equal to the post-selected ket up to phase.
void validate_scenario(const Scenario& s, const Tolerances& tol = {});

/// Particle prepared in (1,1,1)/sqrt3 over three holes and post-selected in
/// (1,1,-1)/sqrt3. Candidates: M1 = {hole1, holes23}, M2 = {hole2, holes13},
/// M_full = {hole1, hole2, hole3}.
[[nodiscard]] Scenario three_holes();

/// Haar-random ket: normalized vector of independent complex Gaussians.
[[nodiscard]] Ket random_ket(std::size_t dim, SplitMix64& rng);
/// Orthonormal basis by Gram-Schmidt on complex Gaussian vectors, optionally
/// starting from `first`.
[[nodiscard]] std::vector<Ket> random_basis(std::size_t dim, SplitMix64& rng,
                                            const std::optional<Ket>& first = std::nullopt);

/// Random pre/post kets, one to three candidate measurements (random
/// partitions of random bases into at least two groups) and a final basis
/// containing the post ket. Redraws until every candidate has post-selection
/// probability of at least 1e-3. Deterministic in (dim, seed); dim in 2..6.
[[nodiscard]] Scenario random_scenario(std::size_t dim, std::uint64_t seed);

inline constexpr double kMinPostselectionProbability = 1e-3;

/// sum_k |<b|P_k|a>|^2: probability that a run survives post-selection when
/// `m` is performed in between.
[[nodiscard]] double postselection_probability(const TwoState& ts, const ProjectiveMeasurement& m);

// --- counterfactual report -------------------------------------------------

struct RecordedEvent {
  std::string what;
  double time = 0.0;
};

struct CandidateReport {
  std::string measurement;
  /// Intermediate time of the added measurement.
  double time = 0.0;
  /// Measurements added to the actual record in this possible world. Always
  /// exactly one entry: the candidate itself.
  std::vector<std::string> added_measurements;
  std::vector<std::string> labels;

  std::optional<Distribution> abl;
  bool impossible_postselection = false;
  std::optional<OutcomeWeights> kastner;
  std::string kastner_error;
  std::optional<Distribution> born_predictive;
  std::optional<Distribution> born_retrodictive;
  EnsembleReport oracle;
  std::optional<Verdict> verdict;

  /// Verdict passed, or the post-selection is impossible and the oracle kept
  /// nothing.
  [[nodiscard]] bool consistent() const noexcept;
};

struct CounterfactualReport {
  std::string scenario;
  std::vector<RecordedEvent> actual_record;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  double k_sigma = 5.0;
  std::string generator{SplitMix64::algorithm_id};
  std::vector<CandidateReport> candidates;

  [[nodiscard]] bool all_impossible() const noexcept;
  [[nodiscard]] bool all_consistent() const noexcept;
};

/// For each candidate: ABL, Kastner's weights, both Born limits, an oracle
/// run and its verdict. Candidate c's oracle uses seed
/// SplitMix64::stream_seed(cfg.seed, c). Impossible post-selections are
/// recorded per candidate, not thrown.
[[nodiscard]] CounterfactualReport counterfactual_report(const Scenario& s, const EnsembleConfig& cfg,
                                                         double k_sigma = 5.0, const Tolerances& tol = {});

// --- quantum raffle --------------------------------------------------------

/// N independent coins, each with basis {ready, heads, tails}, prepared in
/// ready. If the raffle is held each coin is flipped to alpha heads + beta tails.
struct RaffleScenario {
  std::uint64_t n_coins = 1;
  Complex alpha{1.0 / std::numbers::sqrt2};
  Complex beta{1.0 / std::numbers::sqrt2};
  bool raffle_held = true;
};

/// Coin basis order: 0 = ready, 1 = heads, 2 = tails.
/// ready -> alpha heads + beta tails, heads -> conj(beta) heads - conj(alpha) tails,
/// tails -> ready. Throws ValidationError unless |alpha|^2 + |beta|^2 = 1.
[[nodiscard]] Matrix flip_unitary(Complex alpha, Complex beta, const Tolerances& tol = {});

struct RaffleReport {
  RaffleScenario config;
  std::uint64_t seed = 0;
  std::string generator{SplitMix64::algorithm_id};
  std::uint64_t heads = 0;
  std::uint64_t tails = 0;
  std::uint64_t null_count = 0;
  /// Per-coin Born probabilities over {heads, tails, null}.
  std::optional<Distribution> per_coin;
  double heads_std_error = 0.0;  // of H / N
  std::string stipulation;       // e.g. "no raffle AND T=N"
  double stipulation_probability = 0.0;
  /// The stipulated record is impossible given whether the raffle was held.
  bool contradiction = false;
  /// Without a raffle every coin must read null.
  bool consistent = true;
};

[[nodiscard]] RaffleReport quantum_raffle(const RaffleScenario& cfg, std::uint64_t seed, unsigned workers = 1,
                                          const Tolerances& tol = {});

}  // namespace tsqc
