#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tsqc/hilbert.hpp"
#include "tsqc/rng.hpp"
#include "tsqc/rules.hpp"

namespace tsqc {

/// Which runs survive: those matching the earlier outcome, the later
/// outcome, or both.
enum class SelectionMode { preselected, postselected, pre_and_postselected };

[[nodiscard]] std::string_view to_string(SelectionMode mode) noexcept;
[[nodiscard]] SelectionMode selection_mode_from_string(std::string_view s);

struct EnsembleConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  SelectionMode mode = SelectionMode::pre_and_postselected;
  /// Worker threads; results do not depend on this value.
  unsigned workers = 1;
};

struct OutcomeTally {
  std::string label;
  std::uint64_t count = 0;
  double frequency = 0.0;
  double std_error = 0.0;  // sqrt(f (1 - f) / kept)
};

struct EnsembleReport {
  SelectionMode mode = SelectionMode::pre_and_postselected;
  std::uint64_t trials_total = 0;
  std::uint64_t trials_kept = 0;
  std::vector<OutcomeTally> outcomes;
  std::uint64_t seed = 0;
  std::string generator{SplitMix64::algorithm_id};

  /// Every run was discarded; frequencies are reported as 0.
  [[nodiscard]] bool no_kept_trials() const noexcept { return trials_kept == 0; }
  [[nodiscard]] const OutcomeTally& outcome(std::string_view label) const;
};

/// Trials are grouped in blocks of this many; block i draws from
/// SplitMix64(stream_seed(seed, i)).
inline constexpr std::uint64_t kBlockSize = 4096;

/// Samples an index with probability proportional to its weight. Weights at
/// or below the null threshold are never drawn.
class Categorical {
 public:
  explicit Categorical(std::span<const double> weights, double null_weight = Tolerances{}.null_weight);

  [[nodiscard]] std::size_t sample(SplitMix64& rng) const noexcept;
  [[nodiscard]] std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
  std::size_t last_positive_ = 0;
};

namespace detail {

inline constexpr std::size_t kDiscarded = std::numeric_limits<std::size_t>::max();

/// Runs `trials` calls of `trial(rng)`; each returns an outcome index below
/// `n_outcomes` or kDiscarded. Blocks are dealt round-robin to `workers`
/// threads and their integer tallies summed, so the result is independent of
/// the worker count.
template <class Trial>
std::vector<std::uint64_t> run_blocks(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                                      std::size_t n_outcomes, const Trial& trial) {
  const std::uint64_t n_blocks = (trials + kBlockSize - 1) / kBlockSize;
  const unsigned n_workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, std::max<std::uint64_t>(n_blocks, 1)));

  std::vector<std::vector<std::uint64_t>> partial(n_workers, std::vector<std::uint64_t>(n_outcomes, 0));
  auto work = [&](unsigned w) {
    auto& counts = partial[w];
    for (std::uint64_t block = w; block < n_blocks; block += n_workers) {
      SplitMix64 rng(SplitMix64::stream_seed(seed, block));
      const std::uint64_t end = std::min(trials, (block + 1) * kBlockSize);
      for (std::uint64_t t = block * kBlockSize; t < end; ++t) {
        const std::size_t k = trial(rng);
        if (k != kDiscarded) ++counts[k];
      }
    }
  };

  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
  }

  std::vector<std::uint64_t> total(n_outcomes, 0);
  for (const auto& counts : partial) {
    for (std::size_t k = 0; k < n_outcomes; ++k) total[k] += counts[k];
  }
  return total;
}

EnsembleReport make_report(SelectionMode mode, std::uint64_t trials, std::uint64_t seed,
                           std::span<const std::string> labels, std::span<const std::uint64_t> counts);

}  // namespace detail

/// Each trial draws an outcome of `m` by the Born rule on `a`; nothing is
/// discarded.
[[nodiscard]] EnsembleReport run_preselected(const Ket& a, const ProjectiveMeasurement& m,
                                             const EnsembleConfig& cfg, const Tolerances& tol = {});

/// Each trial: draw an outcome k of `m` on `a`, collapse to P_k a normalized,
/// draw an outcome of `final_measurement` on the collapsed state, and keep the
/// run only if that outcome is `b_label`. The `b_label` projector must be
/// rank 1. Throws InvalidConfig unless cfg.mode is pre_and_postselected.
[[nodiscard]] EnsembleReport run_pre_post_selected(const Ket& a, const ProjectiveMeasurement& m,
                                                   const ProjectiveMeasurement& final_measurement,
                                                   std::string_view b_label, const EnsembleConfig& cfg,
                                                   const Tolerances& tol = {});

/// As run_pre_post_selected, but each trial starts from a computational basis
/// ket drawn uniformly, i.e. the maximally mixed state.
[[nodiscard]] EnsembleReport run_postselected(const ProjectiveMeasurement& m,
                                              const ProjectiveMeasurement& final_measurement,
                                              std::string_view b_label, const EnsembleConfig& cfg,
                                              const Tolerances& tol = {});

struct OutcomeCheck {
  std::string label;
  std::uint64_t count = 0;
  double frequency = 0.0;
  double expected = 0.0;
  double deviation = 0.0;  // |frequency - expected|
  double bound = 0.0;      // k_sigma * standard error; 0 under the exact rule
  bool exact_rule = false;  // expected is 0 or 1: counts must be none or all
  bool pass = false;
};

struct Verdict {
  double k_sigma = 5.0;
  std::vector<OutcomeCheck> outcomes;
  bool pass = false;
  std::string note;
};

/// Probabilities within this distance of 0 or 1 are checked by exact counts.
inline constexpr double kExactProbabilityTolerance = 1e-12;

/// Compares oracle frequencies with analytic probabilities outcome by
/// outcome. The standard error used is the larger of the empirical one and
/// sqrt(p (1 - p) / kept), so a rare outcome that happens to draw zero counts
/// is not judged against a zero-width interval. Throws LabelMismatch when
/// labels differ in content or order. A report with no kept trials fails.
[[nodiscard]] Verdict compare(const EnsembleReport& report, const Distribution& analytic, double k_sigma);

}  // namespace tsqc
