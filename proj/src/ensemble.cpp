#include "tsqc/ensemble.hpp"

#include <cmath>

namespace tsqc {

std::string_view to_string(SelectionMode mode) noexcept {
  switch (mode) {
    case SelectionMode::preselected: return "preselected";
    case SelectionMode::postselected: return "postselected";
    case SelectionMode::pre_and_postselected: return "pre_and_postselected";
  }
  return "unknown";
}

SelectionMode selection_mode_from_string(std::string_view s) {
  if (s == "preselected") return SelectionMode::preselected;
  if (s == "postselected") return SelectionMode::postselected;
  if (s == "pre_and_postselected") return SelectionMode::pre_and_postselected;
  throw Error(ErrorKind::parse_error, "unknown selection mode '" + std::string(s) + "'");
}

const OutcomeTally& EnsembleReport::outcome(std::string_view label) const {
  for (const auto& o : outcomes) {
    if (o.label == label) return o;
  }
  throw Error(ErrorKind::label_mismatch, "no outcome labeled '" + std::string(label) + "'");
}

Categorical::Categorical(std::span<const double> weights, double null_weight) {
  cdf_.reserve(weights.size());
  double running = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] > null_weight) {
      running += weights[k];
      last_positive_ = k;
      any = true;
    }
    cdf_.push_back(running);
  }
  if (!any) throw Error(ErrorKind::zero_vector, "no outcome has positive weight");
}

std::size_t Categorical::sample(SplitMix64& rng) const noexcept {
  const double u = rng.uniform() * cdf_.back();
  for (std::size_t k = 0; k < cdf_.size(); ++k) {
    // Null outcomes repeat the previous cdf value and can never satisfy this.
    if (u < cdf_[k]) return k;
  }
  return last_positive_;
}

namespace detail {

EnsembleReport make_report(SelectionMode mode, std::uint64_t trials, std::uint64_t seed,
                           std::span<const std::string> labels, std::span<const std::uint64_t> counts) {
  EnsembleReport r;
  r.mode = mode;
  r.trials_total = trials;
  r.seed = seed;
  for (const auto c : counts) r.trials_kept += c;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    OutcomeTally t{labels[k], counts[k], 0.0, 0.0};
    if (r.trials_kept > 0) {
      const double n = static_cast<double>(r.trials_kept);
      t.frequency = static_cast<double>(counts[k]) / n;
      t.std_error = std::sqrt(t.frequency * (1.0 - t.frequency) / n);
    }
    r.outcomes.push_back(std::move(t));
  }
  return r;
}

}  // namespace detail

namespace {

void require_mode(const EnsembleConfig& cfg, SelectionMode expected) {
  if (cfg.mode != expected) {
    throw Error(ErrorKind::invalid_config, "ensemble mode is " + std::string(to_string(cfg.mode)) +
                                               ", expected " + std::string(to_string(expected)));
  }
  if (cfg.trials < 1) throw Error(ErrorKind::invalid_config, "ensemble needs at least one trial");
}

std::vector<double> outcome_weights(const ProjectiveMeasurement& m, const Ket& state) {
  std::vector<double> w;
  w.reserve(m.size());
  for (const auto& p : m.projectors()) w.push_back(apply_projector(p, state).weight);
  return w;
}

std::size_t final_index(const ProjectiveMeasurement& final_measurement, std::string_view b_label,
                        const Tolerances& tol) {
  const std::size_t b = final_measurement.index_of(b_label);
  if (b == final_measurement.size()) {
    throw Error(ErrorKind::label_mismatch, "final measurement '" + final_measurement.name() +
                                               "' has no outcome '" + std::string(b_label) + "'");
  }
  (void)final_measurement.projectors()[b].range_ket(tol);  // RankError unless rank 1
  return b;
}

/// Measurement of `m` on `state` followed by `final_measurement` on the
/// collapsed state, with every collapse branch precomputed.
struct TwoStepSampler {
  Categorical intermediate;
  std::vector<Categorical> final_given;  // indexed by intermediate outcome

  TwoStepSampler(const Ket& state, const ProjectiveMeasurement& m, const ProjectiveMeasurement& final_measurement,
                 const Tolerances& tol)
      : intermediate(outcome_weights(m, state), tol.null_weight) {
    // Placeholder weights keep null branches indexable; they are never drawn.
    const std::vector<double> unreachable{1.0};
    for (const auto& p : m.projectors()) {
      const auto branch = apply_projector(p, state);
      if (branch.weight <= tol.null_weight) {
        final_given.emplace_back(unreachable, tol.null_weight);
        continue;
      }
      const Ket collapsed = normalize(branch.vector, tol);
      final_given.emplace_back(outcome_weights(final_measurement, collapsed), tol.null_weight);
    }
  }

  /// Intermediate outcome, or kDiscarded when the final outcome is not `keep`.
  std::size_t operator()(SplitMix64& rng, std::size_t keep) const noexcept {
    const std::size_t k = intermediate.sample(rng);
    return final_given[k].sample(rng) == keep ? k : detail::kDiscarded;
  }
};

}  // namespace

EnsembleReport run_preselected(const Ket& a, const ProjectiveMeasurement& m, const EnsembleConfig& cfg,
                               const Tolerances& tol) {
  require_mode(cfg, SelectionMode::preselected);
  m.require_valid(a.dim());
  const Categorical born(outcome_weights(m, a), tol.null_weight);
  const auto counts = detail::run_blocks(cfg.trials, cfg.seed, cfg.workers, m.size(),
                                         [&](SplitMix64& rng) { return born.sample(rng); });
  const auto labels = m.labels();
  return detail::make_report(cfg.mode, cfg.trials, cfg.seed, labels, counts);
}

EnsembleReport run_pre_post_selected(const Ket& a, const ProjectiveMeasurement& m,
                                     const ProjectiveMeasurement& final_measurement, std::string_view b_label,
                                     const EnsembleConfig& cfg, const Tolerances& tol) {
  require_mode(cfg, SelectionMode::pre_and_postselected);
  m.require_valid(a.dim());
  final_measurement.require_valid(a.dim());
  const std::size_t b = final_index(final_measurement, b_label, tol);

  const TwoStepSampler sampler(a, m, final_measurement, tol);
  const auto counts = detail::run_blocks(cfg.trials, cfg.seed, cfg.workers, m.size(),
                                         [&](SplitMix64& rng) { return sampler(rng, b); });
  const auto labels = m.labels();
  return detail::make_report(cfg.mode, cfg.trials, cfg.seed, labels, counts);
}

EnsembleReport run_postselected(const ProjectiveMeasurement& m, const ProjectiveMeasurement& final_measurement,
                                std::string_view b_label, const EnsembleConfig& cfg, const Tolerances& tol) {
  require_mode(cfg, SelectionMode::postselected);
  const std::size_t dim = m.dim();
  m.require_valid(dim);
  final_measurement.require_valid(dim);
  const std::size_t b = final_index(final_measurement, b_label, tol);

  std::vector<TwoStepSampler> from_reference;
  from_reference.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) from_reference.emplace_back(Ket::basis(dim, i), m, final_measurement, tol);

  const auto counts = detail::run_blocks(cfg.trials, cfg.seed, cfg.workers, m.size(), [&](SplitMix64& rng) {
    return from_reference[rng.below(dim)](rng, b);
  });
  const auto labels = m.labels();
  return detail::make_report(cfg.mode, cfg.trials, cfg.seed, labels, counts);
}

Verdict compare(const EnsembleReport& report, const Distribution& analytic, double k_sigma) {
  if (report.outcomes.size() != analytic.size()) {
    throw Error(ErrorKind::label_mismatch, "report and distribution have different outcome counts");
  }
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    if (report.outcomes[k].label != analytic.entries()[k].label) {
      throw Error(ErrorKind::label_mismatch,
                  "outcome '" + report.outcomes[k].label + "' vs '" + analytic.entries()[k].label + "'");
    }
  }

  Verdict v;
  v.k_sigma = k_sigma;
  if (report.no_kept_trials()) {
    v.note = "no kept trials";
    for (const auto& e : analytic.entries()) v.outcomes.push_back({e.label, 0, 0.0, e.value, 0.0, 0.0, false, false});
    return v;
  }

  const double n = static_cast<double>(report.trials_kept);
  v.pass = true;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const auto& tally = report.outcomes[k];
    OutcomeCheck c;
    c.label = tally.label;
    c.count = tally.count;
    c.frequency = tally.frequency;
    c.expected = analytic[k];
    c.deviation = std::abs(c.frequency - c.expected);
    if (c.expected <= kExactProbabilityTolerance) {
      c.exact_rule = true;
      c.pass = tally.count == 0;
    } else if (c.expected >= 1.0 - kExactProbabilityTolerance) {
      c.exact_rule = true;
      c.pass = tally.count == report.trials_kept;
    } else {
      const double analytic_se = std::sqrt(c.expected * (1.0 - c.expected) / n);
      c.bound = k_sigma * std::max(tally.std_error, analytic_se);
      c.pass = c.deviation <= c.bound;
    }
    v.pass = v.pass && c.pass;
    v.outcomes.push_back(std::move(c));
  }
  return v;
}

}  // namespace tsqc
