#include "tsqc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tsqc {

void validate_scenario(const Scenario& s, const Tolerances& tol) {
  const std::size_t dim = s.two_state.dim();
  if (s.candidates.empty()) throw Error(ErrorKind::validation_error, "scenario '" + s.name + "' has no candidate measurements");
  for (const auto& m : s.candidates) m.require_valid(dim);
  s.final_measurement.require_valid(dim);
  if (!s.basis_labels.empty() && s.basis_labels.size() != dim) {
    throw Error(ErrorKind::dimension_mismatch, "scenario '" + s.name + "': basis label count differs from dim");
  }
  const std::size_t b = s.final_measurement.index_of(s.b_label);
  if (b == s.final_measurement.size()) {
    throw Error(ErrorKind::label_mismatch, "final measurement has no outcome '" + s.b_label + "'");
  }
  const Ket eigen = s.final_measurement.projectors()[b].range_ket(tol);
  const double overlap = std::abs(inner(eigen, s.two_state.post()));
  if (std::abs(overlap - 1.0) > tol.aggregate) {
    std::ostringstream msg;
    msg << "post-selected ket differs from the '" << s.b_label << "' eigenket (|overlap| = " << overlap << ")";
    throw Error(ErrorKind::validation_error, msg.str());
  }
}

Scenario three_holes() {
  const double r3 = 1.0 / std::numbers::sqrt3;
  const Ket pre({r3, r3, r3});
  const Ket post({r3, r3, -r3});

  const std::vector<Ket> holes{Ket::basis(3, 0), Ket::basis(3, 1), Ket::basis(3, 2)};
  const std::vector<ProjectiveMeasurement::Group> m1{{"hole1", {0}}, {"holes23", {1, 2}}};
  const std::vector<ProjectiveMeasurement::Group> m2{{"hole2", {1}}, {"holes13", {0, 2}}};
  const std::vector<ProjectiveMeasurement::Group> full{{"hole1", {0}}, {"hole2", {1}}, {"hole3", {2}}};

  const std::vector<Ket> exit_basis{post, Ket({1.0, -1.0, 0.0}), Ket({1.0, 1.0, 2.0})};
  const std::vector<std::string> exit_labels{"B", "B_perp1", "B_perp2"};

  return Scenario{
      .name = "three_holes",
      .two_state = TwoState(pre, post, 0.0, 1.0),
      .candidates = {ProjectiveMeasurement::from_partition("M1", holes, m1),
                     ProjectiveMeasurement::from_partition("M2", holes, m2),
                     ProjectiveMeasurement::from_partition("M_full", holes, full)},
      .final_measurement = ProjectiveMeasurement::from_basis("exit", exit_basis, exit_labels),
      .b_label = "B",
      .notes = "Particle launched at A in front of a plate with three holes and detected at B behind it.",
      .basis_labels = {"hole1", "hole2", "hole3"},
  };
}

Ket random_ket(std::size_t dim, SplitMix64& rng) {
  std::vector<Complex> v(dim);
  for (auto& z : v) {
    const double re = rng.normal();
    z = Complex(re, rng.normal());
  }
  return normalize(v);
}

std::vector<Ket> random_basis(std::size_t dim, SplitMix64& rng, const std::optional<Ket>& first) {
  std::vector<Ket> basis;
  basis.reserve(dim);
  if (first) basis.push_back(*first);
  while (basis.size() < dim) {
    const Ket draw = random_ket(dim, rng);
    std::vector<Complex> v(draw.amplitudes().begin(), draw.amplitudes().end());
    // Two Gram-Schmidt passes keep orthogonality near machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : basis) {
        const Complex c = inner(e.amplitudes(), v);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= c * e[i];
      }
    }
    if (squared_norm(v) < 1e-6) continue;
    basis.push_back(normalize(v));
  }
  return basis;
}

double postselection_probability(const TwoState& ts, const ProjectiveMeasurement& m) {
  double s = 0.0;
  for (const double n : abl_numerators(ts, m.projectors())) s += n;
  return s;
}

namespace {

ProjectiveMeasurement random_partition_measurement(std::string name, std::size_t dim, SplitMix64& rng) {
  const auto basis = random_basis(dim, rng);
  const std::size_t n_groups = 2 + static_cast<std::size_t>(rng.below(dim - 1));  // 2..dim

  std::vector<std::size_t> order(dim);
  for (std::size_t i = 0; i < dim; ++i) order[i] = i;
  for (std::size_t i = dim - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  std::vector<ProjectiveMeasurement::Group> groups(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    groups[g].label = "q" + std::to_string(g);
    groups[g].members.push_back(order[g]);
  }
  for (std::size_t i = n_groups; i < dim; ++i) groups[rng.below(n_groups)].members.push_back(order[i]);
  for (auto& g : groups) std::sort(g.members.begin(), g.members.end());
  return ProjectiveMeasurement::from_partition(std::move(name), basis, groups);
}

}  // namespace

Scenario random_scenario(std::size_t dim, std::uint64_t seed) {
  if (dim < 2 || dim > 6) throw Error(ErrorKind::invalid_config, "random_scenario dim must be in 2..6");
  SplitMix64 rng(SplitMix64::stream_seed(seed, dim));

  for (;;) {
    const Ket pre = random_ket(dim, rng);
    const Ket post = random_ket(dim, rng);
    const TwoState ts(pre, post, 0.0, 1.0);

    const std::size_t n_candidates = 1 + static_cast<std::size_t>(rng.below(3));
    std::vector<ProjectiveMeasurement> candidates;
    for (std::size_t c = 0; c < n_candidates; ++c) {
      candidates.push_back(random_partition_measurement("Q" + std::to_string(c + 1), dim, rng));
    }
    const bool observable = std::all_of(candidates.begin(), candidates.end(), [&](const auto& m) {
      return postselection_probability(ts, m) >= kMinPostselectionProbability;
    });
    if (!observable) continue;

    const auto final_basis = random_basis(dim, rng, post);
    std::vector<std::string> final_labels{"b"};
    for (std::size_t i = 1; i < dim; ++i) final_labels.push_back("b_perp" + std::to_string(i));

    std::ostringstream name;
    name << "random_d" << dim << "_s" << seed;
    return Scenario{
        .name = name.str(),
        .two_state = ts,
        .candidates = std::move(candidates),
        .final_measurement = ProjectiveMeasurement::from_basis("final", final_basis, final_labels),
        .b_label = "b",
        .notes = "randomly generated",
        .basis_labels = {},
    };
  }
}

// --- counterfactual report -------------------------------------------------

bool CandidateReport::consistent() const noexcept {
  if (impossible_postselection) return oracle.no_kept_trials();
  return verdict.has_value() && verdict->pass;
}

bool CounterfactualReport::all_impossible() const noexcept {
  return !candidates.empty() &&
         std::all_of(candidates.begin(), candidates.end(), [](const auto& c) { return c.impossible_postselection; });
}

bool CounterfactualReport::all_consistent() const noexcept {
  return std::all_of(candidates.begin(), candidates.end(), [](const auto& c) { return c.consistent(); });
}

CounterfactualReport counterfactual_report(const Scenario& s, const EnsembleConfig& cfg, double k_sigma,
                                           const Tolerances& tol) {
  validate_scenario(s, tol);
  const auto& ts = s.two_state;

  CounterfactualReport report;
  report.scenario = s.name;
  report.actual_record = {{"pre-selection outcome a", ts.t_a()}, {"post-selection outcome b = " + s.b_label, ts.t_b()}};
  report.seed = cfg.seed;
  report.trials = cfg.trials;
  report.k_sigma = k_sigma;

  const double t = 0.5 * (ts.t_a() + ts.t_b());
  for (std::size_t c = 0; c < s.candidates.size(); ++c) {
    const auto& m = s.candidates[c];
    CandidateReport cr;
    cr.measurement = m.name();
    cr.time = t;
    cr.added_measurements = {m.name()};
    cr.labels = m.labels();

    try {
      cr.abl = abl(ts, m, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::impossible_postselection) throw;
      cr.impossible_postselection = true;
    }
    try {
      cr.kastner = kastner_rule(ts, m, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::zero_overlap) throw;
      cr.kastner_error = std::string(to_string(e.kind()));
    }
    cr.born_predictive = born_predictive(ts.pre(), m, tol);
    cr.born_retrodictive = born_retrodictive(ts.post(), m, tol);

    EnsembleConfig oracle_cfg = cfg;
    oracle_cfg.mode = SelectionMode::pre_and_postselected;
    oracle_cfg.seed = SplitMix64::stream_seed(cfg.seed, c);
    cr.oracle = run_pre_post_selected(ts.pre(), m, s.final_measurement, s.b_label, oracle_cfg, tol);
    if (cr.abl) cr.verdict = compare(cr.oracle, *cr.abl, k_sigma);

    report.candidates.push_back(std::move(cr));
  }
  return report;
}

// --- quantum raffle --------------------------------------------------------

Matrix flip_unitary(Complex alpha, Complex beta, const Tolerances& tol) {
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1.0) > tol.aggregate) {
    std::ostringstream msg;
    msg << "flip amplitudes have |alpha|^2 + |beta|^2 = " << n2 << ", expected 1";
    throw Error(ErrorKind::validation_error, msg.str());
  }
  // Columns are the images of ready, heads, tails.
  Matrix u(3);
  u(1, 0) = alpha;
  u(2, 0) = beta;
  u(1, 1) = std::conj(beta);
  u(2, 1) = -std::conj(alpha);
  u(0, 2) = 1.0;
  return u;
}

RaffleReport quantum_raffle(const RaffleScenario& cfg, std::uint64_t seed, unsigned workers, const Tolerances& tol) {
  if (cfg.n_coins < 1) throw Error(ErrorKind::invalid_config, "raffle needs at least one coin");
  const Matrix flip = flip_unitary(cfg.alpha, cfg.beta, tol);

  const Ket ready = Ket::basis(3, 0);
  const Ket coin_at_tb = cfg.raffle_held ? normalize(flip.apply(ready.amplitudes()), tol) : ready;

  const std::vector<Ket> basis{Ket::basis(3, 1), Ket::basis(3, 2), Ket::basis(3, 0)};
  const std::vector<std::string> labels{"heads", "tails", "null"};
  const auto final_measurement = ProjectiveMeasurement::from_basis("coin_readout", basis, labels, tol);
  const Distribution per_coin = born_predictive(coin_at_tb, final_measurement, tol);

  std::vector<double> weights{per_coin[0], per_coin[1], per_coin[2]};
  const Categorical coin(weights, tol.null_weight);
  const auto counts = detail::run_blocks(cfg.n_coins, seed, workers, 3,
                                         [&](SplitMix64& rng) { return coin.sample(rng); });

  RaffleReport r;
  r.config = cfg;
  r.seed = seed;
  r.heads = counts[0];
  r.tails = counts[1];
  r.null_count = counts[2];
  r.per_coin = per_coin;
  const double n = static_cast<double>(cfg.n_coins);
  const double fh = static_cast<double>(r.heads) / n;
  r.heads_std_error = std::sqrt(fh * (1.0 - fh) / n);

  // The stipulated record is all tails. Its probability is the N-th power of
  // the per-coin tails probability, which underflows for large N, so the
  // contradiction is decided on the per-coin probability itself.
  const double p_tails = per_coin[1];
  r.stipulation = std::string(cfg.raffle_held ? "raffle" : "no raffle") + " AND T=N";
  r.stipulation_probability = std::pow(p_tails, n);
  r.contradiction = p_tails <= tol.null_weight;
  r.consistent = cfg.raffle_held || r.null_count == cfg.n_coins;
  return r;
}

}  // namespace tsqc
