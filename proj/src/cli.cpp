#include "tsqc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "tsqc/io.hpp"

namespace tsqc::cli {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void print_distribution(std::ostream& out, const std::string& name, const char* symbol,
                        std::span<const LabeledValue> entries, const char* tag) {
  out << "  " << name << " →";
  for (const auto& e : entries) out << ' ' << symbol << '(' << e.label << ")=" << fixed(e.value);
  out << "  [" << tag << "]\n";
}

}  // namespace

Rule rule_from_string(std::string_view s) {
  if (s == "all") return Rule::all;
  if (s == "abl") return Rule::abl;
  if (s == "kastner") return Rule::kastner;
  if (s == "born-predictive") return Rule::born_predictive;
  if (s == "born-retrodictive") return Rule::born_retrodictive;
  throw Error(ErrorKind::parse_error, "unknown rule '" + std::string(s) + "'");
}

void print_report(const CounterfactualReport& rep, Rule rule, bool with_oracle, std::ostream& out) {
  out << "scenario: " << rep.scenario << '\n';
  out << "actual record:";
  for (std::size_t i = 0; i < rep.actual_record.size(); ++i) {
    out << (i ? "; " : " ") << rep.actual_record[i].what << " at t=" << fixed(rep.actual_record[i].time);
  }
  out << '\n';
  if (!rep.candidates.empty()) {
    out << "each counterfactual adds exactly one measurement at t=" << fixed(rep.candidates.front().time)
        << " to this record\n";
  }
  if (with_oracle) {
    out << "seed=" << rep.seed << " trials=" << rep.trials << " k_sigma=" << fixed(rep.k_sigma, 2)
        << " generator=" << rep.generator << '\n';
  }

  const auto show = [rule](Rule r) { return rule == Rule::all || rule == r; };
  for (const auto& c : rep.candidates) {
    out << '\n' << c.measurement << '\n';
    if (show(Rule::abl)) {
      if (c.abl) {
        print_distribution(out, c.measurement, "p", c.abl->entries(), "ABL");
      } else {
        out << "  " << c.measurement << " → ImpossiblePostselection: a and b cannot both occur with "
            << c.measurement << " performed  [ABL]\n";
      }
    }
    if (show(Rule::kastner)) {
      if (c.kastner) {
        print_distribution(out, c.measurement, "w", c.kastner->entries, "Kastner");
        if (!c.kastner->normalized) {
          out << "  warning: weights sum to " << fixed(c.kastner->total()) << "; not a probability distribution\n";
        }
      } else {
        out << "  " << c.measurement << " → " << c.kastner_error << ": <b|a> = 0  [Kastner]\n";
      }
    }
    if (show(Rule::born_predictive) && c.born_predictive) {
      print_distribution(out, c.measurement, "p", c.born_predictive->entries(), "Born predictive");
    }
    if (show(Rule::born_retrodictive) && c.born_retrodictive) {
      print_distribution(out, c.measurement, "p", c.born_retrodictive->entries(), "Born retrodictive");
    }
    if (!with_oracle) continue;

    out << "  oracle: kept " << c.oracle.trials_kept << '/' << c.oracle.trials_total;
    for (const auto& o : c.oracle.outcomes) {
      out << "  f(" << o.label << ")=" << fixed(o.frequency) << " n=" << o.count;
    }
    out << '\n';
    if (c.impossible_postselection) {
      out << "  verdict: " << (c.consistent() ? "CONSISTENT (oracle kept no trials)" : "FAIL (oracle kept trials)")
          << '\n';
    } else if (c.verdict) {
      out << "  verdict: " << (c.verdict->pass ? "PASS" : "FAIL");
      if (!c.verdict->note.empty()) out << " (" << c.verdict->note << ')';
      out << '\n';
    }
  }
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err, const Tolerances& tol) {
  if (opt.trials < 1) {
    err << "usage error: --trials must be at least 1\n";
    return kInvalidInput;
  }
  CounterfactualReport rep;
  try {
    const Scenario s = load_scenario(opt.scenario, tol);
    EnsembleConfig cfg{opt.trials, opt.seed, SelectionMode::pre_and_postselected, opt.workers};
    rep = counterfactual_report(s, cfg, opt.k_sigma, tol);
  } catch (const Error& e) {
    err << opt.scenario.string() << ": " << e.what() << '\n';
    return kInvalidInput;
  }

  print_report(rep, opt.rule, opt.oracle, out);

  if (opt.json) {
    ReportDocument doc{std::string(kToolVersion), utc_timestamp(), tol, rep};
    std::ofstream f(*opt.json);
    if (!f) {
      err << "cannot write " << opt.json->string() << '\n';
      return kInvalidInput;
    }
    f << report_to_json(doc).dump(2) << '\n';
  }

  if (rep.all_impossible()) return kImpossibleOnly;
  if (opt.oracle && !rep.all_consistent()) return kOracleDisagreement;
  return kSuccess;
}

namespace {

struct NamedCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<NamedCheck> named_checks(const EnsembleConfig& cfg, double k_sigma, const Tolerances& tol) {
  std::vector<NamedCheck> checks;
  const Scenario holes = three_holes();
  const auto rep = counterfactual_report(holes, cfg, k_sigma, tol);

  const auto claim = [&](std::size_t idx, const std::string& label, const std::string& other, const char* name) {
    const auto& c = rep.candidates[idx];
    const double p = c.abl->at(label);
    const auto counterexamples = c.oracle.outcome(other).count;
    const bool ok = std::abs(p - 1.0) <= 1e-12 && counterexamples == 0 && c.consistent();
    checks.push_back({name, ok,
                      c.measurement + " p(" + label + ")=" + fixed(p) + " kept=" + std::to_string(c.oracle.trials_kept) +
                          " counterexamples=" + std::to_string(counterexamples)});
  };
  claim(0, "hole1", "holes23", "three_holes claim (a)");
  claim(1, "hole2", "holes13", "three_holes claim (b)");

  const auto& full = rep.candidates[2];
  checks.push_back({"three_holes M_full ABL vs oracle", full.consistent(),
                    "p=(" + fixed((*full.abl)[0]) + ", " + fixed((*full.abl)[1]) + ", " + fixed((*full.abl)[2]) +
                        ") kept=" + std::to_string(full.oracle.trials_kept)});

  const auto& w = *full.kastner;
  checks.push_back({"Kastner rule self-consistency failure", !w.normalized && std::abs(w.total() - 3.0) <= 1e-12,
                    "weights sum to " + fixed(w.total())});

  RaffleScenario raffle;
  raffle.n_coins = 10000;
  raffle.raffle_held = false;
  const auto r = quantum_raffle(raffle, SplitMix64::stream_seed(cfg.seed, 0x7261666Cu), cfg.workers, tol);
  checks.push_back({"quantum raffle T=N implies T=0", r.null_count == raffle.n_coins && r.contradiction,
                    "NULL=" + std::to_string(r.null_count) + "/" + std::to_string(raffle.n_coins) +
                        " P(" + r.stipulation + ")=" + sci(r.stipulation_probability)});
  return checks;
}

}  // namespace

int cmd_verify(const VerifyOptions& opt_in, std::ostream& out, const Tolerances& tol) {
  VerifyOptions opt = opt_in;
  if (opt.quick) {
    opt.trials = 1000;
    opt.k_sigma = 6.0;
  }
  out << "tsqc verify: seed=" << opt.seed << " trials=" << opt.trials << " k_sigma=" << fixed(opt.k_sigma, 2)
      << " scenarios=" << opt.scenarios << " generator=" << SplitMix64::algorithm_id << " block_size=" << kBlockSize
      << '\n';

  const EnsembleConfig base{opt.trials, opt.seed, SelectionMode::pre_and_postselected, opt.workers};
  std::size_t named_pass = 0;
  const auto checks = named_checks(base, opt.k_sigma, tol);
  for (const auto& c : checks) {
    out << "[named] " << c.name << ": " << c.detail << "  " << (c.pass ? "PASS" : "FAIL") << '\n';
    named_pass += c.pass;
  }

  std::size_t random_pass = 0;
  for (std::size_t i = 0; i < opt.scenarios; ++i) {
    const std::size_t dim = 2 + i % 5;
    const std::uint64_t case_seed = SplitMix64::stream_seed(opt.seed, i);
    const Scenario s = random_scenario(dim, case_seed);
    EnsembleConfig cfg = base;
    cfg.seed = case_seed;
    const auto rep = counterfactual_report(s, cfg, opt.k_sigma, tol);

    double worst = 0.0;
    std::uint64_t kept_min = opt.trials;
    for (const auto& c : rep.candidates) {
      kept_min = std::min(kept_min, c.oracle.trials_kept);
      if (!c.verdict) continue;
      for (const auto& o : c.verdict->outcomes) {
        if (o.bound > 0.0) worst = std::max(worst, o.deviation / (o.bound / opt.k_sigma));
      }
    }
    const bool pass = rep.all_consistent();
    random_pass += pass;
    char id[32];
    std::snprintf(id, sizeof id, "%03zu", i + 1);
    out << "[random " << id << "] " << s.name << " dim=" << dim << " candidates=" << rep.candidates.size()
        << " kept_min=" << kept_min << " max_z=" << fixed(worst, 3) << "  " << (pass ? "PASS" : "FAIL") << '\n';
  }

  // At most 1% of random scenarios may fail the k-sigma comparison.
  const bool random_ok = random_pass * 100 >= opt.scenarios * 99;
  const bool named_ok = named_pass == checks.size();
  out << "summary: " << random_pass << '/' << opt.scenarios << " analytic-vs-oracle PASS\n";
  out << "named: " << named_pass << '/' << checks.size() << " PASS\n";
  out << "result: " << (random_ok && named_ok ? "PASS" : "FAIL") << '\n';
  return random_ok && named_ok ? kSuccess : kOracleDisagreement;
}

int cmd_raffle(const RaffleOptions& opt, std::ostream& out, std::ostream& err, const Tolerances& tol) {
  if (opt.coins < 1) {
    err << "usage error: --coins must be at least 1\n";
    return kInvalidInput;
  }
  RaffleScenario cfg;
  cfg.n_coins = opt.coins;
  cfg.raffle_held = opt.held;
  cfg.alpha = Complex(opt.alpha_re, opt.alpha_im);
  cfg.beta = Complex(opt.beta_re, opt.beta_im);

  RaffleReport r;
  try {
    r = quantum_raffle(cfg, opt.seed, opt.workers, tol);
  } catch (const Error& e) {
    err << "raffle: " << e.what() << '\n';
    return kInvalidInput;
  }

  const auto& pc = *r.per_coin;
  out << "quantum raffle: coins=" << cfg.n_coins << " raffle held=" << (cfg.raffle_held ? "yes" : "no")
      << " alpha=(" << fixed(cfg.alpha.real()) << ',' << fixed(cfg.alpha.imag()) << ") beta=(" << fixed(cfg.beta.real())
      << ',' << fixed(cfg.beta.imag()) << ") seed=" << r.seed << " generator=" << r.generator << '\n';
  out << "per-coin probabilities: heads=" << fixed(pc[0]) << " tails=" << fixed(pc[1]) << " null=" << fixed(pc[2])
      << '\n';
  out << "counts: H=" << r.heads << " T=" << r.tails << " NULL=" << r.null_count << '\n';
  out << "contradiction analysis:\n";
  if (!cfg.raffle_held) {
    out << "  no raffle ⇒ every coin stays ready ⇒ all NULL (observed NULL=" << r.null_count << " of "
        << cfg.n_coins << ")\n";
  } else {
    const double n = static_cast<double>(cfg.n_coins);
    const double z = r.heads_std_error > 0.0
                         ? std::abs(static_cast<double>(r.heads) / n - pc[0]) / r.heads_std_error
                         : 0.0;
    out << "  raffle held ⇒ H/N=" << fixed(static_cast<double>(r.heads) / n) << " vs p(heads)=" << fixed(pc[0])
        << " (" << fixed(z, 2) << " standard errors)\n";
  }
  out << "  stipulating " << r.stipulation << " has probability " << sci(r.stipulation_probability);
  if (r.contradiction) out << ": contradiction=true (T=N implies T=0)";
  else out << ": contradiction=false";
  out << '\n';

  if (opt.json) {
    std::ofstream f(*opt.json);
    if (!f) {
      err << "cannot write " << opt.json->string() << '\n';
      return kInvalidInput;
    }
    f << raffle_to_json(r).dump(2) << '\n';
  }
  return kSuccess;
}

}  // namespace tsqc::cli
