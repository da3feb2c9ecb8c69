// Acceptance checks. One line per criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "tsqc/cli.hpp"
#include "tsqc/rules.hpp"
#include "tsqc/scenarios.hpp"

using namespace tsqc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.pass && in_time;
  failures += pass ? 0 : 1;
  std::printf("[%s] %d. %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              limit_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

EnsembleConfig cfg(std::uint64_t trials, std::uint64_t seed, SelectionMode mode) {
  EnsembleConfig c;
  c.trials = trials;
  c.seed = seed;
  c.mode = mode;
  return c;
}

Outcome holes_claim(std::size_t candidate, const char* label) {
  const Scenario s = three_holes();
  const auto& m = s.candidates[candidate];
  const double p = abl(s.two_state, m).at(label);
  const auto r = run_pre_post_selected(s.two_state.pre(), m, s.final_measurement, s.b_label,
                                       cfg(100000, 42, SelectionMode::pre_and_postselected));
  const std::uint64_t elsewhere = r.trials_kept - r.outcome(label).count;
  char buf[160];
  std::snprintf(buf, sizeof buf, "ABL p(%s)=%.15f, oracle kept %llu, counterexamples %llu", label, p,
                static_cast<unsigned long long>(r.trials_kept), static_cast<unsigned long long>(elsewhere));
  return {std::abs(p - 1.0) <= 1e-12 && r.trials_kept > 0 && elsewhere == 0, buf};
}

}  // namespace

int main() {
  criterion(1, "three holes, M1 certainly finds hole1", 5, [] { return holes_claim(0, "hole1"); });
  criterion(2, "three holes, M2 certainly finds hole2", 5, [] { return holes_claim(1, "hole2"); });

  criterion(3, "ABL matches pre/post-selected frequencies", 120, [] {
    const std::uint64_t seed = 20240601;
    std::size_t pass = 0;
    const std::size_t n = 100;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t case_seed = SplitMix64::stream_seed(seed, i);
      const Scenario s = random_scenario(2 + i % 5, case_seed);
      const auto rep = counterfactual_report(s, cfg(100000, case_seed, SelectionMode::pre_and_postselected), 5.0);
      pass += rep.all_consistent() ? 1 : 0;
    }
    return Outcome{pass * 100 >= n * 99, std::to_string(pass) + "/" + std::to_string(n) + " scenarios pass at 5 sigma"};
  });

  criterion(4, "Born limits of one-sided selection", 60, [] {
    const std::uint64_t seed = 777;
    std::size_t pre_pass = 0;
    std::size_t post_pass = 0;
    const std::size_t n = 50;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t case_seed = SplitMix64::stream_seed(seed, i);
      const Scenario s = random_scenario(2 + i % 5, case_seed);
      const auto& m = s.candidates.front();
      const auto pre = run_preselected(s.two_state.pre(), m, cfg(100000, case_seed, SelectionMode::preselected));
      pre_pass += compare(pre, born_predictive(s.two_state.pre(), m), 5.0).pass ? 1 : 0;
      const auto post = run_postselected(m, s.final_measurement, s.b_label,
                                         cfg(100000, case_seed ^ 1, SelectionMode::postselected));
      post_pass += compare(post, born_retrodictive(s.two_state.post(), m), 5.0).pass ? 1 : 0;
    }
    return Outcome{pre_pass == n && post_pass == n,
                   "predictive " + std::to_string(pre_pass) + "/50, retrodictive " + std::to_string(post_pass) + "/50"};
  });

  criterion(5, "Kastner's weights are not a distribution", 10, [] {
    const Scenario s = three_holes();
    const auto w = kastner_rule(s.two_state, s.candidates[2]);
    bool ones = true;
    for (const auto& e : w.entries) ones = ones && std::abs(e.value - 1.0) <= 1e-12;
    std::size_t witnesses = 0;
    for (std::size_t i = 0; i < 200; ++i) {
      const Scenario r = random_scenario(2 + i % 5, SplitMix64::stream_seed(99, i));
      for (const auto& m : r.candidates) {
        try {
          if (std::abs(kastner_rule(r.two_state, m).total() - 1.0) > 0.1) ++witnesses;
        } catch (const Error&) {
          // zero overlap: no weights to judge
        }
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "M_full weights (%.12f, %.12f, %.12f) sum %.12f; %zu random witnesses",
                  w.entries[0].value, w.entries[1].value, w.entries[2].value, w.total(), witnesses);
    return Outcome{ones && std::abs(w.total() - 3.0) <= 1e-12 && witnesses >= 10, buf};
  });

  criterion(6, "raffle not held contradicts T=N", 30, [] {
    bool all_null = true;
    bool flagged = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RaffleScenario r;
      r.n_coins = 10000;
      r.raffle_held = false;
      const auto rep = quantum_raffle(r, seed);
      all_null = all_null && rep.null_count == r.n_coins && rep.heads == 0 && rep.tails == 0;
      flagged = flagged && rep.contradiction && rep.stipulation_probability == 0.0;
    }
    return Outcome{all_null && flagged, std::string("NULL=10000 for 20 seeds: ") + (all_null ? "yes" : "no") +
                                            ", P(no raffle AND T=N)=0 with contradiction flag: " +
                                            (flagged ? "yes" : "no")};
  });

  criterion(7, "ABL is time symmetric", 10, [] {
    SplitMix64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const std::size_t dim = 2 + rng.below(5);
      const auto m = testing::random_partition(dim, rng).measurement();
      const TwoState ts(random_ket(dim, rng), random_ket(dim, rng));
      const auto f = abl(ts, m);
      const auto b = abl(ts.reversed(), m);
      for (std::size_t k = 0; k < f.size(); ++k) worst = std::max(worst, std::abs(f[k] - b[k]));
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "1000 instances, max deviation %.3g", worst);
    return Outcome{worst <= 1e-12, buf};
  });

  criterion(8, "marginalizing over the final basis gives Born", 10, [] {
    SplitMix64 rng(8);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const std::size_t dim = 2 + rng.below(5);
      const auto pb = testing::random_partition(dim, rng);
      const Ket a = random_ket(dim, rng);
      const auto finals = random_basis(dim, rng);
      const auto born = born_predictive(a, pb.measurement());
      for (std::size_t g = 0; g < pb.groups.size(); ++g) {
        const auto branch = testing::project_onto(pb.members(g), testing::to_vec(a));
        double joint = 0.0;
        for (const auto& b : finals) joint += std::norm(testing::dot(testing::to_vec(b), branch));
        worst = std::max(worst, std::abs(joint - born[g]));
      }
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "1000 instances, max deviation %.3g", worst);
    return Outcome{worst <= 1e-9, buf};
  });

  criterion(9, "verify output is reproducible", 60, [] {
    auto run = [](unsigned workers) {
      cli::VerifyOptions v;
      v.seed = 7;
      v.workers = workers;
      std::ostringstream out;
      const int code = cli::cmd_verify(v, out);
      return std::make_pair(code, out.str());
    };
    const auto a = run(1);
    const auto b = run(1);
    const auto c = run(4);
    const bool same = a.second == b.second && a.second == c.second;
    return Outcome{same && a.first == 0, std::string("seed 7, workers 1/1/4: ") + (same ? "byte-identical" : "differ") +
                                             ", exit " + std::to_string(a.first)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
