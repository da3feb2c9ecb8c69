#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "tsqc/scenarios.hpp"

using namespace tsqc;

namespace {

EnsembleConfig oracle_config(std::uint64_t trials, std::uint64_t seed) {
  EnsembleConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("three holes: pre-selected state is a genuine superposition") {
  const Scenario s = three_holes();
  CHECK_NOTHROW(validate_scenario(s));
  int nonzero = 0;
  for (std::size_t i = 0; i < 3; ++i) nonzero += std::abs(s.two_state.pre()[i]) > 1e-12 ? 1 : 0;
  CHECK(nonzero >= 2);
  CHECK(s.candidates.size() == 3);
  CHECK(s.basis_labels == std::vector<std::string>{"hole1", "hole2", "hole3"});
}

TEST_CASE("three holes report") {
  const auto rep = counterfactual_report(three_holes(), oracle_config(100000, 42));
  REQUIRE(rep.candidates.size() == 3);
  for (const auto& c : rep.candidates) {
    CHECK(c.added_measurements == std::vector<std::string>{c.measurement});
    CHECK(c.time == doctest::Approx(0.5));
    REQUIRE(c.abl.has_value());
    CHECK(c.consistent());
  }
  CHECK(rep.actual_record.size() == 2);
  CHECK(rep.all_consistent());
  CHECK_FALSE(rep.all_impossible());

  CHECK(std::abs((*rep.candidates[0].abl)[0] - 1.0) <= 1e-12);
  CHECK(std::abs((*rep.candidates[1].abl)[0] - 1.0) <= 1e-12);
  // Both claims hold for the same pre/post pair, but in different possible worlds.
  CHECK(rep.candidates[0].oracle.outcomes[1].count == 0);
  CHECK(rep.candidates[1].oracle.outcomes[1].count == 0);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs((*rep.candidates[2].abl)[k] - 1.0 / 3) <= 1e-12);
  CHECK(std::abs(rep.candidates[2].kastner->total() - 3.0) <= 1e-12);
}

TEST_CASE("impossible post-selection is recorded per candidate") {
  const std::vector<Ket> zb{Ket::basis(2, 0), Ket::basis(2, 1)};
  const Scenario s{"impossible",
                   TwoState(Ket::basis(2, 0), Ket::basis(2, 1)),
                   {ProjectiveMeasurement::from_basis("Z", zb, std::vector<std::string>{"0", "1"})},
                   ProjectiveMeasurement::from_basis("F", zb, std::vector<std::string>{"a", "b"}),
                   "b",
                   "",
                   {}};
  CHECK_NOTHROW(validate_scenario(s));
  const auto rep = counterfactual_report(s, oracle_config(2000, 1));
  CHECK(rep.all_impossible());
  CHECK(rep.candidates[0].impossible_postselection);
  CHECK_FALSE(rep.candidates[0].abl.has_value());
  CHECK(rep.candidates[0].oracle.no_kept_trials());
  CHECK(rep.candidates[0].consistent());
}

TEST_CASE("validate_scenario rejects a mismatched post-selection") {
  Scenario s = three_holes();
  s.two_state = TwoState(s.two_state.pre(), Ket({1.0, 0.0, 0.0}));
  CHECK_THROWS_AS(validate_scenario(s), Error);
  Scenario t = three_holes();
  t.b_label = "missing";
  CHECK_THROWS_AS(validate_scenario(t), Error);
  Scenario u = three_holes();
  u.candidates.clear();
  CHECK_THROWS_AS(validate_scenario(u), Error);
}

TEST_CASE("random scenarios are valid and reproducible") {
  for (std::size_t dim = 2; dim <= 6; ++dim) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Scenario s = random_scenario(dim, seed);
      CHECK_NOTHROW(validate_scenario(s));
      CHECK(s.two_state.dim() == dim);
      CHECK(!s.candidates.empty());
      CHECK(s.candidates.size() <= 3);
      for (const auto& m : s.candidates) CHECK(postselection_probability(s.two_state, m) >= kMinPostselectionProbability);
      const Scenario again = random_scenario(dim, seed);
      for (std::size_t i = 0; i < dim; ++i) CHECK(s.two_state.pre()[i] == again.two_state.pre()[i]);
    }
  }
  CHECK_THROWS_AS((void)random_scenario(1, 0), Error);
  CHECK_THROWS_AS((void)random_scenario(7, 0), Error);
}

TEST_CASE("random_basis is orthonormal and honours its first vector") {
  SplitMix64 rng(77);
  const Ket first = random_ket(4, rng);
  const auto b = random_basis(4, rng, first);
  CHECK(std::abs(std::abs(inner(b[0], first)) - 1.0) <= 1e-12);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(inner(b[i], b[j]) - Complex(i == j ? 1.0 : 0.0)) <= 1e-12);
    }
  }
}

TEST_CASE("raffle flip is unitary") {
  SplitMix64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Ket ab = random_ket(2, rng);
    const Matrix u = flip_unitary(ab[0], ab[1]);
    CHECK(max_abs_diff(u.adjoint() * u, Matrix::identity(3)) <= 1e-12);
  }
  CHECK_THROWS_AS((void)flip_unitary(Complex(1.0), Complex(1.0)), Error);
}

TEST_CASE("raffle not held: every coin reads null") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RaffleScenario cfg;
    cfg.n_coins = 50;
    cfg.raffle_held = false;
    const auto r = quantum_raffle(cfg, seed);
    CHECK(r.null_count == 50);
    CHECK(r.heads == 0);
    CHECK(r.tails == 0);
    CHECK(r.contradiction);
    CHECK(r.stipulation_probability == 0.0);
    CHECK(r.consistent);
  }
}

TEST_CASE("raffle held: heads fraction near |alpha|^2") {
  RaffleScenario cfg;
  cfg.n_coins = 10000;
  const auto r = quantum_raffle(cfg, 11);
  CHECK(r.null_count == 0);
  CHECK(r.heads + r.tails == 10000);
  const double f = r.heads / 10000.0;
  CHECK(std::abs(f - 0.5) <= 5 * std::sqrt(0.25 / 10000));
  CHECK_FALSE(r.contradiction);
  CHECK(r.stipulation_probability == doctest::Approx(std::pow(0.5, 10000.0)));

  RaffleScenario sure;
  sure.n_coins = 200;
  sure.alpha = 1.0;
  sure.beta = 0.0;
  const auto s = quantum_raffle(sure, 1);
  CHECK(s.heads == 200);
  CHECK(s.contradiction);

  RaffleScenario w = cfg;
  w.n_coins = 20000;
  CHECK(quantum_raffle(w, 5, 1).heads == quantum_raffle(w, 5, 3).heads);
}
