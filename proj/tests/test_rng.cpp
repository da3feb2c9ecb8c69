#include <doctest.h>

#include <array>
#include <cmath>

#include "tsqc/rng.hpp"

using tsqc::SplitMix64;

// Reference streams computed with a separate Python implementation of the
// same generator.
TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 a(1234567);
  const std::array<std::uint64_t, 5> expected{6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                                              4593380528125082431ULL, 16408922859458223821ULL};
  for (const auto e : expected) CHECK(a.next() == e);

  SplitMix64 z(0);
  CHECK(z.next() == 16294208416658607535ULL);
  CHECK(z.next() == 7960286522194355700ULL);
  CHECK(z.next() == 487617019471545679ULL);

  CHECK(SplitMix64::stream_seed(42, 0) == 6756303123087779718ULL);
  CHECK(SplitMix64::stream_seed(42, 1) == 9351518262514500345ULL);
  CHECK(SplitMix64::stream_seed(42, 2) == 8028069254982791587ULL);

  SplitMix64 u(1234567);
  CHECK(u.uniform() == 0.3500795420214081);
  CHECK(u.uniform() == 0.17364409667091263);
}

TEST_CASE("split does not advance the parent") {
  SplitMix64 g(99);
  auto s1 = g.split(3);
  auto s2 = g.split(3);
  CHECK(s1.next() == s2.next());
  SplitMix64 fresh(99);
  CHECK(g.next() == fresh.next());
  CHECK(g.split(3).next() == SplitMix64(SplitMix64::stream_seed(99, 3)).next());
}

TEST_CASE("below stays in range and covers it") {
  SplitMix64 g(5);
  std::array<int, 7> seen{};
  for (int i = 0; i < 7000; ++i) {
    const auto r = g.below(7);
    REQUIRE(r < 7);
    ++seen[r];
  }
  for (const int c : seen) CHECK(c > 800);
  CHECK(g.below(1) == 0);
}

TEST_CASE("uniform and normal moments") {
  SplitMix64 g(8);
  double su = 0.0;
  double sn = 0.0;
  double sn2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double x = g.normal();
    REQUIRE(std::isfinite(x));
    sn += x;
    sn2 += x * x;
  }
  CHECK(std::abs(su / n - 0.5) < 0.005);
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(std::abs(sn2 / n - 1.0) < 0.02);
}
