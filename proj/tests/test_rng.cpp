#include <catch2/catch_amalgamated.hpp>

#include "dsroq/rng.hpp"

using namespace dsroq;

TEST_CASE("identical seeds give identical streams") {
  RandomStream a(123), b(123);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("derived seeds separate by tag and index") {
  const uint64_t base = 99;
  CHECK(derive_seed(base, "arrivals") != derive_seed(base, "mcts"));
  CHECK(derive_seed(base, uint64_t{0}) != derive_seed(base, uint64_t{1}));
  CHECK(derive_seed(base, "arrivals") == derive_seed(base, "arrivals"));
  CHECK(derive_seed(base, uint64_t{7}) == derive_seed(base, uint64_t{7}));
}

TEST_CASE("next_double stays in the half-open unit interval") {
  RandomStream rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.next_double();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
}

TEST_CASE("next_below covers the full range") {
  RandomStream rng(8);
  std::array<int, 5> hits = {};
  for (int i = 0; i < 5000; ++i) {
    const uint32_t v = rng.next_below(5);
    REQUIRE(v < 5);
    ++hits[v];
  }
  for (int h : hits) CHECK(h > 500);
}

TEST_CASE("poisson sample mean tracks the requested rate") {
  RandomStream rng(9);
  long long total = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) total += rng.poisson(0.3);
  const double mean = static_cast<double>(total) / n;
  CHECK(mean > 0.29);
  CHECK(mean < 0.31);

  total = 0;
  for (int i = 0; i < 20000; ++i) total += rng.poisson(75.0);
  const double big_mean = static_cast<double>(total) / 20000.0;
  CHECK(big_mean > 74.0);
  CHECK(big_mean < 76.0);
}

TEST_CASE("poisson of a zero or negative mean is zero") {
  RandomStream rng(10);
  CHECK(rng.poisson(0.0) == 0);
  CHECK(rng.poisson(-1.0) == 0);
}
