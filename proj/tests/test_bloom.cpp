#include <cmath>

#include "doctest.h"
#include "dicupit/bench.hpp"
#include "dicupit/bloom.hpp"

using namespace dicupit;

// Reference values from tests/oracles/reference_values.py (mpmath).
TEST_CASE("bloom_fpp closed form") {
  CHECK(bloom_fpp(100, 1000, 5) == doctest::Approx(0.0094309292261224729).epsilon(1e-12));
  CHECK(bloom_fpp(1000, 9586, 5) == doctest::Approx(0.011089432607540507).epsilon(1e-12));
  CHECK(bloom_fpp(0, 1000, 5) == 0.0);
  CHECK_THROWS_AS(bloom_fpp(1, 0, 5), std::domain_error);
}

TEST_CASE("bloom_bits_for meets the target") {
  const std::uint64_t m = bloom_bits_for(1000, 5, 0.01);
  CHECK(bloom_fpp(1000, static_cast<double>(m), 5) <= 0.01);
  CHECK(bloom_fpp(1000, static_cast<double>(m - 1), 5) > 0.01);
}

TEST_CASE("counting bloom Monte Carlo FPR within x1.5 of the formula") {
  const BloomConfig cfg = BloomConfig::sized_for(2000, 5, 0.02, 3);
  CountingBloom b(cfg);
  for (const auto& n : bench_names(2000, 1, "in")) b.insert(n);
  std::uint64_t hits = 0;
  const auto probes = bench_names(100000, 2, "out");
  for (const auto& n : probes) hits += b.query(n);
  const double measured = static_cast<double>(hits) / static_cast<double>(probes.size());
  const double predicted = bloom_fpp(2000, static_cast<double>(cfg.bit_count), 5);
  CHECK(measured <= 1.5 * predicted);
  CHECK(measured >= predicted / 1.5);
}

TEST_CASE("counting bloom insert, remove and hash cost") {
  CountingBloom b(BloomConfig::sized_for(100, 5));
  const HashScope s;
  b.insert("a/b");
  CHECK(s.delta().total == 5);
  CHECK(b.query("a/b"));
  b.insert("a/b");
  CHECK(b.remove("a/b"));
  CHECK(b.query("a/b"));
  CHECK(b.remove("a/b"));
  CHECK_FALSE(b.query("a/b"));
  CHECK(b.items() == 0);
  CHECK(b.memory_bits() == b.config().bit_count * 4);
}

TEST_CASE("saturated counters stick") {
  BloomConfig c;
  c.bit_count = 1;
  c.num_hashes = 1;
  CountingBloom b(c);
  for (int i = 0; i < 20; ++i) b.insert("x");
  CHECK(b.counter(0) == CountingBloom::kCounterMax);
  for (int i = 0; i < 20; ++i) b.remove("x");
  CHECK(b.counter(0) == CountingBloom::kCounterMax);
}
