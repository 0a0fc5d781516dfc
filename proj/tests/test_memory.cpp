#include <cmath>
#include <sstream>

#include "doctest.h"
#include "dicupit/bench.hpp"
#include "dicupit/pit_factory.hpp"

using namespace dicupit;

TEST_CASE("memory model mean improvements over rates 10..100") {
  const MemorySummary s = memory_table(default_rates());
  REQUIRE(s.rows.size() == 10);
  CHECK(s.mean_improvement_vs_dipit == doctest::Approx(0.3544).epsilon(0.001));
  CHECK(s.mean_improvement_vs_hash_tables == doctest::Approx(0.6509).epsilon(0.001));
}

TEST_CASE("memory model row structure") {
  const MemoryRow r = memory_model(10);
  CHECK(r.entries_per_port == doctest::Approx(800000));
  const double slots = 800000 / 0.9;
  CHECK(r.dicupit_bits == doctest::Approx(8 * slots * 22 + slots * 30));
  CHECK(r.chain_bits == doctest::Approx(6400000.0 * 120));
  CHECK(r.ht32_bits == doctest::Approx(6400000.0 / 0.9 * 56));
  CHECK_THROWS_AS(memory_model(-1), std::invalid_argument);
  CHECK(memory_model(0).dicupit_bits > 0);
  // Linear in rate once past the fixed floor.
  CHECK(memory_model(20).dicupit_bits == doctest::Approx(2 * r.dicupit_bits));
}

TEST_CASE("memory CSV rows are deterministic and match the model") {
  const auto rows = cmd_memory({10, 20}, MemoryModelParams{}, 1);
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, cmd_memory({10, 20}, MemoryModelParams{}, 1));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  for (const auto& row : rows) {
    if (row.metric != "memory_bits") continue;
    const MemoryRow m = memory_model(row.entries == 800000 ? 10 : 20);
    if (row.impl == "dicupit") CHECK(row.value == std::ceil(m.dicupit_bits));
    if (row.impl == "chain") CHECK(row.value == std::ceil(m.chain_bits));
  }
}

TEST_CASE("format_value") {
  CHECK(format_value(3) == "3");
  CHECK(format_value(0.5) == "0.5");
  CHECK(format_value(1e-4) == "1e-04");
  CHECK(std::stod(format_value(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("lookup rows carry memory equal to the closed form") {
  PitSizing s;
  s.entries_per_port = 500;
  LookupParams p;
  p.sizing = s;
  p.lookups = 2000;
  p.runs = 1;
  p.p99_samples = 500;
  const auto present = bench_names(4000, 1, "p");
  const auto absent = bench_names(4000, 2, "a");
  for (PitKind kind : all_pit_kinds()) {
    const LookupResult r = run_lookup(kind, present, absent, p);
    bool found = false;
    for (const auto& row : lookup_rows(r, s)) {
      if (row.metric == "memory_bits") {
        found = true;
        CHECK(row.value == static_cast<double>(expected_memory_bits(kind, s)));
      }
    }
    CHECK(found);
  }
}
