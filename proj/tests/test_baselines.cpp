#include "doctest.h"
#include "dicupit/baseline_pits.hpp"
#include "dicupit/bench.hpp"
#include "dicupit/pit_factory.hpp"

using namespace dicupit;

namespace {
constexpr Timestamp16 t0{10};
}

TEST_CASE("every PIT aggregates and fans out the same way") {
  PitSizing s;
  s.fingerprint_bits = 12;
  for (PitKind kind : all_pit_kinds(true)) {
    CAPTURE(to_string(kind));
    auto pit = make_pit(kind, s);
    CHECK(pit->on_interest("a/b", 1, t0) == InterestDecision::ForwardToFib);
    CHECK(pit->on_interest("a/b", 3, t0) == InterestDecision::Aggregated);
    CHECK(pit->on_data("a/b", t0) == DataDecision::forward(InterfaceSet{1, 3}));
    CHECK(pit->on_data("c/d", t0) == DataDecision::no_match());
  }
}

TEST_CASE("DiPIT costs five hashes per filter consulted") {
  DiPitConfig c;
  DiPit pit(c);
  const HashScope i;
  pit.on_interest("x/y", 2, t0);
  CHECK(i.delta().total == 5 * pit.filter_consults());
  const std::uint64_t consults = pit.filter_consults();
  const HashScope d;
  pit.on_data("x/y", t0);
  CHECK(d.delta().total == 5 * (pit.filter_consults() - consults));
  CHECK(pit.filter_consults() - consults >= 8);
}

TEST_CASE("DiPIT expire removes nothing") {
  DiPit pit(DiPitConfig{});
  pit.on_interest("x/y", 0, t0);
  CHECK(pit.expire(Timestamp16{60000}) == 0);
}

TEST_CASE("chain memory: 10^6 entries at 88 bits plus 32-bit heads") {
  HashPitConfig c;
  c.capacity = 1000000;
  ChainPit pit(c);
  CHECK(pit.entry_bits() == 88);
  CHECK(pit.memory_bits() == 88ULL * 1000000 + 32ULL * 1000000);
  c.num_interfaces = 16;
  CHECK(ChainPit(c).entry_bits() == 96);
}

TEST_CASE("chain hashes twice per packet") {
  ChainPit pit(HashPitConfig{});
  const HashScope s;
  pit.on_interest("p/q", 0, t0);
  CHECK(s.delta().total == 2);
}

TEST_CASE("HT32 probe count grows with load") {
  HashPitConfig c;
  c.capacity = 4096;
  auto probes_at = [&](double load) {
    Ht32Pit pit(c);
    const auto names = bench_names(static_cast<std::uint64_t>(load * 4096), 3, "ld");
    for (std::size_t i = 0; i < names.size(); ++i) pit.on_interest(names[i], i % 8, t0);
    const auto absent = bench_names(5000, 4, "ab");
    const std::uint64_t before = probe_counters().bucket_probes;
    for (const auto& n : absent) pit.lookup(n, t0);
    return static_cast<double>(probe_counters().bucket_probes - before) / 5000.0;
  };
  const double p25 = probes_at(0.25);
  const double p90 = probes_at(0.9);
  CHECK(p25 < p90);
  CHECK(p90 > 5.0);
  Ht32Pit pit(c);
  CHECK(pit.memory_bits() == 4096ULL * 56);
}

TEST_CASE("HT32 and chain expire dead entries") {
  for (PitKind kind : {PitKind::Chain, PitKind::Ht32, PitKind::Oracle}) {
    auto pit = make_pit(kind, PitSizing{});
    pit->on_interest("a", 0, t0);
    pit->on_interest("b", 1, t0.plus(500));
    CHECK(pit->expire(t0.plus(1001)) == 1);
    CHECK(pit->size() == 1);
  }
}

TEST_CASE("expected_memory_bits matches constructed tables") {
  PitSizing s;
  s.entries_per_port = 3000;
  for (PitKind kind : all_pit_kinds()) {
    CAPTURE(to_string(kind));
    CHECK(make_pit(kind, s)->memory_bits() == expected_memory_bits(kind, s));
  }
  CHECK_THROWS_AS(parse_pit_kind("bogus"), std::invalid_argument);
  CHECK(parse_pit_kind("ht32") == PitKind::Ht32);
}
