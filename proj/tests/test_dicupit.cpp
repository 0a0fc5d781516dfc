#include <random>

#include "doctest.h"
#include "dicupit/bench.hpp"
#include "dicupit/dicupit_pit.hpp"

using namespace dicupit;

namespace {

DiCuPitConfig small(std::uint32_t k = 8, std::uint32_t f = 12) {
  DiCuPitConfig c;
  c.num_interfaces = k;
  c.filter.num_buckets = 1024;
  c.filter.fingerprint_bits = f;
  return c;
}

constexpr Timestamp16 t0{100};
const std::string kName = "razi/ac/ir/eng/computer-engineering.html";

}  // namespace

TEST_CASE("first interest is forwarded and stored in its interface table") {
  DiCuPit pit(small());
  CHECK(pit.on_interest(kName, 2, t0) == InterestDecision::ForwardToFib);
  CHECK(pit.sub_table_holds(2, kName, t0));
  CHECK_FALSE(pit.sub_table_holds(5, kName, t0));
  CHECK_FALSE(pit.global_entry(kName, t0).has_value());
  CHECK(pit.lookup(kName, t0) == InterfaceSet{2});
}

TEST_CASE("interfaces 2, 5, 7 aggregate into GlobalCu") {
  DiCuPit pit(small());
  CHECK(pit.on_interest(kName, 2, t0) == InterestDecision::ForwardToFib);
  CHECK(pit.on_interest(kName, 5, t0) == InterestDecision::Aggregated);
  CHECK(pit.global_entry(kName, t0) == InterfaceSet{2, 5});
  CHECK_FALSE(pit.sub_table_holds(2, kName, t0));
  CHECK(pit.on_interest(kName, 7, t0) == InterestDecision::Aggregated);
  CHECK(pit.global_entry(kName, t0) == InterfaceSet{2, 5, 7});
  CHECK(pit.size() == 1);

  const DataDecision d = pit.on_data(kName, t0);
  CHECK(d.forwarded());
  CHECK(d.interfaces == InterfaceSet{2, 5, 7});
  CHECK(pit.size() == 0);
  CHECK_FALSE(pit.on_data(kName, t0).forwarded());
}

TEST_CASE("retransmission on the same interface refreshes without moving") {
  DiCuPit pit(small());
  pit.on_interest(kName, 3, t0);
  CHECK(pit.on_interest(kName, 3, t0.plus(10)) == InterestDecision::Aggregated);
  CHECK(pit.sub_table_holds(3, kName, t0));
  CHECK_FALSE(pit.global_entry(kName, t0).has_value());
  // The refreshed expiry keeps the entry alive past the original deadline.
  const Timestamp16 late = t0.plus(pit.lifetime() + 5);
  CHECK(pit.lookup(kName, late) == InterfaceSet{3});
}

TEST_CASE("data for a single-interface entry forwards there and clears it") {
  DiCuPit pit(small());
  pit.on_interest(kName, 4, t0);
  const DataDecision d = pit.on_data(kName, t0.plus(1));
  CHECK(d == DataDecision::forward(InterfaceSet{4}));
  CHECK_FALSE(pit.sub_table_holds(4, kName, t0));
}

TEST_CASE("unknown data is NoMatch") {
  DiCuPit pit(small());
  CHECK(pit.on_data("never/asked", t0) == DataDecision::no_match());
  CHECK(pit.stats().data_no_match == 1);
}

TEST_CASE("entries expire one tick after their lifetime") {
  DiCuPit pit(small());
  pit.on_interest(kName, 1, t0);
  const std::uint32_t L = pit.lifetime();
  CHECK(L == 1000);
  CHECK(pit.lookup(kName, t0.plus(L)) == InterfaceSet{1});
  CHECK(pit.lookup(kName, t0.plus(L + 1)).empty());
  CHECK(pit.on_data(kName, t0.plus(L + 1)) == DataDecision::no_match());
}

TEST_CASE("expire purges exactly the dead entries") {
  DiCuPit pit(small(8, 16));
  std::mt19937_64 rng(5);
  const auto names = bench_names(1000, 17, "exp");
  // Lifetime is fixed; vary insertion time instead.
  std::size_t dead_expected = 0;
  const Timestamp16 now{5000};
  const std::uint32_t L = pit.lifetime();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto back = static_cast<std::uint32_t>(rng() % (2 * L));
    const Timestamp16 at{static_cast<std::uint16_t>(now.value - back)};
    REQUIRE(pit.on_interest(names[i], static_cast<std::uint32_t>(i % 8), at) != InterestDecision::InsertFailed);
    dead_expected += back > L;
  }
  CHECK(pit.expire(now) == dead_expected);
  CHECK(pit.size() == names.size() - dead_expected);
  CHECK(pit.expire(now) == 0);
  for (const auto& n : names) CHECK(pit.lookup(n, now).size() <= 1);
}

TEST_CASE("two hash invocations per packet for any interface count") {
  for (std::uint32_t k : {2U, 4U, 8U, 16U}) {
    DiCuPit pit(small(k));
    const auto names = bench_names(200, k, "h");
    for (std::size_t i = 0; i < names.size(); ++i) {
      const HashScope s;
      pit.on_interest(names[i], static_cast<std::uint32_t>(i % k), t0);
      CHECK(s.delta().packet() <= 2);
      const HashScope d;
      pit.on_data(names[i], t0);
      CHECK(d.delta().packet() <= 2);
    }
    const std::uint64_t before = probe_counters().bucket_probes;
    pit.lookup("absent/name", t0);
    CHECK(probe_counters().bucket_probes - before <= 2ULL * (k + 1));
  }
}

TEST_CASE("interface width is max(8, k)") {
  CHECK(DiCuPit(small(4)).interface_bits() == 8);
  CHECK(DiCuPit(small(16)).interface_bits() == 16);
}

TEST_CASE("interface out of range throws") {
  DiCuPit pit(small(4));
  CHECK_THROWS_AS(pit.on_interest(kName, 4, t0), std::out_of_range);
}

TEST_CASE("config validation") {
  DiCuPitConfig c = small();
  c.num_interfaces = 0;
  CHECK_THROWS_AS(DiCuPit{c}, std::invalid_argument);
  c.num_interfaces = 33;
  CHECK_THROWS_AS(DiCuPit{c}, std::invalid_argument);
  c = small();
  c.global_multiplier = 3;
  CHECK_THROWS_AS(DiCuPit{c}, std::invalid_argument);
}

TEST_CASE("memory closed form") {
  CHECK(dicupit_memory_bits(8, 8000, 4, 6) == 6592000);
  CHECK(dicupit_memory_bits(0, 8000, 4, 6) == 8000ULL * 4 * 30);
  CHECK(dicupit_memory_bits(8, 16000, 4, 6) == 2 * dicupit_memory_bits(8, 8000, 4, 6));
  CHECK(DiCuPit(small(8, 6)).memory_bits() == dicupit_memory_bits(8, 1024, 4, 6));
  DiCuPitConfig c = small(8, 6);
  c.global_multiplier = 2;
  CHECK(DiCuPit(c).memory_bits() == dicupit_memory_bits(8, 1024, 4, 6, 2));
}
