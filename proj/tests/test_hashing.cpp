#include "doctest.h"
#include "dicupit/hashing.hpp"

using namespace dicupit;

// Vectors from tests/oracles/reference_values.py (mmh3 package).
TEST_CASE("murmur3 x64_128 low word matches reference") {
  CHECK(murmur3_64(as_bytes("razi/ac/ir"), 0) == 0x0801e1531ba5f62cULL);
  CHECK(murmur3_64(as_bytes("hello"), 42) == 0xc4b8b3c960af6f08ULL);
  CHECK(murmur3_64(as_bytes(""), 0) == 0);
}

TEST_CASE("murmur3 x86_32 matches reference") {
  CHECK(murmur3_32(as_bytes("razi/ac/ir"), 0) == 0x74cb3c94U);
  CHECK(murmur3_32(as_bytes("hello"), 42) == 0xe2dbd2e1U);
  CHECK(murmur3_32(as_bytes(""), 0) == 0);
}

TEST_CASE("counted hashes bump the thread counter") {
  const HashScope s;
  counted_hash64("a", 1);
  counted_hash32("b", 2);
  CHECK(s.delta().total == 2);
  CHECK(s.delta().relocation == 0);
}

TEST_CASE("range reduction stays in range") {
  for (std::uint64_t h : {0ULL, 1ULL, ~0ULL, 0x8000000000000000ULL}) {
    CHECK(reduce_range(h, 1000) < 1000);
    CHECK(reduce_range32(static_cast<std::uint32_t>(h), 7) < 7);
  }
}
