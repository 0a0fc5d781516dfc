#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace dicupit {

// MurmurHash3 (Austin Appleby, public domain). Raw primitives: not counted.
std::uint32_t murmur3_32(std::span<const std::byte> data, std::uint32_t seed);
// Low 64 bits of MurmurHash3_x64_128.
std::uint64_t murmur3_64(std::span<const std::byte> data, std::uint32_t seed);

inline std::span<const std::byte> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::byte*>(s.data()), s.size()};
}

/// Per-thread hash instrumentation.
///
/// `total` counts every hash invocation made by a data structure. Work done
/// while relocating resident fingerprints during a cuckoo insertion is also
/// tallied in `relocation`, so `packet()` is the number of hashes spent on
/// the packet's own name and fingerprint.
struct HashCounters {
  std::uint64_t total = 0;
  std::uint64_t relocation = 0;

  std::uint64_t packet() const { return total - relocation; }
};

inline HashCounters& hash_counters() {
  static thread_local HashCounters counters;
  return counters;
}

/// Snapshot helper: `HashScope s; ...; s.delta()`.
class HashScope {
 public:
  HashScope() : start_(hash_counters()) {}

  HashCounters delta() const {
    const HashCounters& now = hash_counters();
    return {now.total - start_.total, now.relocation - start_.relocation};
  }

 private:
  HashCounters start_;
};

// Counted variants used by every table in the library.
inline std::uint64_t counted_hash64(std::string_view key, std::uint32_t seed) {
  ++hash_counters().total;
  return murmur3_64(as_bytes(key), seed);
}

inline std::uint32_t counted_hash32(std::string_view key, std::uint32_t seed) {
  ++hash_counters().total;
  return murmur3_32(as_bytes(key), seed);
}

// Lemire's multiply-shift reduction of a 64-bit hash into [0, range).
inline std::uint64_t reduce_range(std::uint64_t hash, std::uint64_t range) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(hash) * range) >> 64);
}

inline std::uint32_t reduce_range32(std::uint32_t hash, std::uint32_t range) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(hash) * range) >> 32);
}

}  // namespace dicupit
