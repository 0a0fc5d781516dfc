#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dicupit/packed_bits.hpp"

namespace dicupit {

/// False-positive probability (1 - e^{-k n / m})^k. Throws std::domain_error on m == 0.
double bloom_fpp(double n, double m, unsigned k);

/// Smallest m meeting `target` at n items: ceil(-n k / ln(1 - target^{1/k})).
std::uint64_t bloom_bits_for(std::uint64_t n, unsigned k, double target = 0.01);

struct BloomConfig {
  std::uint64_t bit_count = 1;       // m, number of counter positions
  std::uint32_t num_hashes = 5;      // k_h
  std::uint64_t expected_items = 0;  // n, informational
  std::uint32_t seed = 0;

  void validate() const;
  static BloomConfig sized_for(std::uint64_t n, std::uint32_t k, double target = 0.01, std::uint32_t seed = 0);
};

/// Counting Bloom filter with 4-bit saturating counters. Each of the k_h
/// positions comes from its own seeded 64-bit Murmur hash, so one consult
/// costs k_h counted hash invocations. Saturated counters are never
/// decremented.
class CountingBloom {
 public:
  static constexpr unsigned kCounterBits = 4;
  static constexpr std::uint64_t kCounterMax = 15;

  explicit CountingBloom(const BloomConfig& config);

  bool insert(std::string_view name);
  bool query(std::string_view name) const;
  bool remove(std::string_view name);

  // Index-level API: positions computed once can be reused across calls.
  void positions(std::string_view name, std::vector<std::uint64_t>& out) const;
  bool query_at(const std::vector<std::uint64_t>& pos) const;
  void insert_at(const std::vector<std::uint64_t>& pos);
  bool remove_at(const std::vector<std::uint64_t>& pos);

  std::uint64_t counter(std::uint64_t i) const { return counters_.get(i * kCounterBits, kCounterBits); }
  std::uint64_t items() const { return items_; }
  std::uint64_t memory_bits() const { return config_.bit_count * kCounterBits; }
  const BloomConfig& config() const { return config_; }
  void clear();

 private:
  BloomConfig config_;
  PackedBits counters_;
  std::uint64_t items_ = 0;
  mutable std::vector<std::uint64_t> scratch_;
};

}  // namespace dicupit
