#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "dicupit/cuckoo.hpp"
#include "dicupit/pit.hpp"

namespace dicupit {

enum class PitKind { DiCuPit, DiPit, Chain, Ht32, Oracle };

std::string_view to_string(PitKind kind);
/// Throws std::invalid_argument for an unknown name.
PitKind parse_pit_kind(std::string_view name);
std::vector<PitKind> all_pit_kinds(bool include_oracle = false);

/// Shared sizing knobs; each implementation derives its geometry from
/// `entries_per_port` unless overridden.
struct PitSizing {
  std::uint32_t ports = 8;
  std::uint64_t entries_per_port = 1000;
  std::uint64_t num_buckets = 0;  // DiCuPIT buckets per table; 0: derive
  std::uint32_t bucket_slots = 4;
  std::uint32_t fingerprint_bits = 6;
  std::uint32_t max_kicks = 150;
  std::uint32_t global_multiplier = 1;
  double target_occupancy = 0.9;
  std::uint32_t bloom_hashes = 5;
  double bloom_target_fpp = 0.01;
  std::uint32_t interest_lifetime_ms = 4000;
  std::uint32_t seed = 0;

  /// DiCuPIT geometry: next power of two >= ceil(n / (b * occupancy)).
  FilterConfig filter_config() const;
  std::uint64_t chain_capacity() const;
  std::uint64_t ht32_slots() const;
};

std::unique_ptr<Pit> make_pit(PitKind kind, const PitSizing& sizing);

/// Closed-form memory_bits of the table make_pit would build.
std::uint64_t expected_memory_bits(PitKind kind, const PitSizing& sizing);

// ---------------------------------------------------------------------------
// Analytic memory model over line rates (entries per port = rate * RTT).

struct MemoryModelParams {
  std::uint32_t ports = 8;
  std::uint64_t rtt_us = 80000;
  double packets_per_rate_unit = 1e6;
  std::uint32_t fingerprint_bits = 6;
  std::uint32_t bucket_slots = 4;
  double target_occupancy = 0.9;
  std::uint32_t bloom_hashes = 5;
  double bloom_target_fpp = 0.01;
};

struct MemoryRow {
  double rate = 0;
  double entries_per_port = 0;
  double dicupit_bits = 0;
  double dipit_bits = 0;
  double chain_bits = 0;
  double ht32_bits = 0;

  double improvement_vs_dipit() const { return 1.0 - dicupit_bits / dipit_bits; }
  double improvement_vs_chain() const { return 1.0 - dicupit_bits / chain_bits; }
  double improvement_vs_ht32() const { return 1.0 - dicupit_bits / ht32_bits; }
  double improvement_vs_hash_tables() const { return 0.5 * (improvement_vs_chain() + improvement_vs_ht32()); }
};

/// Uses exact (unrounded) table sizes; every dimension is at least one unit,
/// so rate 0 yields the fixed overhead. Throws on a negative rate.
MemoryRow memory_model(double rate, const MemoryModelParams& params = {});

struct MemorySummary {
  std::vector<MemoryRow> rows;
  double mean_improvement_vs_dipit = 0;
  double mean_improvement_vs_hash_tables = 0;
};

MemorySummary memory_table(const std::vector<double>& rates, const MemoryModelParams& params = {});

}  // namespace dicupit
