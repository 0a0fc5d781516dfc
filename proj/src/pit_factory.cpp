#include "dicupit/pit_factory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dicupit/baseline_pits.hpp"
#include "dicupit/bloom.hpp"
#include "dicupit/dicupit_pit.hpp"

namespace dicupit {

std::string_view to_string(PitKind kind) {
  switch (kind) {
    case PitKind::DiCuPit: return "dicupit";
    case PitKind::DiPit: return "dipit";
    case PitKind::Chain: return "chain";
    case PitKind::Ht32: return "ht32";
    case PitKind::Oracle: return "oracle";
  }
  return "?";
}

PitKind parse_pit_kind(std::string_view name) {
  for (PitKind k : all_pit_kinds(true)) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown PIT implementation '" + std::string(name) + "'");
}

std::vector<PitKind> all_pit_kinds(bool include_oracle) {
  std::vector<PitKind> kinds{PitKind::DiCuPit, PitKind::DiPit, PitKind::Chain, PitKind::Ht32};
  if (include_oracle) kinds.push_back(PitKind::Oracle);
  return kinds;
}

namespace {

std::uint64_t ceil_div(double n, double d) { return static_cast<std::uint64_t>(std::ceil(n / d)); }

DiPitConfig dipit_config(const PitSizing& s) {
  DiPitConfig c;
  c.num_interfaces = s.ports;
  c.expected_items = std::max<std::uint64_t>(1, s.entries_per_port);
  c.num_hashes = s.bloom_hashes;
  c.target_fpp = s.bloom_target_fpp;
  c.seed = s.seed;
  return c;
}

HashPitConfig hash_config(const PitSizing& s, std::uint64_t capacity) {
  HashPitConfig c;
  c.num_interfaces = s.ports;
  c.capacity = capacity;
  c.buckets = capacity;
  c.interest_lifetime_ms = s.interest_lifetime_ms;
  c.seed = s.seed;
  return c;
}

}  // namespace

FilterConfig PitSizing::filter_config() const {
  FilterConfig f;
  if (num_buckets != 0) {
    f.num_buckets = num_buckets;
  } else {
    const std::uint64_t need = std::max<std::uint64_t>(1, ceil_div(static_cast<double>(entries_per_port),
                                                                   bucket_slots * target_occupancy));
    f.num_buckets = std::bit_ceil(need);
  }
  f.bucket_slots = bucket_slots;
  f.fingerprint_bits = fingerprint_bits;
  f.max_kicks = max_kicks;
  f.seed = seed;
  return f;
}

std::uint64_t PitSizing::chain_capacity() const {
  return std::max<std::uint64_t>(1, entries_per_port * ports);
}

std::uint64_t PitSizing::ht32_slots() const {
  return std::max<std::uint64_t>(1, ceil_div(static_cast<double>(entries_per_port * ports), target_occupancy));
}

std::unique_ptr<Pit> make_pit(PitKind kind, const PitSizing& s) {
  switch (kind) {
    case PitKind::DiCuPit: {
      DiCuPitConfig c;
      c.num_interfaces = s.ports;
      c.filter = s.filter_config();
      c.global_multiplier = s.global_multiplier;
      c.interest_lifetime_ms = s.interest_lifetime_ms;
      return std::make_unique<DiCuPit>(c);
    }
    case PitKind::DiPit: return std::make_unique<DiPit>(dipit_config(s));
    case PitKind::Chain: return std::make_unique<ChainPit>(hash_config(s, s.chain_capacity()));
    case PitKind::Ht32: return std::make_unique<Ht32Pit>(hash_config(s, s.ht32_slots()));
    case PitKind::Oracle: return std::make_unique<OraclePit>(s.ports, s.interest_lifetime_ms);
  }
  throw std::invalid_argument("unknown PIT kind");
}

std::uint64_t expected_memory_bits(PitKind kind, const PitSizing& s) {
  const std::uint64_t w = std::max<std::uint32_t>(8, s.ports);
  switch (kind) {
    case PitKind::DiCuPit: {
      const FilterConfig f = s.filter_config();
      return dicupit_memory_bits(s.ports, f.num_buckets, f.bucket_slots, f.fingerprint_bits, s.global_multiplier);
    }
    case PitKind::DiPit: {
      const DiPitConfig c = dipit_config(s);
      return (s.ports + 1ULL) * bloom_bits_for(c.expected_items, c.num_hashes, c.target_fpp) * 4;
    }
    case PitKind::Chain: return s.chain_capacity() * (80 + w + 32);
    case PitKind::Ht32: return s.ht32_slots() * (48 + w);
    case PitKind::Oracle: return 0;
  }
  return 0;
}

MemoryRow memory_model(double rate, const MemoryModelParams& p) {
  if (!(rate >= 0)) throw std::invalid_argument("rate must be non-negative");
  MemoryRow row;
  row.rate = rate;
  row.entries_per_port = rate * p.packets_per_rate_unit * static_cast<double>(p.rtt_us) * 1e-6;
  const double n = std::max(1.0, row.entries_per_port);
  const double k = p.ports;
  const double w = std::max(8.0, k);
  const double f = p.fingerprint_bits;

  const double slots = std::max<double>(p.bucket_slots, n / p.target_occupancy);
  row.dicupit_bits = k * slots * (f + 16) + slots * (f + 16 + w);

  const double m = std::max(1.0, -n * p.bloom_hashes / std::log1p(-std::pow(p.bloom_target_fpp, 1.0 / p.bloom_hashes)));
  row.dipit_bits = (k + 1) * m * 4;

  const double total = std::max(1.0, n * k);
  row.chain_bits = total * (80 + w) + total * 32;
  row.ht32_bits = std::max(1.0, total / p.target_occupancy) * (48 + w);
  return row;
}

MemorySummary memory_table(const std::vector<double>& rates, const MemoryModelParams& params) {
  MemorySummary s;
  for (double r : rates) s.rows.push_back(memory_model(r, params));
  if (s.rows.empty()) return s;
  for (const auto& r : s.rows) {
    s.mean_improvement_vs_dipit += r.improvement_vs_dipit();
    s.mean_improvement_vs_hash_tables += r.improvement_vs_hash_tables();
  }
  s.mean_improvement_vs_dipit /= static_cast<double>(s.rows.size());
  s.mean_improvement_vs_hash_tables /= static_cast<double>(s.rows.size());
  return s;
}

}  // namespace dicupit
