#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dicupit/bloom.hpp"
#include "dicupit/pit.hpp"

namespace dicupit {

struct DiPitConfig {
  std::uint32_t num_interfaces = 8;
  std::uint64_t expected_items = 1000;  // per filter
  std::uint32_t num_hashes = 5;
  double target_fpp = 0.01;
  std::uint32_t seed = 0;
  std::uint64_t bit_count = 0;  // 0: size from expected_items and target_fpp

  void validate() const;
};

/// One counting Bloom filter per interface plus a shared one. Interests go
/// into the arriving interface's filter and the shared filter; a hit in the
/// shared filter aggregates. Data consults every interface filter.
/// Bloom filters carry no timestamps, so expire() removes nothing.
class DiPit final : public Pit {
 public:
  explicit DiPit(const DiPitConfig& config);

  std::string_view kind() const override { return "dipit"; }
  std::uint32_t ports() const override { return config_.num_interfaces; }

  InterfaceSet lookup(std::string_view name, Timestamp16 now) const override;
  bool would_aggregate(std::string_view name, Timestamp16 now) const override;
  std::uint64_t memory_bits() const override;
  std::uint64_t size() const override { return shared_.items(); }

  /// Bloom filters consulted so far; each costs num_hashes hash invocations.
  std::uint64_t filter_consults() const { return consults_; }
  const CountingBloom& interface_filter(std::uint32_t i) const { return filters_.at(i); }
  const CountingBloom& shared_filter() const { return shared_; }
  const DiPitConfig& config() const { return config_; }

 protected:
  InterestDecision handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) override;
  DataDecision handle_data(std::string_view name, Timestamp16 now) override;
  std::size_t handle_expire(Timestamp16) override { return 0; }

 private:
  DiPitConfig config_;
  std::vector<CountingBloom> filters_;
  CountingBloom shared_;
  mutable std::uint64_t consults_ = 0;
  mutable std::vector<std::uint64_t> pos_;
};

struct HashPitConfig {
  std::uint32_t num_interfaces = 8;
  std::uint64_t capacity = 1024;  // entries (chain pool) or slots (HT32)
  std::uint64_t buckets = 0;      // chain heads; 0: same as capacity
  std::uint32_t interest_lifetime_ms = 4000;
  std::uint32_t seed = 0;

  void validate() const;
};

/// Centralised PIT of chained 32-bit digests. Entry: digest (32), expiration
/// (16), interface set (max(8, k)), next link (32). The bucket comes from one
/// 32-bit hash and the stored digest from a second.
class ChainPit final : public Pit {
 public:
  static constexpr std::uint32_t kNil = 0xffffffffU;

  explicit ChainPit(const HashPitConfig& config);

  std::string_view kind() const override { return "chain"; }
  std::uint32_t ports() const override { return config_.num_interfaces; }

  InterfaceSet lookup(std::string_view name, Timestamp16 now) const override;
  bool would_aggregate(std::string_view name, Timestamp16 now) const override;
  std::uint64_t memory_bits() const override;
  std::uint64_t size() const override { return live_; }

  std::uint32_t entry_bits() const { return 80 + iface_bits_; }
  std::uint64_t buckets() const { return heads_.size(); }

 protected:
  InterestDecision handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) override;
  DataDecision handle_data(std::string_view name, Timestamp16 now) override;
  std::size_t handle_expire(Timestamp16 now) override;

 private:
  struct Entry {
    std::uint32_t digest = 0;
    std::uint16_t expiration = 0;
    std::uint32_t interfaces = 0;
    std::uint32_t next = kNil;
  };
  struct Key {
    std::uint32_t bucket;
    std::uint32_t digest;
  };

  Key key_for(std::string_view name) const;
  // Unlinks expired entries in the chain and returns the live match, or kNil.
  std::uint32_t find(const Key& key, Timestamp16 now, bool purge);
  std::uint32_t find_const(const Key& key, Timestamp16 now) const;
  void unlink(std::uint32_t bucket, std::uint32_t prev, std::uint32_t idx);

  HashPitConfig config_;
  std::uint32_t iface_bits_;
  std::uint32_t lifetime_;
  std::vector<std::uint32_t> heads_;
  std::vector<Entry> pool_;
  std::uint32_t free_ = kNil;
  std::uint64_t live_ = 0;
  std::uint64_t expired_purged_ = 0;
};

/// Open-addressed table of 32-bit digests with linear probing and
/// backward-shift deletion. Slot: digest (32), expiration (16), interface
/// set (max(8, k)). Digest 0 marks an empty slot. Every slot examined is
/// counted in probe_counters().
class Ht32Pit final : public Pit {
 public:
  explicit Ht32Pit(const HashPitConfig& config);

  std::string_view kind() const override { return "ht32"; }
  std::uint32_t ports() const override { return config_.num_interfaces; }

  InterfaceSet lookup(std::string_view name, Timestamp16 now) const override;
  bool would_aggregate(std::string_view name, Timestamp16 now) const override;
  std::uint64_t memory_bits() const override;
  std::uint64_t size() const override { return count_; }

  std::uint32_t entry_bits() const { return 48 + iface_bits_; }
  std::uint64_t slots() const { return table_.size(); }
  double load_factor() const { return static_cast<double>(count_) / static_cast<double>(table_.size()); }

 protected:
  InterestDecision handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) override;
  DataDecision handle_data(std::string_view name, Timestamp16 now) override;
  std::size_t handle_expire(Timestamp16 now) override;

 private:
  struct Slot {
    std::uint32_t digest = 0;
    std::uint16_t expiration = 0;
    std::uint32_t interfaces = 0;
  };

  std::uint32_t digest_of(std::string_view name) const;
  std::uint64_t home(std::uint32_t digest) const;
  // Index of the slot holding `digest`, or slots() if absent.
  std::uint64_t find(std::uint32_t digest) const;
  void erase_at(std::uint64_t idx);

  HashPitConfig config_;
  std::uint32_t iface_bits_;
  std::uint32_t lifetime_;
  std::vector<Slot> table_;
  std::uint64_t count_ = 0;
};

/// Exact reference PIT keyed by the full name.
class OraclePit final : public Pit {
 public:
  OraclePit(std::uint32_t num_interfaces, std::uint32_t interest_lifetime_ms = 4000);

  std::string_view kind() const override { return "oracle"; }
  std::uint32_t ports() const override { return ports_; }

  InterfaceSet lookup(std::string_view name, Timestamp16 now) const override;
  bool would_aggregate(std::string_view name, Timestamp16 now) const override;
  /// Name bytes plus expiration and interface set per entry.
  std::uint64_t memory_bits() const override;
  std::uint64_t size() const override { return entries_.size(); }

 protected:
  InterestDecision handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) override;
  DataDecision handle_data(std::string_view name, Timestamp16 now) override;
  std::size_t handle_expire(Timestamp16 now) override;

 private:
  struct Entry {
    InterfaceSet interfaces;
    Timestamp16 expiration;
  };
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::uint32_t ports_;
  std::uint32_t lifetime_;
  std::unordered_map<std::string, Entry, Hash, std::equal_to<>> entries_;
};

}  // namespace dicupit
