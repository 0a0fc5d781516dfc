#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "dicupit/cuckoo.hpp"
#include "dicupit/pit.hpp"

namespace dicupit {

struct DiCuPitConfig {
  std::uint32_t num_interfaces = 8;
  FilterConfig filter;                    // geometry of every per-interface table
  std::uint32_t global_multiplier = 1;    // GlobalCu buckets = filter.num_buckets * multiplier
  std::uint32_t interest_lifetime_ms = 4000;

  void validate() const;
};

/// k sub-tables of e*b slots at f+16 bits plus GlobalCu slots at f+16+w
/// bits, w = max(8, k).
std::uint64_t dicupit_memory_bits(std::uint32_t k, std::uint64_t e, std::uint32_t b, std::uint32_t f,
                                  std::uint32_t global_multiplier = 1);

/// One live match found by a global search.
struct SearchHit {
  std::uint32_t interface = 0;
  SlotRef slot;
};

/// Cuckoo-filter PIT: one compact table per incoming interface plus a shared
/// table (GlobalCu) holding names requested on more than one interface.
///
/// Sub-table slots carry a 16-bit expiration; GlobalCu slots carry the
/// expiration and the interface bitmap. A packet costs two hash invocations
/// regardless of the interface count; relocation hashes are accounted
/// separately by the cuckoo bank.
class DiCuPit final : public Pit {
 public:
  explicit DiCuPit(const DiCuPitConfig& config, std::shared_ptr<const CuckooHashing> hashing = nullptr);

  std::string_view kind() const override { return "dicupit"; }
  std::uint32_t ports() const override { return config_.num_interfaces; }

  InterfaceSet lookup(std::string_view name, Timestamp16 now) const override;
  bool would_aggregate(std::string_view name, Timestamp16 now) const override;
  std::uint64_t memory_bits() const override;
  std::uint64_t size() const override;

  /// Live matches for `name` across all per-interface tables.
  std::vector<SearchHit> global_search(std::string_view name, Timestamp16 now) const;
  /// Interface set stored in GlobalCu for `name`, if a live entry exists.
  std::optional<InterfaceSet> global_entry(std::string_view name, Timestamp16 now) const;
  bool sub_table_holds(std::uint32_t iface, std::string_view name, Timestamp16 now) const;

  const CuckooBank& sub_tables() const { return sub_; }
  const CuckooBank& global_table() const { return global_; }
  const DiCuPitConfig& config() const { return config_; }
  std::uint32_t lifetime() const { return lifetime_; }
  std::uint32_t interface_bits() const { return iface_bits_; }

 protected:
  InterestDecision handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) override;
  DataDecision handle_data(std::string_view name, Timestamp16 now) override;
  std::size_t handle_expire(Timestamp16 now) override;

 private:
  struct Keys {
    CuckooKey sub;
    CuckooKey global;
  };

  Keys keys_for(std::string_view name) const;
  std::uint64_t pack_global(Timestamp16 expiry, InterfaceSet ifaces) const;
  static Timestamp16 expiry_of(std::uint64_t payload) {
    return Timestamp16{static_cast<std::uint16_t>(payload & 0xffff)};
  }
  static InterfaceSet ifaces_of(std::uint64_t payload) {
    return InterfaceSet::from_bits(static_cast<std::uint32_t>(payload >> 16));
  }

  // Fills hits_ (live) and stale_ (expired) for the given key.
  void search_lanes(const CuckooKey& key, Timestamp16 now) const;
  // First live GlobalCu slot for the key; expired matches go to stale_global_.
  std::optional<SlotRef> search_global(const CuckooKey& key, Timestamp16 now) const;
  void clear_stale();
  void note_expiry(Timestamp16 expiry);
  // False while every stored entry is certainly still live: the oldest
  // expiration lies within one lifetime ahead of now.
  bool may_have_expired(Timestamp16 now) const {
    return written_ && static_cast<std::uint16_t>(oldest_expiry_.value - now.value) > lifetime_;
  }

  DiCuPitConfig config_;
  std::uint32_t iface_bits_;
  std::uint32_t lifetime_;
  CuckooBank sub_;
  CuckooBank global_;
  bool written_ = false;
  Timestamp16 oldest_expiry_;  // lower bound on live expirations since the last sweep
  mutable std::vector<SearchHit> hits_;
  mutable std::vector<SlotRef> stale_;
  mutable std::vector<SlotRef> stale_global_;
};

}  // namespace dicupit
