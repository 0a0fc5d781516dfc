#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <random>
#include <string_view>
#include <vector>

#include "dicupit/hashing.hpp"
#include "dicupit/packed_bits.hpp"

namespace dicupit {

/// Geometry and policy of a cuckoo table.
///
/// `num_buckets` must be a power of two so that `i ^ (hash(fp) mod e)` stays
/// in range. Defaults follow the evaluation setup: 4 slots per bucket, 6-bit
/// fingerprints, and at most 150 evictions per insertion.
struct FilterConfig {
  std::uint64_t num_buckets = 1024;
  std::uint32_t bucket_slots = 4;
  std::uint32_t fingerprint_bits = 6;
  std::uint32_t max_kicks = 150;
  std::uint32_t seed = 0;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  std::uint64_t capacity() const { return num_buckets * bucket_slots; }
};

/// Non-zero f-bit digest of a name; zero marks an empty slot.
struct Fingerprint {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(Fingerprint, Fingerprint) = default;
};

struct CandidateBuckets {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  friend constexpr bool operator==(CandidateBuckets, CandidateBuckets) = default;
};

/// Everything needed to probe or insert a name, derived with two hashes.
struct CuckooKey {
  Fingerprint fingerprint;
  CandidateBuckets buckets;
  friend constexpr bool operator==(const CuckooKey&, const CuckooKey&) = default;
};

/// Raw outputs of the two hash invocations; bucket indices for any table
/// size can be derived from them without hashing again.
struct RawKey {
  std::uint64_t name_hash = 0;
  std::uint64_t fingerprint_hash = 0;
  Fingerprint fingerprint;
};

/// Hash pair behind a cuckoo table. Replaceable so tests can pin exact
/// bucket placements.
class CuckooHashing {
 public:
  virtual ~CuckooHashing() = default;
  /// Low bits select the primary bucket, the top bits give the fingerprint.
  virtual std::uint64_t name_hash(std::string_view name) const = 0;
  virtual std::uint64_t fingerprint_hash(Fingerprint fp) const = 0;
};

/// MurmurHash3_x64_128 over the name bytes; the fingerprint is hashed as two
/// little-endian bytes under a derived seed.
class MurmurCuckooHashing final : public CuckooHashing {
 public:
  static constexpr std::uint32_t kFingerprintSeedXor = 0x9747b28c;

  explicit MurmurCuckooHashing(std::uint32_t seed) : seed_(seed) {}
  std::uint64_t name_hash(std::string_view name) const override;
  std::uint64_t fingerprint_hash(Fingerprint fp) const override;

 private:
  std::uint32_t seed_;
};

/// Partial-key cuckoo hashing: maps names to fingerprints and bucket pairs.
/// Every hash evaluation made here is recorded in hash_counters(); hash(fp)
/// is tabulated over the 2^f fingerprints at construction and each table
/// read counts as one evaluation.
class CuckooCodec {
 public:
  explicit CuckooCodec(const FilterConfig& config, std::shared_ptr<const CuckooHashing> hashing = nullptr);

  Fingerprint fingerprint_of(std::string_view name) const;
  CandidateBuckets candidate_buckets(std::string_view name) const;
  CuckooKey key_for(std::string_view name) const;
  /// Two hash invocations; reusable across codecs sharing the same hashing.
  RawKey raw_key(std::string_view name) const {
    hash_counters().total += 2;
    const std::uint64_t h = hashing_->name_hash(name);
    const Fingerprint fp = fingerprint_from_hash(h);
    return RawKey{h, fp_hash_table_[fp.value], fp};
  }
  CuckooKey key_from_raw(const RawKey& raw) const {
    const std::uint64_t first = raw.name_hash & bucket_mask_;
    return CuckooKey{raw.fingerprint, {first, (first ^ raw.fingerprint_hash) & bucket_mask_}};
  }
  std::uint64_t alt_bucket(std::uint64_t index, Fingerprint fp) const;

  const FilterConfig& config() const { return config_; }
  const std::shared_ptr<const CuckooHashing>& hashing() const { return hashing_; }

 private:
  Fingerprint fingerprint_from_hash(std::uint64_t h) const {
    const auto raw = static_cast<std::uint32_t>(h >> (64 - config_.fingerprint_bits));
    return Fingerprint{raw == 0 ? 1U : raw};
  }

  FilterConfig config_;
  std::shared_ptr<const CuckooHashing> hashing_;
  std::uint64_t bucket_mask_;
  // hash(fp) for every f-bit fingerprint, filled once from hashing_.
  std::shared_ptr<const std::vector<std::uint64_t>> fp_hashes_;
  const std::uint64_t* fp_hash_table_ = nullptr;
};

// Free-function forms using the default Murmur hashing seeded by config.seed.
Fingerprint fingerprint_of(std::string_view name, const FilterConfig& config);
CandidateBuckets candidate_buckets(std::string_view name, const FilterConfig& config);
std::uint64_t alt_bucket(std::uint64_t index, Fingerprint fp, const FilterConfig& config);

enum class InsertStatus { Stored, Full };

struct InsertOutcome {
  InsertStatus status = InsertStatus::Stored;
  std::uint32_t kicks = 0;  // evictions performed (Stored) or attempted (Full)

  bool stored() const { return status == InsertStatus::Stored; }
};

struct SlotRef {
  std::uint32_t lane = 0;
  std::uint64_t bucket = 0;
  std::uint32_t slot = 0;
};

struct ProbeCounters {
  std::uint64_t bucket_probes = 0;
};

inline ProbeCounters& probe_counters() {
  static thread_local ProbeCounters counters;
  return counters;
}

/// A set of `lanes` cuckoo tables sharing one geometry and one codec.
///
/// Storage is two bit-packed planes (fingerprints at f bits per slot and an
/// opaque payload of `payload_bits` per slot) laid out bucket-major: bucket
/// i of every lane is contiguous, so probing the same bucket index in all
/// lanes touches one region of memory. Each lane behaves as an independent
/// cuckoo table; relocation never crosses lanes.
class CuckooBank {
 public:
  CuckooBank(CuckooCodec codec, std::uint32_t lanes, std::uint32_t payload_bits);

  const CuckooCodec& codec() const { return codec_; }
  const FilterConfig& config() const { return codec_.config(); }
  std::uint32_t lanes() const { return lanes_; }
  std::uint32_t payload_bits() const { return payload_bits_; }
  std::uint64_t slots_per_lane() const { return config().capacity(); }

  std::uint64_t item_count(std::uint32_t lane) const { return counts_[lane]; }
  std::uint64_t total_items() const;
  double load_factor(std::uint32_t lane) const;
  /// Bits held by both planes across all lanes.
  std::uint64_t memory_bits() const;

  /// Bitmask of slots in (lane, bucket) whose fingerprint equals `fp`.
  std::uint32_t match_mask(std::uint32_t lane, std::uint64_t bucket, Fingerprint fp) const;
  /// match_mask without touching the probe counter.
  std::uint32_t match_bits(std::uint32_t lane, std::uint64_t bucket, Fingerprint fp) const {
    if (!swar_) return match_bits_wide(lane, bucket, fp);
    const std::uint64_t x = bucket_word(lane, bucket) ^ (fp.value * swar_lows_);
    const std::uint64_t y = (x & swar_low_bits_) + swar_low_bits_;
    std::uint32_t mask = 0;
    for (std::uint64_t t = ~(y | x | swar_low_bits_) & swar_highs_ & swar_mask_; t != 0; t &= t - 1) {
      mask |= 1U << slot_of_bit_[std::countr_zero(t)];
    }
    return mask;
  }
  bool contains(std::uint32_t lane, const CuckooKey& key) const;
  /// Bit L set when lane L of `bucket` holds `fp`; counts one probe per lane.
  /// The bucket row (all lanes) is scanned in 64-bit chunks of whole fields.
  std::uint32_t lanes_matching(std::uint64_t bucket, Fingerprint fp) const {
    probe_counters().bucket_probes += lanes_;
    std::uint64_t offset = bucket * row_bits_;
    const std::uint64_t pattern = fp.value * chunk_lows_;
    std::uint32_t out = 0;
    const std::uint8_t* lane_of = lane_of_bit_.data();
    for (std::uint32_t j = 1;; ++j, offset += chunk_bits_, lane_of += 64) {
      const bool last = j == chunks_;
      // Bits above the chunk's fields are ignored by the highs mask.
      const std::uint64_t x = fingerprints_.get_fast(offset, ~std::uint64_t{0}) ^ pattern;
      const std::uint64_t y = (x & chunk_low_bits_) + chunk_low_bits_;
      for (std::uint64_t t = ~(y | x | chunk_low_bits_) & (last ? last_chunk_highs_ : chunk_highs_); t != 0;
           t &= t - 1) {
        out |= 1U << lane_of[std::countr_zero(t)];
      }
      if (last) return out;
    }
  }

  /// Places the key (and payload) in one of its two buckets, evicting
  /// residents along a random walk if both are full. On Full the bank is
  /// restored exactly and the incoming entry is the one not stored.
  InsertOutcome insert(std::uint32_t lane, const CuckooKey& key, std::uint64_t payload = 0);
  /// Removes one slot holding the key's fingerprint; false if none.
  bool erase(std::uint32_t lane, const CuckooKey& key);

  Fingerprint fingerprint_at(const SlotRef& ref) const;
  std::uint64_t payload_at(const SlotRef& ref) const;
  void set_payload(const SlotRef& ref, std::uint64_t payload);
  void clear_slot(const SlotRef& ref);

  void prefetch(const CuckooKey& key) const {
    fingerprints_.prefetch(key.buckets.first * row_bits_);
    fingerprints_.prefetch(key.buckets.second * row_bits_);
  }

  /// Calls fn(SlotRef, Fingerprint, payload) for every occupied slot of a lane.
  template <typename Fn>
  void for_each_occupied(std::uint32_t lane, Fn&& fn) const {
    const std::uint32_t b = config().bucket_slots;
    for (std::uint64_t bucket = 0; bucket < config().num_buckets; ++bucket) {
      for (std::uint32_t s = 0; s < b; ++s) {
        const SlotRef ref{lane, bucket, s};
        const Fingerprint fp = fingerprint_at(ref);
        if (fp.value != 0) fn(ref, fp, payload_at(ref));
      }
    }
  }

 private:
  std::uint64_t slot_index(std::uint32_t lane, std::uint64_t bucket, std::uint32_t slot) const {
    return ((bucket * lanes_) + lane) * config().bucket_slots + slot;
  }
  std::uint64_t bucket_word(std::uint32_t lane, std::uint64_t bucket) const {
    return fingerprints_.get_fast(slot_index(lane, bucket, 0) * fp_bits_, swar_mask_);
  }
  std::uint32_t match_bits_wide(std::uint32_t lane, std::uint64_t bucket, Fingerprint fp) const;
  int first_vacancy(std::uint32_t lane, std::uint64_t bucket) const;
  void write_slot(const SlotRef& ref, Fingerprint fp, std::uint64_t payload);

  CuckooCodec codec_;
  std::uint32_t lanes_;
  std::uint32_t payload_bits_;
  unsigned fp_bits_;
  bool swar_;  // whole bucket fits one 64-bit word
  std::uint64_t swar_lows_ = 0;
  std::uint64_t swar_highs_ = 0;
  std::uint64_t swar_mask_ = 0;
  std::uint64_t swar_low_bits_ = 0;
  std::uint8_t slot_of_bit_[64] = {};
  // Row scan geometry for lanes_matching.
  std::uint64_t row_bits_ = 0;
  std::uint32_t fields_per_chunk_ = 0;
  std::uint32_t chunks_ = 0;
  std::uint64_t chunk_bits_ = 0;
  std::uint64_t chunk_lows_ = 0;
  std::uint64_t chunk_highs_ = 0;
  std::uint64_t last_chunk_highs_ = 0;
  std::uint64_t chunk_low_bits_ = 0;
  std::vector<std::uint8_t> lane_of_bit_;  // chunk j, bit i -> lane of the field whose top bit is i
  PackedBits fingerprints_;
  PackedBits payloads_;
  std::vector<std::uint64_t> counts_;
  std::mt19937_64 rng_;
};

/// Standalone cuckoo filter over names (a single-lane bank, no payload).
class CuckooFilter {
 public:
  explicit CuckooFilter(const FilterConfig& config, std::shared_ptr<const CuckooHashing> hashing = nullptr);

  InsertOutcome insert(std::string_view name);
  bool contains(std::string_view name) const;
  bool erase(std::string_view name);

  std::uint64_t size() const { return bank_.item_count(0); }
  std::uint64_t capacity() const { return bank_.slots_per_lane(); }
  double load_factor() const { return bank_.load_factor(0); }

  const CuckooCodec& codec() const { return bank_.codec(); }
  const CuckooBank& bank() const { return bank_; }

 private:
  CuckooBank bank_;
};

}  // namespace dicupit
