#include "dicupit/cuckoo.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <string>

#include "dicupit/hashing.hpp"

namespace dicupit {

void FilterConfig::validate() const {
  if (num_buckets == 0 || !std::has_single_bit(num_buckets)) {
    throw std::invalid_argument("num_buckets must be a power of two, got " + std::to_string(num_buckets));
  }
  if (bucket_slots == 0 || bucket_slots > 32) {
    throw std::invalid_argument("bucket_slots must be in [1, 32]");
  }
  if (fingerprint_bits < 4 || fingerprint_bits > 16) {
    throw std::invalid_argument("fingerprint_bits must be in [4, 16]");
  }
  if (max_kicks == 0) {
    throw std::invalid_argument("max_kicks must be positive");
  }
}

std::uint64_t MurmurCuckooHashing::name_hash(std::string_view name) const {
  return murmur3_64(as_bytes(name), seed_);
}

std::uint64_t MurmurCuckooHashing::fingerprint_hash(Fingerprint fp) const {
  const std::array<std::byte, 2> bytes{std::byte(fp.value & 0xff), std::byte((fp.value >> 8) & 0xff)};
  return murmur3_64(bytes, seed_ ^ kFingerprintSeedXor);
}

CuckooCodec::CuckooCodec(const FilterConfig& config, std::shared_ptr<const CuckooHashing> hashing)
    : config_(config), hashing_(std::move(hashing)), bucket_mask_(config.num_buckets - 1) {
  config_.validate();
  if (!hashing_) hashing_ = std::make_shared<MurmurCuckooHashing>(config_.seed);
  auto table = std::make_shared<std::vector<std::uint64_t>>(std::size_t{1} << config_.fingerprint_bits);
  for (std::uint32_t fp = 0; fp < table->size(); ++fp) (*table)[fp] = hashing_->fingerprint_hash(Fingerprint{fp});
  fp_hash_table_ = table->data();
  fp_hashes_ = std::move(table);
}

Fingerprint CuckooCodec::fingerprint_of(std::string_view name) const {
  ++hash_counters().total;
  return fingerprint_from_hash(hashing_->name_hash(name));
}

CandidateBuckets CuckooCodec::candidate_buckets(std::string_view name) const {
  return key_for(name).buckets;
}

CuckooKey CuckooCodec::key_for(std::string_view name) const {
  ++hash_counters().total;
  const std::uint64_t h = hashing_->name_hash(name);
  const Fingerprint fp = fingerprint_from_hash(h);
  const std::uint64_t first = h & bucket_mask_;
  return CuckooKey{fp, {first, alt_bucket(first, fp)}};
}

std::uint64_t CuckooCodec::alt_bucket(std::uint64_t index, Fingerprint fp) const {
  ++hash_counters().total;
  return (index ^ fp_hash_table_[fp.value]) & bucket_mask_;
}

Fingerprint fingerprint_of(std::string_view name, const FilterConfig& config) {
  return CuckooCodec(config).fingerprint_of(name);
}

CandidateBuckets candidate_buckets(std::string_view name, const FilterConfig& config) {
  return CuckooCodec(config).candidate_buckets(name);
}

std::uint64_t alt_bucket(std::uint64_t index, Fingerprint fp, const FilterConfig& config) {
  if (index >= config.num_buckets) throw std::out_of_range("bucket index out of range");
  return CuckooCodec(config).alt_bucket(index, fp);
}

// ---------------------------------------------------------------------------

CuckooBank::CuckooBank(CuckooCodec codec, std::uint32_t lanes, std::uint32_t payload_bits)
    : codec_(std::move(codec)),
      lanes_(lanes),
      payload_bits_(payload_bits),
      fp_bits_(codec_.config().fingerprint_bits),
      counts_(lanes, 0),
      rng_(0x9e3779b97f4a7c15ULL ^ codec_.config().seed) {
  if (lanes_ == 0) throw std::invalid_argument("a cuckoo bank needs at least one lane");
  if (fp_bits_ + payload_bits_ > 64) throw std::invalid_argument("slot wider than 64 bits");
  const std::uint32_t b = config().bucket_slots;
  const std::uint64_t slots = static_cast<std::uint64_t>(lanes_) * config().capacity();
  fingerprints_ = PackedBits(slots * fp_bits_);
  payloads_ = PackedBits(slots * payload_bits_);

  const std::uint32_t fields = lanes_ * b;
  row_bits_ = static_cast<std::uint64_t>(fields) * fp_bits_;
  fields_per_chunk_ = std::min<std::uint32_t>(64 / fp_bits_, fields);
  chunks_ = (fields + fields_per_chunk_ - 1) / fields_per_chunk_;
  chunk_bits_ = static_cast<std::uint64_t>(fields_per_chunk_) * fp_bits_;
  for (std::uint32_t i = 0; i < fields_per_chunk_; ++i) chunk_lows_ |= std::uint64_t{1} << (i * fp_bits_);
  chunk_highs_ = chunk_lows_ << (fp_bits_ - 1);
  for (std::uint32_t i = 0; i < fields - (chunks_ - 1) * fields_per_chunk_; ++i) {
    last_chunk_highs_ |= std::uint64_t{1} << (i * fp_bits_ + fp_bits_ - 1);
  }
  chunk_low_bits_ = chunk_lows_ * ((std::uint64_t{1} << (fp_bits_ - 1)) - 1);
  lane_of_bit_.assign(static_cast<std::size_t>(chunks_) * 64, 0);
  for (std::uint32_t g = 0; g < fields; ++g) {
    const std::uint32_t j = g / fields_per_chunk_, i = g % fields_per_chunk_;
    lane_of_bit_[j * 64 + i * fp_bits_ + fp_bits_ - 1] = static_cast<std::uint8_t>(g / b);
  }

  swar_ = b * fp_bits_ <= 64;
  if (swar_) {
    for (std::uint32_t s = 0; s < b; ++s) swar_lows_ |= std::uint64_t{1} << (s * fp_bits_);
    swar_highs_ = swar_lows_ << (fp_bits_ - 1);
    swar_mask_ = b * fp_bits_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (b * fp_bits_)) - 1;
    swar_low_bits_ = swar_lows_ * ((std::uint64_t{1} << (fp_bits_ - 1)) - 1);
    for (std::uint32_t s = 0; s < b; ++s) slot_of_bit_[s * fp_bits_ + fp_bits_ - 1] = static_cast<std::uint8_t>(s);
  }
}

std::uint64_t CuckooBank::total_items() const {
  std::uint64_t total = 0;
  for (auto c : counts_) total += c;
  return total;
}

double CuckooBank::load_factor(std::uint32_t lane) const {
  return static_cast<double>(counts_[lane]) / static_cast<double>(slots_per_lane());
}

std::uint64_t CuckooBank::memory_bits() const {
  return static_cast<std::uint64_t>(lanes_) * config().capacity() * (fp_bits_ + payload_bits_);
}

std::uint32_t CuckooBank::match_mask(std::uint32_t lane, std::uint64_t bucket, Fingerprint fp) const {
  ++probe_counters().bucket_probes;
  return match_bits(lane, bucket, fp);
}

std::uint32_t CuckooBank::match_bits_wide(std::uint32_t lane, std::uint64_t bucket, Fingerprint fp) const {
  const std::uint32_t b = config().bucket_slots;
  std::uint32_t mask = 0;
  for (std::uint32_t s = 0; s < b; ++s) {
    if (fingerprints_.get(slot_index(lane, bucket, s) * fp_bits_, fp_bits_) == fp.value) mask |= 1U << s;
  }
  return mask;
}

bool CuckooBank::contains(std::uint32_t lane, const CuckooKey& key) const {
  return match_mask(lane, key.buckets.first, key.fingerprint) != 0 ||
         match_mask(lane, key.buckets.second, key.fingerprint) != 0;
}

int CuckooBank::first_vacancy(std::uint32_t lane, std::uint64_t bucket) const {
  const std::uint32_t b = config().bucket_slots;
  const std::uint64_t field = (std::uint64_t{1} << fp_bits_) - 1;
  if (swar_) {
    const std::uint64_t word = bucket_word(lane, bucket);
    if ((((word - swar_lows_) & ~word) & swar_highs_ & swar_mask_) == 0) return -1;
    for (std::uint32_t s = 0; s < b; ++s) {
      if (((word >> (s * fp_bits_)) & field) == 0) return static_cast<int>(s);
    }
    return -1;
  }
  for (std::uint32_t s = 0; s < b; ++s) {
    if (fingerprints_.get(slot_index(lane, bucket, s) * fp_bits_, fp_bits_) == 0) return static_cast<int>(s);
  }
  return -1;
}

Fingerprint CuckooBank::fingerprint_at(const SlotRef& ref) const {
  return Fingerprint{static_cast<std::uint32_t>(
      fingerprints_.get(slot_index(ref.lane, ref.bucket, ref.slot) * fp_bits_, fp_bits_))};
}

std::uint64_t CuckooBank::payload_at(const SlotRef& ref) const {
  return payloads_.get(slot_index(ref.lane, ref.bucket, ref.slot) * payload_bits_, payload_bits_);
}

void CuckooBank::set_payload(const SlotRef& ref, std::uint64_t payload) {
  payloads_.set(slot_index(ref.lane, ref.bucket, ref.slot) * payload_bits_, payload_bits_, payload);
}

void CuckooBank::write_slot(const SlotRef& ref, Fingerprint fp, std::uint64_t payload) {
  const std::uint64_t idx = slot_index(ref.lane, ref.bucket, ref.slot);
  fingerprints_.set(idx * fp_bits_, fp_bits_, fp.value);
  payloads_.set(idx * payload_bits_, payload_bits_, payload);
}

void CuckooBank::clear_slot(const SlotRef& ref) {
  if (fingerprint_at(ref).value == 0) return;
  write_slot(ref, Fingerprint{0}, 0);
  --counts_[ref.lane];
}

InsertOutcome CuckooBank::insert(std::uint32_t lane, const CuckooKey& key, std::uint64_t payload) {
  for (const std::uint64_t bucket : {key.buckets.first, key.buckets.second}) {
    const int vacancy = first_vacancy(lane, bucket);
    if (vacancy >= 0) {
      write_slot({lane, bucket, static_cast<std::uint32_t>(vacancy)}, key.fingerprint, payload);
      ++counts_[lane];
      return {InsertStatus::Stored, 0};
    }
  }

  // Both candidates full: start evicting from the alternate bucket.
  const std::uint32_t b = config().bucket_slots;
  const std::uint32_t max_kicks = config().max_kicks;
  std::vector<SlotRef> path;
  path.reserve(max_kicks);
  Fingerprint carried_fp = key.fingerprint;
  std::uint64_t carried_payload = payload;
  std::uint64_t bucket = key.buckets.second;

  auto swap_with = [&](const SlotRef& ref) {
    const Fingerprint resident_fp = fingerprint_at(ref);
    const std::uint64_t resident_payload = payload_at(ref);
    write_slot(ref, carried_fp, carried_payload);
    carried_fp = resident_fp;
    carried_payload = resident_payload;
  };

  for (std::uint32_t kick = 1; kick <= max_kicks; ++kick) {
    const SlotRef victim{lane, bucket, static_cast<std::uint32_t>(rng_() % b)};
    swap_with(victim);
    path.push_back(victim);
    ++hash_counters().relocation;
    bucket = codec_.alt_bucket(bucket, carried_fp);
    const int vacancy = first_vacancy(lane, bucket);
    if (vacancy >= 0) {
      write_slot({lane, bucket, static_cast<std::uint32_t>(vacancy)}, carried_fp, carried_payload);
      ++counts_[lane];
      return {InsertStatus::Stored, kick};
    }
  }

  // Undo the walk so every previously stored entry is back in place.
  for (auto it = path.rbegin(); it != path.rend(); ++it) swap_with(*it);
  return {InsertStatus::Full, max_kicks};
}

bool CuckooBank::erase(std::uint32_t lane, const CuckooKey& key) {
  for (const std::uint64_t bucket : {key.buckets.first, key.buckets.second}) {
    const std::uint32_t mask = match_mask(lane, bucket, key.fingerprint);
    if (mask != 0) {
      clear_slot({lane, bucket, static_cast<std::uint32_t>(std::countr_zero(mask))});
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

CuckooFilter::CuckooFilter(const FilterConfig& config, std::shared_ptr<const CuckooHashing> hashing)
    : bank_(CuckooCodec(config, std::move(hashing)), 1, 0) {}

InsertOutcome CuckooFilter::insert(std::string_view name) { return bank_.insert(0, bank_.codec().key_for(name)); }

bool CuckooFilter::contains(std::string_view name) const { return bank_.contains(0, bank_.codec().key_for(name)); }

bool CuckooFilter::erase(std::string_view name) { return bank_.erase(0, bank_.codec().key_for(name)); }

}  // namespace dicupit
