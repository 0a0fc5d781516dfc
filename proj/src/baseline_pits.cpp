#include "dicupit/baseline_pits.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dicupit/cuckoo.hpp"
#include "dicupit/hashing.hpp"

namespace dicupit {

namespace {

void check_ports(std::uint32_t k) {
  if (k == 0 || k > InterfaceSet::kMaxInterfaces) {
    throw std::invalid_argument("num_interfaces must be in [1, 32], got " + std::to_string(k));
  }
}

constexpr std::uint32_t kBucketSeedXor = 0x5bd1e995U;

}  // namespace

// ---------------------------------------------------------------------------
// DiPit

void DiPitConfig::validate() const {
  check_ports(num_interfaces);
  if (num_hashes == 0) throw std::invalid_argument("num_hashes must be positive");
  if (bit_count == 0 && (target_fpp <= 0 || target_fpp >= 1)) throw std::invalid_argument("target_fpp must be in (0, 1)");
}

namespace {

BloomConfig dipit_filter(const DiPitConfig& c, std::uint32_t index) {
  const std::uint64_t m = c.bit_count != 0 ? c.bit_count : bloom_bits_for(c.expected_items, c.num_hashes, c.target_fpp);
  return BloomConfig{m, c.num_hashes, c.expected_items, c.seed * 257U + index};
}

}  // namespace

DiPit::DiPit(const DiPitConfig& config)
    : config_((config.validate(), config)), shared_(dipit_filter(config, 0)) {
  filters_.reserve(config_.num_interfaces);
  for (std::uint32_t i = 0; i < config_.num_interfaces; ++i) filters_.emplace_back(dipit_filter(config_, i + 1));
}

InterestDecision DiPit::handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16) {
  CountingBloom& own = filters_[in_interface];
  std::vector<std::uint64_t> shared_pos;
  shared_.positions(name, shared_pos);
  own.positions(name, pos_);
  consults_ += 2;
  const bool pending = shared_.query_at(shared_pos);
  const bool own_has = own.query_at(pos_);
  if (!own_has) own.insert_at(pos_);
  if (pending) return InterestDecision::Aggregated;
  shared_.insert_at(shared_pos);
  return InterestDecision::ForwardToFib;
}

DataDecision DiPit::handle_data(std::string_view name, Timestamp16) {
  InterfaceSet out;
  for (std::uint32_t i = 0; i < config_.num_interfaces; ++i) {
    filters_[i].positions(name, pos_);
    ++consults_;
    if (filters_[i].remove_at(pos_)) out.insert(i);
  }
  if (out.empty()) return DataDecision::no_match();
  shared_.positions(name, pos_);
  ++consults_;
  shared_.remove_at(pos_);
  return DataDecision::forward(out);
}

InterfaceSet DiPit::lookup(std::string_view name, Timestamp16) const {
  InterfaceSet out;
  for (std::uint32_t i = 0; i < config_.num_interfaces; ++i) {
    filters_[i].positions(name, pos_);
    ++consults_;
    if (filters_[i].query_at(pos_)) out.insert(i);
  }
  return out;
}

bool DiPit::would_aggregate(std::string_view name, Timestamp16) const {
  ++consults_;
  return shared_.query(name);
}

std::uint64_t DiPit::memory_bits() const {
  std::uint64_t bits = shared_.memory_bits();
  for (const auto& f : filters_) bits += f.memory_bits();
  return bits;
}

// ---------------------------------------------------------------------------
// ChainPit

void HashPitConfig::validate() const {
  check_ports(num_interfaces);
  if (capacity == 0 || capacity >= ChainPit::kNil) throw std::invalid_argument("capacity must be in [1, 2^32 - 1)");
  if (buckets >= ChainPit::kNil) throw std::invalid_argument("buckets must be below 2^32 - 1");
}

ChainPit::ChainPit(const HashPitConfig& config)
    : config_((config.validate(), config)),
      iface_bits_(std::max<std::uint32_t>(8, config.num_interfaces)),
      lifetime_(lifetime_ticks(config.interest_lifetime_ms)),
      heads_(config.buckets != 0 ? config.buckets : config.capacity, kNil),
      pool_(config.capacity) {
  for (std::uint64_t i = 0; i < pool_.size(); ++i) {
    pool_[i].next = i + 1 < pool_.size() ? static_cast<std::uint32_t>(i + 1) : kNil;
  }
  free_ = 0;
}

ChainPit::Key ChainPit::key_for(std::string_view name) const {
  const std::uint32_t b = counted_hash32(name, config_.seed ^ kBucketSeedXor);
  const std::uint32_t d = counted_hash32(name, config_.seed);
  return {reduce_range32(b, static_cast<std::uint32_t>(heads_.size())), d};
}

void ChainPit::unlink(std::uint32_t bucket, std::uint32_t prev, std::uint32_t idx) {
  if (prev == kNil) {
    heads_[bucket] = pool_[idx].next;
  } else {
    pool_[prev].next = pool_[idx].next;
  }
  pool_[idx] = Entry{};
  pool_[idx].next = free_;
  free_ = idx;
  --live_;
}

std::uint32_t ChainPit::find(const Key& key, Timestamp16 now, bool purge) {
  std::uint32_t prev = kNil;
  std::uint32_t idx = heads_[key.bucket];
  std::uint32_t found = kNil;
  while (idx != kNil) {
    const std::uint32_t next = pool_[idx].next;
    if (purge && is_expired(Timestamp16{pool_[idx].expiration}, now)) {
      unlink(key.bucket, prev, idx);
      ++expired_purged_;
    } else {
      if (found == kNil && pool_[idx].digest == key.digest) found = idx;
      prev = idx;
    }
    idx = next;
  }
  return found;
}

std::uint32_t ChainPit::find_const(const Key& key, Timestamp16 now) const {
  for (std::uint32_t idx = heads_[key.bucket]; idx != kNil; idx = pool_[idx].next) {
    const Entry& e = pool_[idx];
    if (e.digest == key.digest && !is_expired(Timestamp16{e.expiration}, now)) return idx;
  }
  return kNil;
}

InterestDecision ChainPit::handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) {
  const Key key = key_for(name);
  const Timestamp16 expiry = now.plus(lifetime_);
  const std::uint32_t hit = find(key, now, true);
  if (hit != kNil) {
    pool_[hit].interfaces |= 1U << in_interface;
    pool_[hit].expiration = expiry.value;
    return InterestDecision::Aggregated;
  }
  if (free_ == kNil) return InterestDecision::InsertFailed;
  const std::uint32_t idx = free_;
  free_ = pool_[idx].next;
  pool_[idx] = Entry{key.digest, expiry.value, 1U << in_interface, heads_[key.bucket]};
  heads_[key.bucket] = idx;
  ++live_;
  return InterestDecision::ForwardToFib;
}

DataDecision ChainPit::handle_data(std::string_view name, Timestamp16 now) {
  const Key key = key_for(name);
  if (find(key, now, true) == kNil) return DataDecision::no_match();
  std::uint32_t prev = kNil;
  for (std::uint32_t idx = heads_[key.bucket]; idx != kNil; prev = idx, idx = pool_[idx].next) {
    if (pool_[idx].digest == key.digest) {
      const InterfaceSet s = InterfaceSet::from_bits(pool_[idx].interfaces);
      unlink(key.bucket, prev, idx);
      return DataDecision::forward(s);
    }
  }
  return DataDecision::no_match();
}

std::size_t ChainPit::handle_expire(Timestamp16 now) {
  const std::uint64_t before = live_;
  for (std::uint32_t b = 0; b < heads_.size(); ++b) {
    std::uint32_t prev = kNil;
    std::uint32_t idx = heads_[b];
    while (idx != kNil) {
      const std::uint32_t next = pool_[idx].next;
      if (is_expired(Timestamp16{pool_[idx].expiration}, now)) {
        unlink(b, prev, idx);
      } else {
        prev = idx;
      }
      idx = next;
    }
  }
  return before - live_;
}

InterfaceSet ChainPit::lookup(std::string_view name, Timestamp16 now) const {
  const std::uint32_t idx = find_const(key_for(name), now);
  return idx == kNil ? InterfaceSet{} : InterfaceSet::from_bits(pool_[idx].interfaces);
}

bool ChainPit::would_aggregate(std::string_view name, Timestamp16 now) const {
  return find_const(key_for(name), now) != kNil;
}

std::uint64_t ChainPit::memory_bits() const {
  return static_cast<std::uint64_t>(pool_.size()) * entry_bits() + static_cast<std::uint64_t>(heads_.size()) * 32;
}

// ---------------------------------------------------------------------------
// Ht32Pit

Ht32Pit::Ht32Pit(const HashPitConfig& config)
    : config_((config.validate(), config)),
      iface_bits_(std::max<std::uint32_t>(8, config.num_interfaces)),
      lifetime_(lifetime_ticks(config.interest_lifetime_ms)),
      table_(config.capacity) {}

std::uint32_t Ht32Pit::digest_of(std::string_view name) const {
  const std::uint32_t d = counted_hash32(name, config_.seed);
  return d == 0 ? 1U : d;
}

std::uint64_t Ht32Pit::home(std::uint32_t digest) const {
  return reduce_range32(digest, static_cast<std::uint32_t>(table_.size()));
}

std::uint64_t Ht32Pit::find(std::uint32_t digest) const {
  const std::uint64_t n = table_.size();
  std::uint64_t i = home(digest);
  for (std::uint64_t step = 0; step < n; ++step) {
    ++probe_counters().bucket_probes;
    const Slot& s = table_[i];
    if (s.digest == digest) return i;
    if (s.digest == 0) return n;
    if (++i == n) i = 0;
  }
  return n;
}

void Ht32Pit::erase_at(std::uint64_t idx) {
  const std::uint64_t n = table_.size();
  std::uint64_t hole = idx;
  std::uint64_t j = idx;
  for (;;) {
    if (++j == n) j = 0;
    if (table_[j].digest == 0 || j == idx) break;
    const std::uint64_t h = home(table_[j].digest);
    // Move j into the hole unless its home lies cyclically in (hole, j].
    const bool stays = hole <= j ? (hole < h && h <= j) : (hole < h || h <= j);
    if (!stays) {
      table_[hole] = table_[j];
      hole = j;
    }
  }
  table_[hole] = Slot{};
  --count_;
}

InterestDecision Ht32Pit::handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) {
  const std::uint32_t digest = digest_of(name);
  const Timestamp16 expiry = now.plus(lifetime_);
  const std::uint64_t at = find(digest);
  if (at != table_.size()) {
    Slot& s = table_[at];
    const bool live = !is_expired(Timestamp16{s.expiration}, now);
    s.interfaces = live ? s.interfaces | (1U << in_interface) : 1U << in_interface;
    s.expiration = expiry.value;
    return live ? InterestDecision::Aggregated : InterestDecision::ForwardToFib;
  }
  if (count_ >= table_.size()) return InterestDecision::InsertFailed;
  std::uint64_t i = home(digest);
  while (table_[i].digest != 0) {
    if (++i == table_.size()) i = 0;
  }
  table_[i] = Slot{digest, expiry.value, 1U << in_interface};
  ++count_;
  return InterestDecision::ForwardToFib;
}

DataDecision Ht32Pit::handle_data(std::string_view name, Timestamp16 now) {
  const std::uint64_t at = find(digest_of(name));
  if (at == table_.size()) return DataDecision::no_match();
  const Slot s = table_[at];
  erase_at(at);
  if (is_expired(Timestamp16{s.expiration}, now)) return DataDecision::no_match();
  return DataDecision::forward(InterfaceSet::from_bits(s.interfaces));
}

std::size_t Ht32Pit::handle_expire(Timestamp16 now) {
  std::size_t purged = 0;
  for (std::uint64_t i = 0; i < table_.size();) {
    if (table_[i].digest != 0 && is_expired(Timestamp16{table_[i].expiration}, now)) {
      erase_at(i);
      ++purged;
    } else {
      ++i;
    }
  }
  return purged;
}

InterfaceSet Ht32Pit::lookup(std::string_view name, Timestamp16 now) const {
  const std::uint64_t at = find(digest_of(name));
  if (at == table_.size() || is_expired(Timestamp16{table_[at].expiration}, now)) return {};
  return InterfaceSet::from_bits(table_[at].interfaces);
}

bool Ht32Pit::would_aggregate(std::string_view name, Timestamp16 now) const { return !lookup(name, now).empty(); }

std::uint64_t Ht32Pit::memory_bits() const { return static_cast<std::uint64_t>(table_.size()) * entry_bits(); }

// ---------------------------------------------------------------------------
// OraclePit

OraclePit::OraclePit(std::uint32_t num_interfaces, std::uint32_t interest_lifetime_ms)
    : ports_(num_interfaces), lifetime_(lifetime_ticks(interest_lifetime_ms)) {
  check_ports(num_interfaces);
}

InterestDecision OraclePit::handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) {
  const Timestamp16 expiry = now.plus(lifetime_);
  auto it = entries_.find(name);
  if (it != entries_.end() && !is_expired(it->second.expiration, now)) {
    it->second.interfaces.insert(in_interface);
    it->second.expiration = expiry;
    return InterestDecision::Aggregated;
  }
  if (it != entries_.end()) {
    it->second = Entry{InterfaceSet{in_interface}, expiry};
  } else {
    entries_.emplace(std::string(name), Entry{InterfaceSet{in_interface}, expiry});
  }
  return InterestDecision::ForwardToFib;
}

DataDecision OraclePit::handle_data(std::string_view name, Timestamp16 now) {
  auto it = entries_.find(name);
  if (it == entries_.end()) return DataDecision::no_match();
  const Entry e = it->second;
  entries_.erase(it);
  if (is_expired(e.expiration, now)) return DataDecision::no_match();
  return DataDecision::forward(e.interfaces);
}

std::size_t OraclePit::handle_expire(Timestamp16 now) {
  return std::erase_if(entries_, [&](const auto& kv) { return is_expired(kv.second.expiration, now); });
}

InterfaceSet OraclePit::lookup(std::string_view name, Timestamp16 now) const {
  auto it = entries_.find(name);
  if (it == entries_.end() || is_expired(it->second.expiration, now)) return {};
  return it->second.interfaces;
}

bool OraclePit::would_aggregate(std::string_view name, Timestamp16 now) const { return !lookup(name, now).empty(); }

std::uint64_t OraclePit::memory_bits() const {
  std::uint64_t bits = 0;
  for (const auto& [name, e] : entries_) bits += name.size() * 8 + 16 + 32;
  return bits;
}

}  // namespace dicupit
