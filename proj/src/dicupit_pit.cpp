#include "dicupit/dicupit_pit.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <tuple>

namespace dicupit {

namespace {

FilterConfig global_filter(const DiCuPitConfig& c) {
  FilterConfig g = c.filter;
  g.num_buckets = c.filter.num_buckets * c.global_multiplier;
  return g;
}

std::shared_ptr<const CuckooHashing> resolve_hashing(const DiCuPitConfig& c,
                                                     std::shared_ptr<const CuckooHashing> hashing) {
  if (hashing) return hashing;
  return std::make_shared<MurmurCuckooHashing>(c.filter.seed);
}

}  // namespace

std::uint64_t dicupit_memory_bits(std::uint32_t k, std::uint64_t e, std::uint32_t b, std::uint32_t f,
                                  std::uint32_t global_multiplier) {
  const std::uint64_t slots = e * b;
  const std::uint64_t w = std::max<std::uint32_t>(8, k);
  return k * slots * (f + 16) + slots * global_multiplier * (f + 16 + w);
}

void DiCuPitConfig::validate() const {
  if (num_interfaces == 0 || num_interfaces > InterfaceSet::kMaxInterfaces) {
    throw std::invalid_argument("num_interfaces must be in [1, 32], got " + std::to_string(num_interfaces));
  }
  if (global_multiplier == 0 || !std::has_single_bit(global_multiplier)) {
    throw std::invalid_argument("global_multiplier must be a power of two");
  }
  filter.validate();
}

DiCuPit::DiCuPit(const DiCuPitConfig& config, std::shared_ptr<const CuckooHashing> hashing)
    : config_((config.validate(), config)),
      iface_bits_(std::max<std::uint32_t>(8, config.num_interfaces)),
      lifetime_(lifetime_ticks(config.interest_lifetime_ms)),
      sub_(CuckooCodec(config.filter, resolve_hashing(config, hashing)), config.num_interfaces, 16),
      global_(CuckooCodec(global_filter(config), resolve_hashing(config, hashing)), 1, 16 + iface_bits_) {}

DiCuPit::Keys DiCuPit::keys_for(std::string_view name) const {
  const RawKey raw = sub_.codec().raw_key(name);
  Keys k{sub_.codec().key_from_raw(raw), global_.codec().key_from_raw(raw)};
  global_.prefetch(k.global);
  sub_.prefetch(k.sub);
  return k;
}

std::uint64_t DiCuPit::pack_global(Timestamp16 expiry, InterfaceSet ifaces) const {
  return expiry.value | (static_cast<std::uint64_t>(ifaces.bits()) << 16);
}

std::optional<SlotRef> DiCuPit::search_global(const CuckooKey& key, Timestamp16 now) const {
  stale_global_.clear();
  std::optional<SlotRef> found;
  const std::uint64_t buckets[2] = {key.buckets.first, key.buckets.second};
  const int n = key.buckets.first == key.buckets.second ? 1 : 2;
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t m = global_.match_mask(0, buckets[i], key.fingerprint); m != 0; m &= m - 1) {
      const SlotRef ref{0, buckets[i], static_cast<std::uint32_t>(std::countr_zero(m))};
      if (is_expired(expiry_of(global_.payload_at(ref)), now)) {
        stale_global_.push_back(ref);
      } else if (!found) {
        found = ref;
      }
    }
  }
  return found;
}

void DiCuPit::search_lanes(const CuckooKey& key, Timestamp16 now) const {
  hits_.clear();
  stale_.clear();
  const std::uint64_t buckets[2] = {key.buckets.first, key.buckets.second};
  const int n = key.buckets.first == key.buckets.second ? 1 : 2;
  const bool check = may_have_expired(now);
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t lanes = sub_.lanes_matching(buckets[i], key.fingerprint); lanes != 0; lanes &= lanes - 1) {
      const auto lane = static_cast<std::uint32_t>(std::countr_zero(lanes));
      for (std::uint32_t m = sub_.match_bits(lane, buckets[i], key.fingerprint); m != 0; m &= m - 1) {
        const SlotRef ref{lane, buckets[i], static_cast<std::uint32_t>(std::countr_zero(m))};
        if (check && is_expired(expiry_of(sub_.payload_at(ref)), now)) {
          stale_.push_back(ref);
        } else {
          hits_.push_back({lane, ref});
        }
      }
    }
  }
  std::sort(hits_.begin(), hits_.end(), [](const SearchHit& a, const SearchHit& b) {
    return std::tie(a.interface, a.slot.bucket, a.slot.slot) < std::tie(b.interface, b.slot.bucket, b.slot.slot);
  });
}

void DiCuPit::note_expiry(Timestamp16 expiry) {
  if (!written_ || is_after(oldest_expiry_, expiry)) oldest_expiry_ = expiry;
  written_ = true;
}

void DiCuPit::clear_stale() {
  for (const auto& ref : stale_) sub_.clear_slot(ref);
  for (const auto& ref : stale_global_) global_.clear_slot(ref);
  stale_.clear();
  stale_global_.clear();
}

InterestDecision DiCuPit::handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) {
  const Keys keys = keys_for(name);
  const Timestamp16 expiry = now.plus(lifetime_);
  note_expiry(expiry);

  if (const auto ref = search_global(keys.global, now)) {
    InterfaceSet s = ifaces_of(global_.payload_at(*ref));
    s.insert(in_interface);
    global_.set_payload(*ref, pack_global(expiry, s));
    for (const auto& r : stale_global_) global_.clear_slot(r);
    return InterestDecision::Aggregated;
  }

  search_lanes(keys.sub, now);
  clear_stale();
  if (!hits_.empty()) {
    InterfaceSet s;
    for (const auto& h : hits_) s.insert(h.interface);
    if (s == InterfaceSet{in_interface}) {
      // Retransmission on the same interface: refresh only.
      for (const auto& h : hits_) sub_.set_payload(h.slot, expiry.value);
      return InterestDecision::Aggregated;
    }
    s.insert(in_interface);
    if (!global_.insert(0, keys.global, pack_global(expiry, s)).stored()) return InterestDecision::InsertFailed;
    for (const auto& h : hits_) sub_.clear_slot(h.slot);
    return InterestDecision::Aggregated;
  }

  if (!sub_.insert(in_interface, keys.sub, expiry.value).stored()) return InterestDecision::InsertFailed;
  return InterestDecision::ForwardToFib;
}

DataDecision DiCuPit::handle_data(std::string_view name, Timestamp16 now) {
  const Keys keys = keys_for(name);
  if (const auto ref = search_global(keys.global, now)) {
    const InterfaceSet s = ifaces_of(global_.payload_at(*ref));
    global_.clear_slot(*ref);
    for (const auto& r : stale_global_) global_.clear_slot(r);
    return DataDecision::forward(s);
  }
  search_lanes(keys.sub, now);
  clear_stale();
  if (hits_.empty()) return DataDecision::no_match();
  InterfaceSet s;
  for (const auto& h : hits_) {
    s.insert(h.interface);
    sub_.clear_slot(h.slot);
  }
  return DataDecision::forward(s);
}

std::size_t DiCuPit::handle_expire(Timestamp16 now) {
  std::vector<SlotRef> dead;
  for (std::uint32_t lane = 0; lane < sub_.lanes(); ++lane) {
    sub_.for_each_occupied(lane, [&](const SlotRef& ref, Fingerprint, std::uint64_t payload) {
      if (is_expired(expiry_of(payload), now)) dead.push_back(ref);
    });
  }
  for (const auto& ref : dead) sub_.clear_slot(ref);
  std::size_t purged = dead.size();
  dead.clear();
  global_.for_each_occupied(0, [&](const SlotRef& ref, Fingerprint, std::uint64_t payload) {
    if (is_expired(expiry_of(payload), now)) dead.push_back(ref);
  });
  for (const auto& ref : dead) global_.clear_slot(ref);
  purged += dead.size();

  written_ = false;
  auto track = [&](const SlotRef&, Fingerprint, std::uint64_t payload) { note_expiry(expiry_of(payload)); };
  for (std::uint32_t lane = 0; lane < sub_.lanes(); ++lane) sub_.for_each_occupied(lane, track);
  global_.for_each_occupied(0, track);
  return purged;
}

InterfaceSet DiCuPit::lookup(std::string_view name, Timestamp16 now) const {
  const Keys keys = keys_for(name);
  const CuckooKey& g = keys.global;
  const int ng = g.buckets.first == g.buckets.second ? 1 : 2;
  const std::uint64_t gb[2] = {g.buckets.first, g.buckets.second};
  probe_counters().bucket_probes += ng;
  for (int i = 0; i < ng; ++i) {
    for (std::uint32_t m = global_.match_bits(0, gb[i], g.fingerprint); m != 0; m &= m - 1) {
      const std::uint64_t payload = global_.payload_at({0, gb[i], static_cast<std::uint32_t>(std::countr_zero(m))});
      if (!is_expired(expiry_of(payload), now)) return ifaces_of(payload);
    }
  }
  const CuckooKey& k = keys.sub;
  const int n = k.buckets.first == k.buckets.second ? 1 : 2;
  const std::uint64_t sb[2] = {k.buckets.first, k.buckets.second};
  InterfaceSet out;
  if (!may_have_expired(now)) {
    std::uint32_t lanes = sub_.lanes_matching(sb[0], k.fingerprint);
    if (n == 2) lanes |= sub_.lanes_matching(sb[1], k.fingerprint);
    return InterfaceSet::from_bits(lanes);
  }
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t lanes = sub_.lanes_matching(sb[i], k.fingerprint); lanes != 0; lanes &= lanes - 1) {
      const auto lane = static_cast<std::uint32_t>(std::countr_zero(lanes));
      if (out.contains(lane)) continue;
      for (std::uint32_t m = sub_.match_bits(lane, sb[i], k.fingerprint); m != 0; m &= m - 1) {
        const std::uint64_t payload = sub_.payload_at({lane, sb[i], static_cast<std::uint32_t>(std::countr_zero(m))});
        if (!is_expired(expiry_of(payload), now)) {
          out.insert(lane);
          break;
        }
      }
    }
  }
  return out;
}

bool DiCuPit::would_aggregate(std::string_view name, Timestamp16 now) const { return !lookup(name, now).empty(); }

std::uint64_t DiCuPit::memory_bits() const { return sub_.memory_bits() + global_.memory_bits(); }

std::uint64_t DiCuPit::size() const { return sub_.total_items() + global_.total_items(); }

std::vector<SearchHit> DiCuPit::global_search(std::string_view name, Timestamp16 now) const {
  search_lanes(keys_for(name).sub, now);
  std::vector<SearchHit> out = hits_;
  hits_.clear();
  stale_.clear();
  return out;
}

std::optional<InterfaceSet> DiCuPit::global_entry(std::string_view name, Timestamp16 now) const {
  const auto ref = search_global(keys_for(name).global, now);
  stale_global_.clear();
  if (!ref) return std::nullopt;
  return ifaces_of(global_.payload_at(*ref));
}

bool DiCuPit::sub_table_holds(std::uint32_t iface, std::string_view name, Timestamp16 now) const {
  if (iface >= sub_.lanes()) throw std::out_of_range("interface out of range");
  search_lanes(keys_for(name).sub, now);
  const bool held = std::any_of(hits_.begin(), hits_.end(), [&](const SearchHit& h) { return h.interface == iface; });
  hits_.clear();
  stale_.clear();
  return held;
}

}  // namespace dicupit
