#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace dicupit {

/// 16-bit wrapping clock in coarse ticks of 4 ms (~262 s per wrap).
/// Ordering uses a half-range window: `a` is after `b` when the wrapped
/// difference a - b lies in [1, 2^15).
struct Timestamp16 {
  static constexpr std::uint64_t kTickMicros = 4000;
  static constexpr std::uint32_t kMaxLifetimeTicks = 0x7fff;

  std::uint16_t value = 0;

  static constexpr Timestamp16 from_micros(std::uint64_t us) {
    return Timestamp16{static_cast<std::uint16_t>((us / kTickMicros) & 0xffff)};
  }
  constexpr Timestamp16 plus(std::uint32_t ticks) const {
    return Timestamp16{static_cast<std::uint16_t>(value + ticks)};
  }
  friend constexpr bool operator==(Timestamp16, Timestamp16) = default;
};

constexpr bool is_after(Timestamp16 a, Timestamp16 b) {
  return static_cast<std::int16_t>(static_cast<std::uint16_t>(a.value - b.value)) > 0;
}

/// An entry stamped `expiration` is dead once `now` is strictly after it.
constexpr bool is_expired(Timestamp16 expiration, Timestamp16 now) { return is_after(now, expiration); }

/// Interest lifetime in milliseconds rounded up to whole ticks.
std::uint32_t lifetime_ticks(std::uint32_t lifetime_ms);

/// Set of router interfaces (at most 32).
class InterfaceSet {
 public:
  static constexpr std::uint32_t kMaxInterfaces = 32;

  constexpr InterfaceSet() = default;
  constexpr InterfaceSet(std::initializer_list<std::uint32_t> ifaces) {
    for (auto i : ifaces) insert(i);
  }
  static constexpr InterfaceSet from_bits(std::uint32_t bits) {
    InterfaceSet s;
    s.bits_ = bits;
    return s;
  }

  constexpr void insert(std::uint32_t iface) { bits_ |= std::uint32_t{1} << iface; }
  constexpr void erase(std::uint32_t iface) { bits_ &= ~(std::uint32_t{1} << iface); }
  constexpr bool contains(std::uint32_t iface) const { return (bits_ >> iface) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint32_t size() const { return static_cast<std::uint32_t>(std::popcount(bits_)); }
  constexpr std::uint32_t bits() const { return bits_; }
  std::vector<std::uint32_t> to_vector() const;

  constexpr InterfaceSet& operator|=(InterfaceSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr InterfaceSet operator|(InterfaceSet a, InterfaceSet b) { return a |= b; }
  friend constexpr bool operator==(InterfaceSet, InterfaceSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

enum class InterestDecision { ForwardToFib, Aggregated, InsertFailed };

struct DataDecision {
  enum class Kind { Forward, NoMatch };

  Kind kind = Kind::NoMatch;
  InterfaceSet interfaces;  // non-empty iff kind == Forward

  static DataDecision forward(InterfaceSet s) { return {Kind::Forward, s}; }
  static DataDecision no_match() { return {}; }
  bool forwarded() const { return kind == Kind::Forward; }
  friend bool operator==(const DataDecision&, const DataDecision&) = default;
};

std::string_view to_string(InterestDecision d);

struct PitStats {
  std::uint64_t interests = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t aggregated = 0;
  std::uint64_t insert_failed = 0;
  std::uint64_t data = 0;
  std::uint64_t data_forwarded = 0;
  std::uint64_t data_no_match = 0;
  std::uint64_t expired = 0;
};

/// Common interface of every pending interest table.
///
/// Names are passed in rendered form ("a/b/c"). on_interest/on_data mutate;
/// lookup and would_aggregate are read-only probes used by the benchmarks
/// (the data-side and interest-side searches respectively).
class Pit {
 public:
  virtual ~Pit() = default;

  virtual std::string_view kind() const = 0;
  virtual std::uint32_t ports() const = 0;

  InterestDecision on_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now);
  DataDecision on_data(std::string_view name, Timestamp16 now);
  std::size_t expire(Timestamp16 now);

  virtual InterfaceSet lookup(std::string_view name, Timestamp16 now) const = 0;
  virtual bool would_aggregate(std::string_view name, Timestamp16 now) const = 0;
  virtual std::uint64_t memory_bits() const = 0;
  /// Live (pending) entries.
  virtual std::uint64_t size() const = 0;

  const PitStats& stats() const { return stats_; }

 protected:
  virtual InterestDecision handle_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) = 0;
  virtual DataDecision handle_data(std::string_view name, Timestamp16 now) = 0;
  virtual std::size_t handle_expire(Timestamp16 now) = 0;

 private:
  PitStats stats_;
};

}  // namespace dicupit
