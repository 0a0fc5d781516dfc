#include "dicupit/pit.hpp"

#include <stdexcept>
#include <string>

namespace dicupit {

std::uint32_t lifetime_ticks(std::uint32_t lifetime_ms) {
  const std::uint64_t us = static_cast<std::uint64_t>(lifetime_ms) * 1000;
  const std::uint64_t ticks = (us + Timestamp16::kTickMicros - 1) / Timestamp16::kTickMicros;
  if (ticks == 0 || ticks > Timestamp16::kMaxLifetimeTicks) {
    throw std::invalid_argument("interest lifetime must be within (0, 131068] ms, got " + std::to_string(lifetime_ms));
  }
  return static_cast<std::uint32_t>(ticks);
}

std::vector<std::uint32_t> InterfaceSet::to_vector() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::uint32_t>(std::countr_zero(b)));
  return out;
}

std::string_view to_string(InterestDecision d) {
  switch (d) {
    case InterestDecision::ForwardToFib: return "ForwardToFib";
    case InterestDecision::Aggregated: return "Aggregated";
    case InterestDecision::InsertFailed: return "InsertFailed";
  }
  return "?";
}

InterestDecision Pit::on_interest(std::string_view name, std::uint32_t in_interface, Timestamp16 now) {
  if (in_interface >= ports()) {
    throw std::out_of_range("interface " + std::to_string(in_interface) + " out of range for " +
                            std::to_string(ports()) + " ports");
  }
  ++stats_.interests;
  const InterestDecision d = handle_interest(name, in_interface, now);
  switch (d) {
    case InterestDecision::ForwardToFib: ++stats_.forwarded; break;
    case InterestDecision::Aggregated: ++stats_.aggregated; break;
    case InterestDecision::InsertFailed: ++stats_.insert_failed; break;
  }
  return d;
}

DataDecision Pit::on_data(std::string_view name, Timestamp16 now) {
  ++stats_.data;
  DataDecision d = handle_data(name, now);
  if (d.forwarded()) {
    ++stats_.data_forwarded;
  } else {
    ++stats_.data_no_match;
  }
  return d;
}

std::size_t Pit::expire(Timestamp16 now) {
  const std::size_t purged = handle_expire(now);
  stats_.expired += purged;
  return purged;
}

}  // namespace dicupit
