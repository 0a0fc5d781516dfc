#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "dicupit/cuckoo.hpp"

namespace dicupit::testing {

// Pins the primary bucket and fingerprint of chosen names and hash(fp) of
// chosen fingerprints. Unlisted fingerprints hash to 0.
class InjectedHashing final : public CuckooHashing {
 public:
  InjectedHashing(std::uint32_t fp_bits, std::map<std::string, std::pair<std::uint32_t, std::uint64_t>> names,
                  std::map<std::uint32_t, std::uint64_t> fp_hashes)
      : fp_bits_(fp_bits), names_(std::move(names)), fp_hashes_(std::move(fp_hashes)) {}

  std::uint64_t name_hash(std::string_view name) const override {
    const auto& [fp, bucket] = names_.at(std::string(name));
    return (static_cast<std::uint64_t>(fp) << (64 - fp_bits_)) | bucket;
  }
  std::uint64_t fingerprint_hash(Fingerprint fp) const override {
    const auto it = fp_hashes_.find(fp.value);
    return it == fp_hashes_.end() ? 0 : it->second;
  }

 private:
  std::uint32_t fp_bits_;
  std::map<std::string, std::pair<std::uint32_t, std::uint64_t>> names_;
  std::map<std::uint32_t, std::uint64_t> fp_hashes_;
};

}  // namespace dicupit::testing
