#include "dicupit/bloom.hpp"

#include <cmath>
#include <stdexcept>

#include "dicupit/hashing.hpp"

namespace dicupit {

double bloom_fpp(double n, double m, unsigned k) {
  if (m <= 0) throw std::domain_error("bloom_fpp: m must be positive");
  if (k == 0) throw std::domain_error("bloom_fpp: k must be positive");
  if (n <= 0) return 0.0;
  return std::pow(-std::expm1(-static_cast<double>(k) * n / m), static_cast<double>(k));
}

std::uint64_t bloom_bits_for(std::uint64_t n, unsigned k, double target) {
  if (k == 0 || target <= 0 || target >= 1) throw std::invalid_argument("bloom_bits_for: bad k or target");
  if (n == 0) return 1;
  const double m = -static_cast<double>(n) * k / std::log1p(-std::pow(target, 1.0 / k));
  return static_cast<std::uint64_t>(std::ceil(m));
}

void BloomConfig::validate() const {
  if (bit_count == 0) throw std::invalid_argument("bloom bit_count must be positive");
  if (num_hashes == 0) throw std::invalid_argument("bloom num_hashes must be positive");
}

BloomConfig BloomConfig::sized_for(std::uint64_t n, std::uint32_t k, double target, std::uint32_t seed) {
  return BloomConfig{bloom_bits_for(n, k, target), k, n, seed};
}

CountingBloom::CountingBloom(const BloomConfig& config)
    : config_((config.validate(), config)), counters_(config.bit_count * kCounterBits) {}

void CountingBloom::positions(std::string_view name, std::vector<std::uint64_t>& out) const {
  out.resize(config_.num_hashes);
  for (std::uint32_t j = 0; j < config_.num_hashes; ++j) {
    out[j] = reduce_range(counted_hash64(name, config_.seed * 0x9e3779b9U + j), config_.bit_count);
  }
}

bool CountingBloom::query_at(const std::vector<std::uint64_t>& pos) const {
  for (auto p : pos) {
    if (counter(p) == 0) return false;
  }
  return true;
}

void CountingBloom::insert_at(const std::vector<std::uint64_t>& pos) {
  for (auto p : pos) {
    const std::uint64_t c = counter(p);
    if (c < kCounterMax) counters_.set(p * kCounterBits, kCounterBits, c + 1);
  }
  ++items_;
}

bool CountingBloom::remove_at(const std::vector<std::uint64_t>& pos) {
  if (!query_at(pos)) return false;
  for (auto p : pos) {
    const std::uint64_t c = counter(p);
    if (c < kCounterMax) counters_.set(p * kCounterBits, kCounterBits, c - 1);
  }
  if (items_ > 0) --items_;
  return true;
}

bool CountingBloom::insert(std::string_view name) {
  positions(name, scratch_);
  insert_at(scratch_);
  return true;
}

bool CountingBloom::query(std::string_view name) const {
  positions(name, scratch_);
  return query_at(scratch_);
}

bool CountingBloom::remove(std::string_view name) {
  positions(name, scratch_);
  return remove_at(scratch_);
}

void CountingBloom::clear() {
  counters_.clear();
  items_ = 0;
}

}  // namespace dicupit
