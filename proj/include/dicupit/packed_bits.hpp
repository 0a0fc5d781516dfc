#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace dicupit {

// Flat bit array addressed by bit offset; fields of 0..64 bits may straddle
// word boundaries. One trailing guard word keeps two-word reads in bounds.
class PackedBits {
 public:
  PackedBits() = default;
  explicit PackedBits(std::uint64_t bit_count) : words_(bit_count / 64 + 2, 0) {}

  std::uint64_t get(std::uint64_t offset, unsigned width) const {
    if (width == 0) return 0;
    const std::uint64_t w = offset >> 6;
    const unsigned shift = offset & 63;
    std::uint64_t v = words_[w] >> shift;
    if (shift + width > 64) v |= words_[w + 1] << (64 - shift);
    return width == 64 ? v : v & ((std::uint64_t{1} << width) - 1);
  }

  // Branch-free read for 1..64-bit fields.
  std::uint64_t get_fast(std::uint64_t offset, std::uint64_t mask) const {
    const std::uint64_t w = offset >> 6;
    const unsigned __int128 pair = (static_cast<unsigned __int128>(words_[w + 1]) << 64) | words_[w];
    return static_cast<std::uint64_t>(pair >> (offset & 63)) & mask;
  }

  void set(std::uint64_t offset, unsigned width, std::uint64_t value) {
    if (width == 0) return;
    const std::uint64_t mask = width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    value &= mask;
    const std::uint64_t w = offset >> 6;
    const unsigned shift = offset & 63;
    words_[w] = (words_[w] & ~(mask << shift)) | (value << shift);
    if (shift + width > 64) {
      const unsigned spill = shift + width - 64;
      const std::uint64_t high_mask = (std::uint64_t{1} << spill) - 1;
      words_[w + 1] = (words_[w + 1] & ~high_mask) | (value >> (64 - shift));
    }
  }

  void prefetch(std::uint64_t offset) const { __builtin_prefetch(&words_[offset >> 6]); }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace dicupit
