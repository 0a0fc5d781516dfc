#include "dicupit/hashing.hpp"

#include <cstring>

namespace dicupit {
namespace {

inline std::uint32_t rotl32(std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); }
inline std::uint64_t rotl64(std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

inline std::uint32_t load32(const std::byte* p) {
  std::uint32_t v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline std::uint64_t load64(const std::byte* p) {
  std::uint64_t v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline std::uint32_t fmix32(std::uint32_t h) {
  h ^= h >> 16;
  h *= 0x85ebca6bU;
  h ^= h >> 13;
  h *= 0xc2b2ae35U;
  h ^= h >> 16;
  return h;
}

inline std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

inline std::uint64_t tail_byte(const std::byte* p, int i) {
  return static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(p[i]));
}

}  // namespace

// Both functions assume a little-endian host, matching the reference code.

std::uint32_t murmur3_32(std::span<const std::byte> data, std::uint32_t seed) {
  const std::byte* p = data.data();
  const std::size_t len = data.size();
  const std::size_t nblocks = len / 4;
  constexpr std::uint32_t c1 = 0xcc9e2d51U;
  constexpr std::uint32_t c2 = 0x1b873593U;

  std::uint32_t h1 = seed;
  for (std::size_t i = 0; i < nblocks; ++i) {
    std::uint32_t k1 = load32(p + i * 4);
    k1 *= c1;
    k1 = rotl32(k1, 15);
    k1 *= c2;
    h1 ^= k1;
    h1 = rotl32(h1, 13);
    h1 = h1 * 5 + 0xe6546b64U;
  }

  const std::byte* tail = p + nblocks * 4;
  std::uint32_t k1 = 0;
  switch (len & 3) {
    case 3:
      k1 ^= static_cast<std::uint32_t>(tail_byte(tail, 2)) << 16;
      [[fallthrough]];
    case 2:
      k1 ^= static_cast<std::uint32_t>(tail_byte(tail, 1)) << 8;
      [[fallthrough]];
    case 1:
      k1 ^= static_cast<std::uint32_t>(tail_byte(tail, 0));
      k1 *= c1;
      k1 = rotl32(k1, 15);
      k1 *= c2;
      h1 ^= k1;
  }

  h1 ^= static_cast<std::uint32_t>(len);
  return fmix32(h1);
}

std::uint64_t murmur3_64(std::span<const std::byte> data, std::uint32_t seed) {
  const std::byte* p = data.data();
  const std::size_t len = data.size();
  const std::size_t nblocks = len / 16;
  constexpr std::uint64_t c1 = 0x87c37b91114253d5ULL;
  constexpr std::uint64_t c2 = 0x4cf5ad432745937fULL;

  std::uint64_t h1 = seed;
  std::uint64_t h2 = seed;
  for (std::size_t i = 0; i < nblocks; ++i) {
    std::uint64_t k1 = load64(p + i * 16);
    std::uint64_t k2 = load64(p + i * 16 + 8);

    k1 *= c1;
    k1 = rotl64(k1, 31);
    k1 *= c2;
    h1 ^= k1;
    h1 = rotl64(h1, 27);
    h1 += h2;
    h1 = h1 * 5 + 0x52dce729;

    k2 *= c2;
    k2 = rotl64(k2, 33);
    k2 *= c1;
    h2 ^= k2;
    h2 = rotl64(h2, 31);
    h2 += h1;
    h2 = h2 * 5 + 0x38495ab5;
  }

  const std::byte* tail = p + nblocks * 16;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  switch (len & 15) {
    case 15: k2 ^= tail_byte(tail, 14) << 48; [[fallthrough]];
    case 14: k2 ^= tail_byte(tail, 13) << 40; [[fallthrough]];
    case 13: k2 ^= tail_byte(tail, 12) << 32; [[fallthrough]];
    case 12: k2 ^= tail_byte(tail, 11) << 24; [[fallthrough]];
    case 11: k2 ^= tail_byte(tail, 10) << 16; [[fallthrough]];
    case 10: k2 ^= tail_byte(tail, 9) << 8; [[fallthrough]];
    case 9:
      k2 ^= tail_byte(tail, 8);
      k2 *= c2;
      k2 = rotl64(k2, 33);
      k2 *= c1;
      h2 ^= k2;
      [[fallthrough]];
    case 8: k1 ^= tail_byte(tail, 7) << 56; [[fallthrough]];
    case 7: k1 ^= tail_byte(tail, 6) << 48; [[fallthrough]];
    case 6: k1 ^= tail_byte(tail, 5) << 40; [[fallthrough]];
    case 5: k1 ^= tail_byte(tail, 4) << 32; [[fallthrough]];
    case 4: k1 ^= tail_byte(tail, 3) << 24; [[fallthrough]];
    case 3: k1 ^= tail_byte(tail, 2) << 16; [[fallthrough]];
    case 2: k1 ^= tail_byte(tail, 1) << 8; [[fallthrough]];
    case 1:
      k1 ^= tail_byte(tail, 0);
      k1 *= c1;
      k1 = rotl64(k1, 31);
      k1 *= c2;
      h1 ^= k1;
  }

  h1 ^= len;
  h2 ^= len;
  h1 += h2;
  h2 += h1;
  h1 = fmix64(h1);
  h2 = fmix64(h2);
  h1 += h2;
  return h1;
}

}  // namespace dicupit
