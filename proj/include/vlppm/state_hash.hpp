#pragma once

#include <cstdint>
#include <string_view>

namespace vlppm {

// Model state digests are XOR-sums of mixed per-entry tuples, so they can be
// maintained incrementally (XOR out the old tuple, XOR in the new one) and do
// not depend on container iteration order.

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ mix64(v));
}

inline std::uint64_t hash_bytes(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001B3ull;
  return mix64(h ^ s.size());
}

}  // namespace vlppm
