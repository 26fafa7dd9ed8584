#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stbox {

// FNV-1a, used to derive named substreams from a single user seed.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Deterministic substream engine for (seed, name, index).
inline std::mt19937_64 substream(std::uint64_t seed, std::string_view name,
                                 std::uint64_t index = 0) {
  const std::uint64_t h = fnv1a64(name, mix64(seed));
  return std::mt19937_64(mix64(h ^ mix64(index)));
}

/// Fisher-Yates shuffle with an explicit bounded draw, so the permutation
/// depends only on the engine's bit stream.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t j = rng() % i;
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace stbox
