#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Deterministic randomness helpers. std::mt19937_64 is fully specified by the
// standard; the distribution adaptors are not, so bounded draws and shuffles
// are implemented here to keep seeded results stable across toolchains.
namespace fairsched::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Engines for distinct streams of one experiment derive from (seed, stream).
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  return Engine(splitmix64(splitmix64(seed) ^ stream));
}

// Unbiased draw from {0, ..., n-1} by rejection.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = ~0ull - (~0ull % n + 1) % n;
  std::uint64_t x;
  do {
    x = eng();
  } while (x > limit);
  return x % n;
}

// Inclusive integer range draw.
inline std::int64_t uniform_range(Engine& eng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  uniform_below(eng, static_cast<std::uint64_t>(hi - lo) + 1));
}

// Fisher-Yates shuffle using uniform_below.
template <class T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(eng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace fairsched::rng
