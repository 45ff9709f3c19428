#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace lightmote::detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Independent, reproducible generator per (seed, purpose, name) triple.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream,
                                   const std::string& name) {
  const std::uint64_t nh = fnv1a(name);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream, static_cast<std::uint32_t>(nh), static_cast<std::uint32_t>(nh >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace lightmote::detail
