#pragma once

#include <cstdint>
#include <random>

namespace uqs {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 0x5eed'2009'0bad'cafeULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Generator for stream `stream` under `master`. Streams depend only on the pair,
/// never on the order in which they are requested, so work split across any
/// number of threads draws the same numbers.
inline Rng stream_rng(std::uint64_t master, std::uint64_t stream)
{
  std::uint64_t const a = mix64(master);
  std::uint64_t const b = mix64(a ^ mix64(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq       seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

// Uniform on (0, 1), never returning an endpoint.
inline double open_uniform(Rng &rng)
{
  while (true) {
    double const u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) { return u; }
  }
}

} // namespace uqs
