#pragma once

#include <cstdint>
#include <random>

namespace dscp {

// SplitMix64 finalizer; the stable hash behind per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for trial `index` of an experiment driven by `master`.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

using Engine = std::mt19937_64;

// Uniform integer in [0, bound) by rejection on the raw 64-bit output, so the
// stream is identical across standard libraries.
inline std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Bernoulli(p) from 53 random bits.
inline bool bernoulli(Engine& rng, double p) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u < p;
}

}  // namespace dscp
