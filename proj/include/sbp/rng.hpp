#pragma once

#include <cstdint>
#include <string_view>

#include "sbp/types.hpp"

namespace sbp {

// Deterministic counter-based random stream, keyed by
// (root seed, world, entity, process, iteration). The algorithm is fixed so
// independent implementations can reproduce runs:
//
//   fnv1a64(bytes): h = 0xcbf29ce484222325; per byte: h ^= b; h *= 0x100000001b3
//   mix(x): SplitMix64 finalizer
//           x ^= x >> 30; x *= 0xbf58476d1ce4e5b9;
//           x ^= x >> 27; x *= 0x94d049bb133111eb; x ^= x >> 31
//   key  = mix(mix(mix(mix(seed ^ fnv1a64(world)) ^ fnv1a64(entity))
//              ^ fnv1a64(process)) ^ iteration)
//   draw i (0-based) = mix(key + (i + 1) * 0x9e3779b97f4a7c15)
//
// uniform(a, b) maps a draw into [a, b] via `a + draw % (b - a + 1)`.
class RngStream {
public:
  RngStream() = default;
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  // Uniform in [lo, hi], inclusive; requires lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

  std::uint64_t draws() const { return counter_; }
  void skip_to(std::uint64_t draws) { counter_ = draws; }
  std::uint64_t key() const { return key_; }

private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t mix64(std::uint64_t x);

RngStream rng_stream(std::uint64_t root_seed, std::string_view world, std::string_view entity,
                     std::string_view process, std::uint64_t iteration);

}  // namespace sbp
