#include "sbp/rng.hpp"

namespace sbp {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ull);
}

std::int64_t RngStream::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw Error("rng uniform: empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

RngStream rng_stream(std::uint64_t root_seed, std::string_view world, std::string_view entity,
                     std::string_view process, std::uint64_t iteration) {
  std::uint64_t key = root_seed;
  key = mix64(key ^ fnv1a64(world));
  key = mix64(key ^ fnv1a64(entity));
  key = mix64(key ^ fnv1a64(process));
  key = mix64(key ^ iteration);
  return RngStream(key);
}

}  // namespace sbp
