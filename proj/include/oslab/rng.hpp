#pragma once

#include <cstdint>

namespace oslab {

// Counter-seeded SplitMix64 stream. Stream `k` of seed `s` starts from
// mix(s + mix(k + 1)), so every path owns an independent, reproducible
// sequence and parallel sampling needs no shared state. Normals come from
// the Box-Muller transform on 53-bit uniforms in (0, 1).
class PathStream {
 public:
  PathStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_uniform();
  double next_normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace oslab
