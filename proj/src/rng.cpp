#include "oslab/rng.hpp"

#include <cmath>
#include <numbers>

namespace oslab {

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix64_mix(seed + splitmix64_mix(stream + 1))) {}

std::uint64_t PathStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64_mix(state_);
}

double PathStream::next_uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PathStream::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(next_uniform()));
  const double phi = 2.0 * std::numbers::pi * next_uniform();
  cached_normal_ = r * std::sin(phi);
  has_cached_ = true;
  return r * std::cos(phi);
}

}  // namespace oslab
