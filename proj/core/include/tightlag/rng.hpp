#pragma once

#include <cstdint>
#include <random>

namespace tightlag {

/// Mixes a 64-bit value into a well-distributed seed (splitmix64 finalizer).
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded random stream with platform-independent double conversion.
///
/// mt19937_64 output is specified bit-for-bit by the standard, and the
/// uniform doubles below are derived from raw 64-bit draws, so a fixed seed
/// yields an identical stream on every platform.  Parallel consumers derive
/// independent streams via derived(worker_index).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)), seed_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal (Box-Muller; consumes two draws).
  double normal();

  std::uint64_t seed() const { return seed_; }

  /// Stream for worker `index`, decorrelated from this stream's seed.
  RngStream derived(std::uint64_t index) const {
    return RngStream(splitmix64(seed_ + 0x9e3779b97f4a7c15ull * (index + 1)));
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace tightlag
