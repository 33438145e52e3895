#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace swperc {

/// SplitMix64 finalizer. Used to decorrelate seeds and stream ids before
/// they reach the engine's seed sequence.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Combines a base seed with an arbitrary number of integer tags into one
/// 64-bit seed. Order-sensitive.
template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t seed, Tags... tags) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(tags) + 0x9e3779b97f4a7c15ULL))), ...);
  return h;
}

/// A reproducible random stream keyed by (seed, stream_id).
///
/// Backed by a 64-bit Mersenne Twister (period 2^19937 - 1) whose state is
/// filled from a seed sequence built from the mixed seed and stream id, so
/// that trial k of an experiment always sees the same draws regardless of
/// which worker runs it. Satisfies UniformRandomBitGenerator, so it can be
/// handed to any <random> distribution.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  /// True with probability q. q <= 0 never fires, q >= 1 always fires.
  bool bernoulli(double q) { return uniform() < q; }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace swperc
