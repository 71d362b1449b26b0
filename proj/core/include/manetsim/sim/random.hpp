#pragma once

#include <cstdint>
#include <string_view>

namespace manet::sim {

/// Counter-based deterministic random stream.
///
/// Output i is mix64(key + (i+1) * GAMMA) where mix64 is the SplitMix64
/// finalizer and GAMMA = 0x9E3779B97F4A7C15. Streams are pure functions
/// of (master_seed, label): forking never consumes state from the parent,
/// so the set of streams a run creates, and the order it creates them in,
/// cannot perturb any other stream. The full derivation is documented in
/// docs/determinism.md and must not be changed without updating the replay
/// tests; platform RNGs (std::mt19937 et al.) are deliberately not used
/// anywhere output-affecting.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();

  /// Uniform in [0,1) with 53 random bits.
  double next_double();

  /// Uniform in [lo, hi). Requires lo <= hi; returns lo when degenerate.
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n), unbiased (rejection sampling). n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Exponential with the given rate (events per unit). rate > 0.
  double exponential(double rate);

  /// Number of raw 64-bit draws consumed so far.
  std::uint64_t draws() const { return counter_; }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derives the key for a named child stream. Label hashing is FNV-1a 64,
/// then both halves are finalized through mix64 so labels and seeds that
/// differ in few bits land far apart.
std::uint64_t stream_key(std::uint64_t master_seed, std::string_view label);

inline RandomStream fork_stream(std::uint64_t master_seed, std::string_view label) {
  return RandomStream(stream_key(master_seed, label));
}

}  // namespace manet::sim
