#include "manetsim/sim/random.hpp"

#include <cassert>
#include <cmath>

namespace manet::sim {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (!(lo < hi)) return lo;
  return lo + (hi - lo) * next_double();
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  assert(n > 0);
  if (n == 1) return 0;
  // Rejection sampling over the largest multiple of n below 2^64.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x < limit) return x % n;
  }
}

double RandomStream::exponential(double rate) {
  assert(rate > 0.0);
  // -log1p(-u) is exact near u = 0 where -log(1-u) loses precision.
  return -std::log1p(-next_double()) / rate;
}

std::uint64_t stream_key(std::uint64_t master_seed, std::string_view label) {
  return mix64(master_seed ^ mix64(fnv1a64(label) ^ kGamma));
}

}  // namespace manet::sim
