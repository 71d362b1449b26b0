#pragma once

// Independent reference implementations used to check the production code.
// Everything here is written straight from the definitions, favoring the
// obvious quadratic/loop form over anything shared with the library, so a
// bug in the optimized code cannot hide in its own mirror.

#include <cstdint>
#include <limits>
#include <queue>
#include <string_view>
#include <vector>

namespace oracle {

// --- Tiny Encryption Algorithm, literal transcription -------------------

struct TeaState {
  std::uint32_t v0, v1;
};

inline TeaState tea_encrypt(TeaState v, std::uint32_t k0, std::uint32_t k1,
                            std::uint32_t k2, std::uint32_t k3) {
  std::uint32_t sum = 0;
  for (int i = 0; i < 32; ++i) {
    sum += 0x9E3779B9u;
    v.v0 += ((v.v1 << 4) + k0) ^ (v.v1 + sum) ^ ((v.v1 >> 5) + k1);
    v.v1 += ((v.v0 << 4) + k2) ^ (v.v0 + sum) ^ ((v.v0 >> 5) + k3);
  }
  return v;
}

inline TeaState tea_decrypt(TeaState v, std::uint32_t k0, std::uint32_t k1,
                            std::uint32_t k2, std::uint32_t k3) {
  std::uint32_t sum = 0xC6EF3720u;
  for (int i = 0; i < 32; ++i) {
    v.v1 -= ((v.v0 << 4) + k2) ^ (v.v0 + sum) ^ ((v.v0 >> 5) + k3);
    v.v0 -= ((v.v1 << 4) + k0) ^ (v.v1 + sum) ^ ((v.v1 >> 5) + k1);
    sum -= 0x9E3779B9u;
  }
  return v;
}

// --- Counter-stream reference -------------------------------------------

// SplitMix64 finalizer, written out again on purpose.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_out(std::uint64_t key, std::uint64_t i) {
  return mix64(key + (i + 1) * 0x9E3779B97F4A7C15ull);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint64_t stream_key(std::uint64_t master_seed, std::string_view label) {
  return mix64(master_seed ^ mix64(fnv1a64(label) ^ 0x9E3779B97F4A7C15ull));
}

// --- Geometry ------------------------------------------------------------

struct Pt {
  double x, y;
};

// Quadratic all-pairs disk adjacency, boundary inclusive.
inline std::vector<std::vector<std::uint32_t>> adjacency(const std::vector<Pt>& pts,
                                                         double range) {
  const std::size_t n = pts.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      if (dx * dx + dy * dy <= range * range)
        adj[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return adj;
}

// BFS hop distances from src; unreachable nodes get UINT32_MAX.
inline std::vector<std::uint32_t> bfs_hops(
    const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t src) {
  std::vector<std::uint32_t> dist(adj.size(),
                                  std::numeric_limits<std::uint32_t>::max());
  std::queue<std::uint32_t> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const std::uint32_t u = q.front();
    q.pop();
    for (std::uint32_t v : adj[u]) {
      if (dist[v] != std::numeric_limits<std::uint32_t>::max()) continue;
      dist[v] = dist[u] + 1;
      q.push(v);
    }
  }
  return dist;
}

inline bool connected(const std::vector<std::vector<std::uint32_t>>& adj) {
  if (adj.empty()) return true;
  const std::vector<std::uint32_t> d = bfs_hops(adj, 0);
  for (std::uint32_t v : d)
    if (v == std::numeric_limits<std::uint32_t>::max()) return false;
  return true;
}

// --- Sliding window ------------------------------------------------------

// Count of timestamps (sorted or not) inside the closed window
// [now - window, now].
inline std::size_t window_count(const std::vector<std::uint64_t>& stamps_us,
                                std::uint64_t now_us, std::uint64_t window_us) {
  const std::uint64_t lo = now_us >= window_us ? now_us - window_us : 0;
  std::size_t n = 0;
  for (std::uint64_t t : stamps_us)
    if (t >= lo && t <= now_us) ++n;
  return n;
}

}  // namespace oracle
