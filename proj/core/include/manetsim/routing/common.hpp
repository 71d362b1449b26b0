#pragma once

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "manetsim/routing/packet.hpp"
#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::routing {

/// Duplicate filter over RREQ ids with bounded retention. Entries expire
/// after the retention window; the structure also serves the per-node
/// first-sight counting used for flood measurements.
class SeenCache {
 public:
  explicit SeenCache(sim::SimTime retention) : retention_(retention) {}

  /// True if the id was already present (and still fresh). Inserts or
  /// refreshes either way.
  bool seen_or_insert(RreqId id, sim::SimTime now);
  bool contains(RreqId id, sim::SimTime now) const;

 private:
  void expire(sim::SimTime now);

  sim::SimTime retention_;
  std::map<RreqId, sim::SimTime> stamps_;
  std::deque<std::pair<sim::SimTime, RreqId>> order_;
};

/// Bounded FIFO of data packets waiting for a route. Oldest packet is
/// evicted on overflow.
class PacketBuffer {
 public:
  explicit PacketBuffer(std::uint32_t capacity) : capacity_(capacity) {}

  /// Returns the evicted packet if insertion overflowed.
  std::optional<Packet> push(Packet pkt);
  /// Removes and returns all buffered packets for a destination, oldest
  /// first, preserving relative order of the rest.
  std::vector<Packet> take_for(NodeId dest);
  /// Removes and returns every buffered packet (used at teardown).
  std::vector<Packet> drain();

  std::size_t size() const { return queue_.size(); }
  bool has_for(NodeId dest) const;

 private:
  std::uint32_t capacity_;
  std::deque<Packet> queue_;
};

/// HELLO-driven neighbor liveness. Any reception from a neighbor counts
/// as proof of life; a neighbor is lost once nothing is heard for
/// loss_limit consecutive hello intervals.
class NeighborTracker {
 public:
  NeighborTracker(sim::SimTime hello_interval, std::uint32_t loss_limit)
      : timeout_(sim::SimTime{hello_interval.us * loss_limit}) {}

  void heard(NodeId neighbor, sim::SimTime now) { last_heard_[neighbor] = now; }
  bool is_neighbor(NodeId neighbor, sim::SimTime now) const;

  /// Removes and returns neighbors that have timed out, sorted by id.
  std::vector<NodeId> sweep(sim::SimTime now);

  /// Current live neighbors, sorted by id.
  std::vector<NodeId> live(sim::SimTime now) const;

 private:
  sim::SimTime timeout_;
  std::map<NodeId, sim::SimTime> last_heard_;
};

/// Per-originator token bucket limiting how many distinct route requests
/// a node will forward on an originator's behalf. Capacity B, refill r
/// tokens per second: forwards in any window [t0, t1] are bounded by
/// B + r * (t1 - t0).
class FloodGuard {
 public:
  FloodGuard(double capacity, double refill_per_s)
      : capacity_(capacity), refill_per_s_(refill_per_s) {}

  /// Consumes one token for the originator if available.
  bool allow(NodeId originator, sim::SimTime now);

 private:
  struct Bucket {
    double tokens = 0.0;
    sim::SimTime last{};
  };
  double capacity_;
  double refill_per_s_;
  std::map<NodeId, Bucket> buckets_;
};

}  // namespace manet::routing
