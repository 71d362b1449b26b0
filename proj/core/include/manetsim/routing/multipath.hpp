#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::routing {

// One forwarding option toward a destination. `last_hop` is the node adjacent
// to the destination on this path; together with `next_hop` it is the
// fingerprint used to keep stored paths link-disjoint.
struct PathEntry {
  NodeId next_hop = kNoNode;
  NodeId last_hop = kNoNode;
  std::uint32_t hop_count = 0;
  std::uint32_t dest_seq = 0;
  sim::SimTime expires_at{};
};

enum class PathAdd {
  installed,
  replaced_set,     // fresher sequence number flushed the old set
  refreshed,        // same next/last hop pair, lifetime extended
  rejected_stale,   // older sequence than the set (or below the floor)
  rejected_overlap, // shares a next or last hop with a stored path
  rejected_full,
};

const char* path_add_name(PathAdd r);

// Per-destination list of link-disjoint paths, all carrying the same
// destination sequence number. When invalidation empties a set the sequence
// floor rises past the dead epoch so the same stale advertisements cannot
// repopulate it; only a fresh discovery or a newer update can.
class MultipathTable {
 public:
  static constexpr std::uint32_t kInfiniteHops = 0xFFFFFFFFu;

  explicit MultipathTable(std::size_t max_paths) : max_paths_(max_paths) {}

  PathAdd try_add(NodeId dest, const PathEntry& cand, sim::SimTime now);

  // Usable = unexpired and at or above the sequence floor.
  std::vector<PathEntry> usable_paths(NodeId dest, sim::SimTime now) const;
  bool has_usable(NodeId dest, sim::SimTime now) const;
  std::optional<std::uint32_t> last_known_seq(NodeId dest, sim::SimTime now) const;

  // Hop count this node would advertise for dest: the worst usable path.
  std::uint32_t advertised_hops(NodeId dest, sim::SimTime now) const;

  std::uint32_t required_seq(NodeId dest) const;
  void bump_required(NodeId dest, std::uint32_t floor_seq);

  bool refresh_path(NodeId dest, NodeId next_hop, std::uint32_t dest_seq,
                    sim::SimTime expires_at);

  // Remove every path using `next_hop`; returns (dest, seq) per destination
  // that lost at least one path. Sets left empty get their floor bumped.
  std::vector<std::pair<NodeId, std::uint32_t>> invalidate_via(NodeId next_hop);
  bool invalidate_path(NodeId dest, NodeId next_hop);

  void prune(sim::SimTime now);

  std::vector<NodeId> destinations() const;
  std::size_t path_count(NodeId dest) const;
  std::size_t max_paths() const { return max_paths_; }

 private:
  struct RouteSet {
    std::uint32_t required_seq = 0;
    std::vector<PathEntry> paths;
  };

  void drop_expired(RouteSet& set, sim::SimTime now) const;

  std::size_t max_paths_;
  std::map<NodeId, RouteSet> sets_;
};

}  // namespace manet::routing
