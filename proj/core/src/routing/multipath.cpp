#include "manetsim/routing/multipath.hpp"

#include <algorithm>

namespace manet::routing {

const char* path_add_name(PathAdd r) {
  switch (r) {
    case PathAdd::installed: return "installed";
    case PathAdd::replaced_set: return "replaced_set";
    case PathAdd::refreshed: return "refreshed";
    case PathAdd::rejected_stale: return "rejected_stale";
    case PathAdd::rejected_overlap: return "rejected_overlap";
    case PathAdd::rejected_full: return "rejected_full";
  }
  return "?";
}

void MultipathTable::drop_expired(RouteSet& set, sim::SimTime now) const {
  std::erase_if(set.paths, [&](const PathEntry& p) { return p.expires_at <= now; });
}

PathAdd MultipathTable::try_add(NodeId dest, const PathEntry& cand, sim::SimTime now) {
  RouteSet& set = sets_[dest];
  if (cand.dest_seq < set.required_seq) return PathAdd::rejected_stale;
  drop_expired(set, now);

  if (set.paths.empty()) {
    set.paths.push_back(cand);
    return PathAdd::installed;
  }

  const std::uint32_t cur_seq = set.paths.front().dest_seq;
  if (cand.dest_seq > cur_seq) {
    set.paths.assign(1, cand);
    return PathAdd::replaced_set;
  }
  if (cand.dest_seq < cur_seq) return PathAdd::rejected_stale;

  for (PathEntry& p : set.paths) {
    if (p.next_hop == cand.next_hop && p.last_hop == cand.last_hop) {
      p.hop_count = std::min(p.hop_count, cand.hop_count);
      p.expires_at = std::max(p.expires_at, cand.expires_at);
      return PathAdd::refreshed;
    }
    if (p.next_hop == cand.next_hop || p.last_hop == cand.last_hop)
      return PathAdd::rejected_overlap;
  }
  if (set.paths.size() >= max_paths_) return PathAdd::rejected_full;
  set.paths.push_back(cand);
  return PathAdd::installed;
}

std::vector<PathEntry> MultipathTable::usable_paths(NodeId dest, sim::SimTime now) const {
  std::vector<PathEntry> out;
  auto it = sets_.find(dest);
  if (it == sets_.end()) return out;
  for (const PathEntry& p : it->second.paths) {
    if (p.expires_at > now && p.dest_seq >= it->second.required_seq) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const PathEntry& a, const PathEntry& b) {
    if (a.hop_count != b.hop_count) return a.hop_count < b.hop_count;
    return a.next_hop < b.next_hop;
  });
  return out;
}

bool MultipathTable::has_usable(NodeId dest, sim::SimTime now) const {
  auto it = sets_.find(dest);
  if (it == sets_.end()) return false;
  for (const PathEntry& p : it->second.paths) {
    if (p.expires_at > now && p.dest_seq >= it->second.required_seq) return true;
  }
  return false;
}

std::optional<std::uint32_t> MultipathTable::last_known_seq(NodeId dest,
                                                            sim::SimTime now) const {
  std::optional<std::uint32_t> best;
  auto it = sets_.find(dest);
  if (it == sets_.end()) return best;
  for (const PathEntry& p : it->second.paths) {
    if (p.expires_at > now && p.dest_seq >= it->second.required_seq) {
      if (!best || p.dest_seq > *best) best = p.dest_seq;
    }
  }
  return best;
}

std::uint32_t MultipathTable::advertised_hops(NodeId dest, sim::SimTime now) const {
  std::uint32_t worst = 0;
  bool any = false;
  auto it = sets_.find(dest);
  if (it != sets_.end()) {
    for (const PathEntry& p : it->second.paths) {
      if (p.expires_at > now && p.dest_seq >= it->second.required_seq) {
        worst = std::max(worst, p.hop_count);
        any = true;
      }
    }
  }
  return any ? worst : kInfiniteHops;
}

std::uint32_t MultipathTable::required_seq(NodeId dest) const {
  auto it = sets_.find(dest);
  return it == sets_.end() ? 0 : it->second.required_seq;
}

void MultipathTable::bump_required(NodeId dest, std::uint32_t floor_seq) {
  RouteSet& set = sets_[dest];
  set.required_seq = std::max(set.required_seq, floor_seq);
  std::erase_if(set.paths,
                [&](const PathEntry& p) { return p.dest_seq < set.required_seq; });
}

bool MultipathTable::refresh_path(NodeId dest, NodeId next_hop, std::uint32_t dest_seq,
                                  sim::SimTime expires_at) {
  auto it = sets_.find(dest);
  if (it == sets_.end()) return false;
  for (PathEntry& p : it->second.paths) {
    if (p.next_hop == next_hop && p.dest_seq == dest_seq) {
      p.expires_at = std::max(p.expires_at, expires_at);
      return true;
    }
  }
  return false;
}

std::vector<std::pair<NodeId, std::uint32_t>> MultipathTable::invalidate_via(
    NodeId next_hop) {
  std::vector<std::pair<NodeId, std::uint32_t>> affected;
  for (auto& [dest, set] : sets_) {
    std::uint32_t max_seq = 0;
    for (const PathEntry& p : set.paths) max_seq = std::max(max_seq, p.dest_seq);
    const std::size_t before = set.paths.size();
    std::erase_if(set.paths, [&](const PathEntry& p) { return p.next_hop == next_hop; });
    if (set.paths.size() == before) continue;
    affected.emplace_back(dest, max_seq);
    if (set.paths.empty())
      set.required_seq = std::max(set.required_seq, max_seq + 1);
  }
  return affected;
}

bool MultipathTable::invalidate_path(NodeId dest, NodeId next_hop) {
  auto it = sets_.find(dest);
  if (it == sets_.end()) return false;
  RouteSet& set = it->second;
  std::uint32_t max_seq = 0;
  for (const PathEntry& p : set.paths) max_seq = std::max(max_seq, p.dest_seq);
  const std::size_t before = set.paths.size();
  std::erase_if(set.paths, [&](const PathEntry& p) { return p.next_hop == next_hop; });
  if (set.paths.size() == before) return false;
  if (set.paths.empty()) set.required_seq = std::max(set.required_seq, max_seq + 1);
  return true;
}

void MultipathTable::prune(sim::SimTime now) {
  for (auto& [dest, set] : sets_) drop_expired(set, now);
}

std::vector<NodeId> MultipathTable::destinations() const {
  std::vector<NodeId> out;
  out.reserve(sets_.size());
  for (const auto& [dest, set] : sets_) {
    if (!set.paths.empty()) out.push_back(dest);
  }
  return out;
}

std::size_t MultipathTable::path_count(NodeId dest) const {
  auto it = sets_.find(dest);
  return it == sets_.end() ? 0 : it->second.paths.size();
}

}  // namespace manet::routing
