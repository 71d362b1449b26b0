#include "manetsim/routing/common.hpp"

#include <algorithm>

namespace manet::routing {

void SeenCache::expire(sim::SimTime now) {
  const sim::SimTime cutoff = now - retention_;
  while (!order_.empty() && order_.front().first < cutoff) {
    auto it = stamps_.find(order_.front().second);
    // Only drop if the stamp was not refreshed since this order entry.
    if (it != stamps_.end() && it->second == order_.front().first) stamps_.erase(it);
    order_.pop_front();
  }
}

bool SeenCache::seen_or_insert(RreqId id, sim::SimTime now) {
  expire(now);
  auto it = stamps_.find(id);
  const bool present = it != stamps_.end();
  stamps_[id] = now;
  order_.emplace_back(now, id);
  return present;
}

bool SeenCache::contains(RreqId id, sim::SimTime now) const {
  auto it = stamps_.find(id);
  if (it == stamps_.end()) return false;
  return now - it->second <= retention_;
}

std::optional<Packet> PacketBuffer::push(Packet pkt) {
  queue_.push_back(std::move(pkt));
  if (queue_.size() > capacity_) {
    Packet evicted = std::move(queue_.front());
    queue_.pop_front();
    return evicted;
  }
  return std::nullopt;
}

std::vector<Packet> PacketBuffer::take_for(NodeId dest) {
  std::vector<Packet> out;
  std::deque<Packet> rest;
  for (auto& p : queue_) {
    if (p.kind == PacketKind::data && p.data().dst == dest)
      out.push_back(std::move(p));
    else
      rest.push_back(std::move(p));
  }
  queue_ = std::move(rest);
  return out;
}

std::vector<Packet> PacketBuffer::drain() {
  std::vector<Packet> out(queue_.begin(), queue_.end());
  queue_.clear();
  return out;
}

bool PacketBuffer::has_for(NodeId dest) const {
  return std::any_of(queue_.begin(), queue_.end(), [&](const Packet& p) {
    return p.kind == PacketKind::data && p.data().dst == dest;
  });
}

bool NeighborTracker::is_neighbor(NodeId neighbor, sim::SimTime now) const {
  auto it = last_heard_.find(neighbor);
  if (it == last_heard_.end()) return false;
  return now - it->second <= timeout_;
}

std::vector<NodeId> NeighborTracker::sweep(sim::SimTime now) {
  std::vector<NodeId> lost;
  for (auto it = last_heard_.begin(); it != last_heard_.end();) {
    if (now - it->second > timeout_) {
      lost.push_back(it->first);
      it = last_heard_.erase(it);
    } else {
      ++it;
    }
  }
  return lost;
}

std::vector<NodeId> NeighborTracker::live(sim::SimTime now) const {
  std::vector<NodeId> out;
  for (const auto& [id, t] : last_heard_)
    if (now - t <= timeout_) out.push_back(id);
  return out;
}

bool FloodGuard::allow(NodeId originator, sim::SimTime now) {
  auto [it, fresh] = buckets_.try_emplace(originator, Bucket{capacity_, now});
  Bucket& b = it->second;
  if (!fresh) {
    const double dt = (now - b.last).as_seconds();
    b.tokens = std::min(capacity_, b.tokens + refill_per_s_ * dt);
    b.last = now;
  }
  if (b.tokens >= 1.0) {
    b.tokens -= 1.0;
    return true;
  }
  return false;
}

}  // namespace manet::routing
