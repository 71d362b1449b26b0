#pragma once

#include <map>
#include <set>

#include "manetsim/routing/common.hpp"
#include "manetsim/routing/config.hpp"
#include "manetsim/routing/node.hpp"

namespace manet::routing {

/// Single-path route entry. Invalid entries are kept for their sequence
/// number, which is bumped on invalidation so stale information cannot
/// reinstall the dead route.
struct RouteEntry {
  NodeId next_hop = kNoNode;
  std::uint32_t dest_seq = 0;
  bool seq_valid = false;
  std::uint32_t hop_count = 0;
  sim::SimTime expires_at{};
  bool valid = false;
  std::set<NodeId> precursors;
};

/// Baseline reactive distance-vector protocol: flooding route discovery,
/// destination-sequence freshness, HELLO liveness, RERR propagation.
/// Deliberately ships the classic vulnerabilities (no authentication, no
/// rate limiting, trusts any advertised sequence number); the secured
/// protocol is measured against it.
class AodvNode : public ProtocolNode {
 public:
  explicit AodvNode(const ProtocolConfig& cfg);

  std::string_view protocol() const override { return "aodv"; }
  void start(Context& ctx) override;
  void receive(Context& ctx, const Packet& pkt, NodeId from) override;
  void originate(Context& ctx, FlowId flow, std::uint32_t seq_in_flow, NodeId dst,
                 std::uint32_t payload_bytes) override;
  void set_overrides(BehaviorOverrides* o) override { overrides_ = o; }

  bool has_valid_route(NodeId dest) const override;
  std::optional<std::uint32_t> route_hops(NodeId dest) const override;
  std::optional<NodeId> route_next_hop(NodeId dest) const override;

  const std::map<NodeId, RouteEntry>& table() const { return table_; }
  const NeighborTracker& neighbors() const { return neighbors_; }

 protected:
  // Shared with the hello/beacon machinery; HSRP piggybacks gossip here.
  virtual void fill_hello(Context& ctx, HelloMsg& msg);
  virtual void on_hello(Context& ctx, const Packet& pkt, NodeId from);

 private:
  struct Discovery {
    std::uint32_t retries_left = 0;
    std::uint32_t attempt = 0;
    sim::EventHandle timer = 0;
  };

  void hello_tick(Context& ctx);
  void handle_rreq(Context& ctx, const Packet& pkt, NodeId from);
  void handle_rrep(Context& ctx, const Packet& pkt, NodeId from);
  void handle_rerr(Context& ctx, const Packet& pkt, NodeId from);
  void handle_data(Context& ctx, Packet pkt, NodeId from);
  void forward_data(Context& ctx, Packet pkt);
  void start_discovery(Context& ctx, NodeId dest);
  void send_rreq(Context& ctx, NodeId dest);
  void discovery_timeout(Context& ctx, NodeId dest);
  void link_break(Context& ctx, const std::vector<NodeId>& lost);
  void send_rerr(Context& ctx, const std::vector<RerrMsg::Unreachable>& lost);
  void flush_buffer(Context& ctx, NodeId dest);

  bool route_usable(const RouteEntry& e, sim::SimTime now) const {
    return e.valid && e.expires_at > now;
  }
  RouteEntry* usable_route(NodeId dest, sim::SimTime now);
  bool install_route(Context& ctx, NodeId dest, NodeId next_hop, std::uint32_t hops,
                     std::uint32_t seq, bool seq_valid, sim::SimTime lifetime);

  const ProtocolConfig& cfg_;
  NodeId self_ = kNoNode;
  BehaviorOverrides* overrides_ = nullptr;

  std::map<NodeId, RouteEntry> table_;
  SeenCache seen_;
  PacketBuffer buffer_;
  NeighborTracker neighbors_;
  std::map<NodeId, Discovery> discoveries_;

  std::uint32_t own_seq_ = 0;
  std::uint32_t rreq_counter_ = 0;
  std::uint32_t hello_seq_ = 0;
};

}  // namespace manet::routing
