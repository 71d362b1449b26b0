#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "manetsim/routing/common.hpp"
#include "manetsim/routing/config.hpp"
#include "manetsim/routing/context.hpp"
#include "manetsim/routing/multipath.hpp"
#include "manetsim/routing/node.hpp"
#include "manetsim/routing/packet.hpp"
#include "manetsim/trust/trust.hpp"

namespace manet::routing {

/// Sanity check on an incoming route reply, applied before installing the
/// offered path. A reply about a destination we already track is implausible
/// when its sequence number jumps past the last-known value by more than
/// seq_jump_max. A reply about an unknown destination is taken on faith,
/// except that a wire hop count of 0 must come from the destination itself
/// and a hop count of 1 must come from a beacon-confirmed neighbor.
bool rrep_plausible(std::optional<std::uint32_t> last_known, std::uint32_t rrep_seq,
                    std::uint32_t wire_hops, bool from_is_neighbor, bool from_is_dest,
                    std::uint32_t seq_jump_max);

/// Hybrid secure routing node: reactive discovery whose control packets
/// carry ordered signature chains, proactive multipath maintenance after
/// installation, and trust-gated forwarding. Incoming signed control runs a
/// fixed pipeline: chain verification, per-originator flood limiting for
/// route requests, reply plausibility checking, then AODV-equivalent
/// handling extended with link-disjoint path accumulation.
class HsrpNode : public ProtocolNode {
 public:
  explicit HsrpNode(const ProtocolConfig& cfg);

  std::string_view protocol() const override { return "hsrp"; }

  void start(Context& ctx) override;
  void receive(Context& ctx, const Packet& pkt, NodeId from) override;
  void originate(Context& ctx, FlowId flow, std::uint32_t seq_in_flow, NodeId dst,
                 std::uint32_t payload_bytes) override;
  void on_watch_result(Context& ctx, NodeId next_hop, std::uint64_t uid,
                       bool forwarded) override;
  void set_overrides(BehaviorOverrides* o) override { overrides_ = o; }

  bool has_valid_route(NodeId dest) const override;
  std::optional<std::uint32_t> route_hops(NodeId dest) const override;
  std::optional<NodeId> route_next_hop(NodeId dest) const override;

  const MultipathTable& table() const { return table_; }
  /// Valid once start() has run (the table is owned by the node's id).
  const trust::TrustTable& trust() const { return *trust_; }
  const NeighborTracker& neighbors() const { return neighbors_; }

 private:
  struct Discovery {
    std::uint32_t retries_left = 0;
    std::uint32_t attempt = 0;
  };
  struct ReplyMemo {
    std::uint32_t seq = 0;
    std::uint32_t replies = 0;
    sim::SimTime at{};
  };

  enum class SigCheck { ok, unsigned_pkt, malformed, bad_chain };
  struct SigResult {
    SigCheck check = SigCheck::ok;
    std::size_t at_index = 0;
  };

  void hello_tick(Context& ctx);
  void proactive_tick(Context& ctx);
  void recommendation_tick(Context& ctx);

  SigResult verify_packet(Context& ctx, const Packet& pkt, NodeId from) const;
  void sign_origin(Context& ctx, Packet& pkt) const;
  void sign_forward(Context& ctx, Packet& pkt) const;

  void handle_rreq(Context& ctx, const Packet& pkt, NodeId from);
  void handle_rrep(Context& ctx, const Packet& pkt, NodeId from);
  void handle_update(Context& ctx, const Packet& pkt, NodeId from);
  void handle_rerr(Context& ctx, const Packet& pkt, NodeId from);
  void handle_hello(Context& ctx, const Packet& pkt, NodeId from);
  void handle_data(Context& ctx, Packet pkt, NodeId from);
  void forward_data(Context& ctx, Packet pkt);

  void reply_as_destination(Context& ctx, const RreqMsg& m, NodeId from,
                            bool first_copy);
  std::optional<PathEntry> trust_gate(Context& ctx, NodeId dest,
                                      const std::vector<PathEntry>& paths);
  void start_discovery(Context& ctx, NodeId dest);
  void send_rreq(Context& ctx, NodeId dest);
  void discovery_timeout(Context& ctx, NodeId dest);
  void flush_buffer(Context& ctx, NodeId dest);
  void link_loss(Context& ctx, NodeId neighbor);
  void send_rerr(Context& ctx, const std::vector<RerrMsg::Unreachable>& lost);

  /// One Failure interaction; optionally queues a zero reputation report
  /// for neighbors (signature violations only).
  void penalize(Context& ctx, NodeId offender, bool gossip_zero);
  void note_class_change(Context& ctx, NodeId peer, trust::TrustClass before);

  const ProtocolConfig& cfg_;
  NodeId self_ = kNoNode;
  BehaviorOverrides* overrides_;

  MultipathTable table_;
  SeenCache seen_;
  SeenCache rate_limited_;
  PacketBuffer buffer_;
  NeighborTracker neighbors_;
  std::optional<trust::TrustTable> trust_;
  FloodGuard guard_;
  std::map<NodeId, trust::LinkQuality> links_;
  std::map<NodeId, Discovery> discoveries_;
  std::map<RreqId, ReplyMemo> reply_memos_;
  std::vector<TrustGossip> outbox_;

  std::uint32_t own_seq_ = 0;
  std::uint32_t rreq_counter_ = 0;
  std::uint32_t update_counter_ = 0;
  std::uint32_t hello_seq_ = 0;
  sim::SimTime last_time_{};
};

}  // namespace manet::routing
