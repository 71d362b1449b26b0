#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "manetsim/routing/context.hpp"
#include "manetsim/routing/packet.hpp"
#include "manetsim/types.hpp"

namespace manet::routing {

/// Hooks a compromised-but-participating node uses to skew the values an
/// otherwise honest protocol stack advertises. Consulted at the points
/// where a node originates claims about routes it offers. Defaults are
/// identity (honest).
class BehaviorOverrides {
 public:
  virtual ~BehaviorOverrides() = default;
  /// Hop count this node advertises when offering a route.
  virtual std::uint32_t advertised_hops(std::uint32_t honest, sim::SimTime) {
    return honest;
  }
  /// Destination sequence number this node advertises.
  virtual std::uint32_t advertised_seq(std::uint32_t honest, sim::SimTime) {
    return honest;
  }
  /// Whether to answer a RREQ from route cache even when the cached
  /// entry is not fresh enough to answer honestly.
  virtual bool answer_from_cache_eagerly(sim::SimTime) { return false; }
  /// Decides the fate of one data packet this node should forward.
  virtual bool swallow_data(const Packet&, sim::SimTime, sim::RandomStream&) {
    return false;
  }
};

/// A protocol stack instance living on one node.
class ProtocolNode {
 public:
  virtual ~ProtocolNode() = default;

  virtual std::string_view protocol() const = 0;

  /// Called once before the clock starts; schedule periodic work here.
  virtual void start(Context& ctx) = 0;

  /// One packet arrived from a direct neighbor.
  virtual void receive(Context& ctx, const Packet& pkt, NodeId from) = 0;

  /// Application payload handed down at this node, destined for dst.
  virtual void originate(Context& ctx, FlowId flow, std::uint32_t seq_in_flow,
                         NodeId dst, std::uint32_t payload_bytes) = 0;

  /// Watchdog verdict for a previously watched forwarding.
  virtual void on_watch_result(Context& ctx, NodeId next_hop, std::uint64_t uid,
                               bool forwarded) {
    (void)ctx;
    (void)next_hop;
    (void)uid;
    (void)forwarded;
  }

  /// Installs advertising overrides (adversary use). Honest nodes keep
  /// the default identity behavior.
  virtual void set_overrides(BehaviorOverrides* o) { (void)o; }

  // Read-only introspection for tests and trace snapshots.
  virtual bool has_valid_route(NodeId dest) const = 0;
  virtual std::optional<std::uint32_t> route_hops(NodeId dest) const = 0;
  virtual std::optional<NodeId> route_next_hop(NodeId dest) const = 0;
};

}  // namespace manet::routing
