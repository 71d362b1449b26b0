#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>

#include "manetsim/routing/node.hpp"
#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::adversary {

enum class AttackKind : std::uint8_t { blackhole, flooder, sinkhole, jammer };

const char* attack_kind_name(AttackKind k);

/// Scenario-fixed misbehavior assignment for one node. A node carries at
/// most one profile; behavior switches on exactly at active_from and off
/// at active_until.
struct AttackProfile {
  AttackKind kind = AttackKind::blackhole;

  double flood_rate_per_s = 0.0;          // flooder
  NodeId flood_target = kPhantomDest;     // flooder
  double drop_fraction = 1.0;             // sinkhole
  std::uint32_t seq_inflation = 10000;    // blackhole
  std::size_t jam_region = 0;             // jammer: index into the channel's jam list
  std::optional<NodeId> masquerade_as;    // blackhole variant: forge this id in hop_list

  sim::SimTime active_from{};
  sim::SimTime active_until{sim::SimTime{0xFFFFFFFFFFFFFFFFull}};

  bool active_at(sim::SimTime t) const { return t >= active_from && t < active_until; }
};

/// Advertising skew for a sinkhole: shave one hop (floor 1), add one to the
/// sequence number, answer requests from cache eagerly, and drop attracted
/// data with the configured probability. Honest passthrough outside the
/// activation window.
class SinkholeOverrides : public routing::BehaviorOverrides {
 public:
  explicit SinkholeOverrides(const AttackProfile& profile) : profile_(profile) {}

  std::uint32_t advertised_hops(std::uint32_t honest, sim::SimTime now) override;
  std::uint32_t advertised_seq(std::uint32_t honest, sim::SimTime now) override;
  bool answer_from_cache_eagerly(sim::SimTime now) override;
  bool swallow_data(const routing::Packet& pkt, sim::SimTime now,
                    sim::RandomStream& rng) override;

 private:
  AttackProfile profile_;
};

/// Decorator giving an otherwise honest protocol stack one attack profile.
/// Outside the activation window every call passes through unchanged; a run
/// with zero profiles constructs no decorators at all, so the module's
/// existence cannot perturb clean runs.
class MaliciousNode : public routing::ProtocolNode {
 public:
  MaliciousNode(std::unique_ptr<routing::ProtocolNode> inner, AttackProfile profile);

  std::string_view protocol() const override { return inner_->protocol(); }
  void start(routing::Context& ctx) override;
  void receive(routing::Context& ctx, const routing::Packet& pkt, NodeId from) override;
  void originate(routing::Context& ctx, FlowId flow, std::uint32_t seq_in_flow,
                 NodeId dst, std::uint32_t payload_bytes) override;
  void on_watch_result(routing::Context& ctx, NodeId next_hop, std::uint64_t uid,
                       bool forwarded) override;
  void set_overrides(routing::BehaviorOverrides* o) override;

  bool has_valid_route(NodeId dest) const override;
  std::optional<std::uint32_t> route_hops(NodeId dest) const override;
  std::optional<NodeId> route_next_hop(NodeId dest) const override;

  const AttackProfile& profile() const { return profile_; }

 private:
  void blackhole_receive(routing::Context& ctx, const routing::Packet& pkt,
                         NodeId from);
  void forge_reply(routing::Context& ctx, const routing::RreqMsg& m, NodeId from);
  void note_seq(NodeId dest, std::uint32_t seq);
  void schedule_flood(routing::Context& ctx);
  void flood_once(routing::Context& ctx);

  std::unique_ptr<routing::ProtocolNode> inner_;
  AttackProfile profile_;
  std::unique_ptr<SinkholeOverrides> sink_overrides_;

  std::map<NodeId, std::uint32_t> best_seen_;
  std::uint32_t flood_counter_ = 0x80000000u;  // keep clear of honest request ids
  std::uint32_t flood_seq_ = 0;
};

}  // namespace manet::adversary
