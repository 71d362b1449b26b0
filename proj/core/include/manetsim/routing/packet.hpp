#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "manetsim/crypto/multisig.hpp"
#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::routing {

enum class PacketKind : std::uint8_t {
  rreq = 1,
  rrep = 2,
  rerr = 3,
  hello = 4,
  update = 5,
  data = 6,
};

const char* packet_kind_name(PacketKind k);

/// Route request identity: originator plus a per-originator counter.
/// Duplicate suppression and flood counting key on this.
struct RreqId {
  NodeId origin = kNoNode;
  std::uint32_t counter = 0;
  auto operator<=>(const RreqId&) const = default;
};

struct RreqMsg {
  RreqId id;
  std::uint32_t origin_seq = 0;
  NodeId dest = kNoNode;
  std::uint32_t dest_seq_known = 0;
  bool dest_seq_valid = false;
  std::uint32_t hop_count = 0;  // mutable in flight
  std::uint32_t ttl = 0;        // mutable in flight
};

struct RrepMsg {
  NodeId origin = kNoNode;  // requester the reply travels back to
  NodeId dest = kNoNode;    // destination the route leads to
  std::uint32_t dest_seq = 0;
  std::uint32_t hop_count = 0;  // mutable in flight
  sim::SimTime lifetime{};
};

struct RerrMsg {
  struct Unreachable {
    NodeId dest = kNoNode;
    std::uint32_t dest_seq = 0;
  };
  std::vector<Unreachable> unreachable;
};

/// Trust report piggybacked on a HELLO beacon.
struct TrustGossip {
  std::uint8_t kind = 0;  // 0 reputation, 1 recommendation
  NodeId about = kNoNode;
  double score = 0.0;
};

struct HelloMsg {
  std::uint32_t seq = 0;
  std::vector<TrustGossip> gossip;
};

/// Proactive single-hop route refresh (multipath maintenance tick).
struct UpdateMsg {
  NodeId issuer = kNoNode;
  std::uint32_t counter = 0;  // per-issuer, identifies the update
  NodeId about_dest = kNoNode;
  std::uint32_t dest_seq = 0;
  std::uint32_t advertised_hops = 0;
  sim::SimTime issued_at{};
};

struct DataMsg {
  FlowId flow = 0;
  std::uint32_t seq_in_flow = 0;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  std::uint32_t payload_bytes = 0;
  sim::SimTime originated_at{};
  std::uint32_t ttl = 0;  // mutable in flight
};

/// Authentication extension carried by signed control packets: the hop
/// list records the claimed forwarding path; the chain signs the packet's
/// canonical bytes (immutable fields only) plus the chain prefix.
struct SignedExt {
  std::vector<NodeId> hop_list;
  crypto::MultiSig chain;
};

struct Packet {
  PacketKind kind = PacketKind::data;
  std::uint64_t uid = 0;  // engine-unique per logical packet
  std::variant<RreqMsg, RrepMsg, RerrMsg, HelloMsg, UpdateMsg, DataMsg> body;
  std::optional<SignedExt> signed_ext;

  const RreqMsg& rreq() const { return std::get<RreqMsg>(body); }
  const RrepMsg& rrep() const { return std::get<RrepMsg>(body); }
  const RerrMsg& rerr() const { return std::get<RerrMsg>(body); }
  const HelloMsg& hello() const { return std::get<HelloMsg>(body); }
  const UpdateMsg& update() const { return std::get<UpdateMsg>(body); }
  const DataMsg& data() const { return std::get<DataMsg>(body); }
  RreqMsg& rreq() { return std::get<RreqMsg>(body); }
  RrepMsg& rrep() { return std::get<RrepMsg>(body); }
  RerrMsg& rerr() { return std::get<RerrMsg>(body); }
  HelloMsg& hello() { return std::get<HelloMsg>(body); }
  UpdateMsg& update() { return std::get<UpdateMsg>(body); }
  DataMsg& data() { return std::get<DataMsg>(body); }
};

}  // namespace manet::routing
