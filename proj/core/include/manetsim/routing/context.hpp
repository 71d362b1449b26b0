#pragma once

#include <functional>

#include "manetsim/crypto/multisig.hpp"
#include "manetsim/crypto/signature.hpp"
#include "manetsim/metrics/metrics.hpp"
#include "manetsim/metrics/trace.hpp"
#include "manetsim/routing/config.hpp"
#include "manetsim/routing/packet.hpp"
#include "manetsim/sim/event_queue.hpp"
#include "manetsim/sim/random.hpp"
#include "manetsim/sim/time.hpp"

namespace manet::routing {

/// Engine services a node's handlers run against. One Context per node;
/// all side effects (transmissions, timers, randomness, accounting) go
/// through it, which is what keeps runs replayable.
class Context {
 public:
  virtual ~Context() = default;

  virtual sim::SimTime now() const = 0;
  virtual NodeId self() const = 0;
  virtual const ProtocolConfig& config() const = 0;

  virtual void broadcast(const Packet& pkt) = 0;
  virtual void unicast(NodeId to, const Packet& pkt) = 0;

  virtual sim::EventHandle schedule_in(sim::SimTime delay, std::function<void()> fn) = 0;
  virtual void cancel(sim::EventHandle h) = 0;

  /// Node-local random stream (protocol jitter, beacon phases).
  virtual sim::RandomStream& rng() = 0;
  /// Fresh engine-unique packet uid.
  virtual std::uint64_t new_uid() = 0;

  virtual metrics::MetricsSink& metrics() = 0;
  virtual metrics::TraceWriter& trace() = 0;

  // Authentication services; null when signatures are not provisioned.
  virtual const crypto::KeyDirectory* key_directory() const = 0;
  virtual const crypto::SignatureScheme* signature_scheme() const = 0;
  /// This node's own private key only.
  virtual const crypto::PrivateKey* private_key() const = 0;

  /// Asks the engine to watch whether `next_hop` retransmits packet
  /// `uid` within the watchdog deadline; resolution arrives via
  /// ProtocolNode::on_watch_result.
  virtual void watch_forwarding(NodeId next_hop, std::uint64_t uid) = 0;
};

}  // namespace manet::routing
