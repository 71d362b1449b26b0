#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manetsim/crypto/signature.hpp"
#include "manetsim/metrics/metrics.hpp"
#include "manetsim/metrics/trace.hpp"
#include "manetsim/mobility/channel.hpp"
#include "manetsim/mobility/mobility.hpp"
#include "manetsim/routing/node.hpp"
#include "manetsim/scenario/scenario.hpp"
#include "manetsim/sim/event_queue.hpp"
#include "manetsim/sim/random.hpp"

namespace manet::scenario {

/// Concrete parameters of one run: a non-sweep scenario plus the knobs
/// the command line may override per run.
struct RunSpec {
  Scenario scenario;
  Protocol protocol = Protocol::aodv;
  bool attacks_enabled = false;
  std::uint64_t seed = 1;
};

struct RunOutput {
  metrics::RunMeta meta;
  metrics::MetricsReport report;
};

/// One deterministic run: builds the node population, provisions keys,
/// drives mobility, traffic, the channel, and the watchdog, and collects
/// metrics. Every random draw comes from named streams derived from the
/// run seed, and every tie is broken by node id or insertion order, so a
/// given RunSpec replays bit for bit.
///
/// Attacker placement and traffic endpoints are derived from the seed
/// independently of the attack toggle: the toggle only decides whether
/// the placed profiles activate. Paired runs (attack on/off, same seed)
/// therefore carry identical traffic, which is what makes their metric
/// differences attributable to the attack.
class Simulation {
 public:
  explicit Simulation(RunSpec spec,
                      metrics::TraceWriter trace = metrics::TraceWriter::disabled());
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Builds the population and starts every protocol stack at t=0.
  void start();
  /// Advances the clock; clipped to the scenario duration.
  void run_to(sim::SimTime t);
  /// Runs to the end of the scenario and finalizes metrics and trace.
  RunOutput finish();
  /// start() + finish().
  RunOutput run();

  sim::SimTime now() const { return queue_.now(); }
  const RunSpec& spec() const { return spec_; }
  const routing::ProtocolNode& node(NodeId id) const;
  const std::vector<mobility::Position>& positions() const { return positions_; }
  /// Attacker ids drawn or configured for this seed, ascending; placed
  /// even when attacks are off (see class comment).
  const std::vector<NodeId>& attacker_ids() const { return attacker_ids_; }
  const std::vector<FlowSpec>& flows() const { return flows_; }
  metrics::MetricsSink& metrics() { return metrics_; }
  metrics::TraceWriter& trace() { return trace_; }

  /// Hands one application packet to src immediately (test traffic).
  void inject(NodeId src, NodeId dst, std::uint32_t bytes, FlowId flow = 9000);

 private:
  class NodeContext;
  struct Cell;

  void place_attackers();
  void plan_flows();
  void build_nodes();
  void schedule_traffic();
  void schedule_mobility_tick(sim::SimTime at);
  void schedule_flow_packet(std::size_t flow_idx, std::uint32_t seq, sim::SimTime at);
  void mobility_tick();
  void write_meta();
  void write_summary(const metrics::MetricsReport& r);

  void transmit(NodeId sender, const routing::Packet& pkt, std::optional<NodeId> to);
  std::vector<mobility::JamRegion> active_jams(sim::SimTime t) const;
  void add_watch(NodeId watcher, NodeId next_hop, std::uint64_t uid);
  void resolve_watches(NodeId transmitter, std::uint64_t uid);
  void watch_deadline(NodeId next_hop, std::uint64_t uid);

  RunSpec spec_;
  metrics::TraceWriter trace_;
  sim::EventQueue queue_;
  metrics::MetricsSink metrics_;

  std::vector<std::unique_ptr<Cell>> cells_;
  std::vector<mobility::Position> positions_;
  std::vector<NodeId> attacker_ids_;
  std::map<NodeId, adversary::AttackProfile> assignments_;
  std::vector<FlowSpec> flows_;
  std::vector<sim::SimTime> flow_start_;
  /// Per jam region: owning jammer profiles (empty = environmental).
  std::vector<std::vector<adversary::AttackProfile>> jam_owners_;

  std::optional<crypto::KeyAuthority> authority_;
  sim::RandomStream channel_rng_;

  std::map<std::pair<NodeId, std::uint64_t>, std::vector<NodeId>> watches_;
  std::map<FlowId, std::uint32_t> inject_seq_;

  std::uint64_t next_uid_ = 0;
  sim::SimTime duration_{};
  sim::SimTime last_mobility_{};
  bool started_ = false;
  bool finished_ = false;
};

/// Runs one spec start to finish. Traces to `trace_path` when non-empty.
RunOutput run_one(const RunSpec& spec, const std::string& trace_path = "");

}  // namespace manet::scenario
