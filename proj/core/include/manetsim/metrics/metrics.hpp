#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::metrics {

enum class CtrlKind : std::uint8_t { rreq, rrep, rerr, hello, update };

/// Data-plane loss accounting. Every originated packet ends in exactly
/// one of these or in delivered; end_of_run covers packets still
/// buffered or in flight when the clock stops.
enum class DropReason : std::uint8_t {
  buffer_evict,
  no_route,
  discovery_fail,
  ttl_expired,
  channel_loss,
  attack_swallow,
  sink_drop,
  end_of_run,
};

const char* drop_reason_name(DropReason r);

struct MetricsReport {
  std::uint64_t originated = 0;
  std::uint64_t delivered = 0;
  double pdr = 0.0;
  double throughput_bps = 0.0;
  double avg_delay_s = 0.0;
  double jitter_s = 0.0;
  double overhead_ratio = 0.0;
  std::uint64_t hf = 0;
  std::uint64_t md = 0;
  std::uint64_t rreq_tx = 0;
  std::uint64_t rrep_tx = 0;
  std::uint64_t rerr_tx = 0;
  std::uint64_t update_tx = 0;
  std::uint64_t hello_tx = 0;
  std::uint64_t control_tx_total = 0;
  std::map<DropReason, std::uint64_t> drops;
};

/// Per-run counter collection. One instance per simulation; nodes and
/// the engine feed it, finalize() turns it into a MetricsReport.
///
/// Data packets are tracked per uid so that reconciliation is exact:
/// a uid moves originated -> delivered or originated -> dropped(reason)
/// exactly once; whatever is left at finalize() is charged to
/// end_of_run. Duplicate deliveries and duplicate drops are ignored and
/// counted as inconsistencies only if a uid is claimed twice in
/// conflicting ways.
class MetricsSink {
 public:
  void configure(std::uint32_t node_count);

  void on_control_tx(CtrlKind kind);

  void on_data_originated(FlowId flow, std::uint64_t uid, std::uint32_t bytes);
  /// Returns true if this was the first delivery of the uid.
  bool on_data_delivered(FlowId flow, std::uint64_t uid, std::uint32_t bytes,
                         sim::SimTime delay);
  /// Returns true if the drop was charged (uid was outstanding).
  bool on_data_dropped(std::uint64_t uid, DropReason reason);

  /// First-sight flood counting: returns true when `node` sees this
  /// route request id for the first time. Unbounded on purpose; the
  /// protocol-level duplicate cache is bounded and must not skew the
  /// measurement.
  bool on_rreq_sighted(NodeId node, NodeId origin, std::uint32_t counter);
  /// Same for proactive updates, keyed by (issuer, counter).
  bool on_update_sighted(NodeId node, NodeId issuer, std::uint32_t counter);

  std::uint64_t hf_total() const { return hf_total_; }
  std::uint64_t hf_of_node(NodeId node) const;
  std::uint64_t originated() const { return originated_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t control_tx(CtrlKind kind) const { return ctrl_tx_[static_cast<int>(kind)]; }
  std::uint64_t drop_count(DropReason r) const;
  std::uint64_t outstanding() const { return outstanding_.size(); }
  std::uint64_t inconsistencies() const { return inconsistencies_; }

  /// Charges still-outstanding packets to end_of_run and computes the
  /// derived metrics over the run duration.
  MetricsReport finalize(sim::SimTime duration);

 private:
  struct Outstanding {
    FlowId flow;
    std::uint32_t bytes;
  };

  std::uint64_t ctrl_tx_[5] = {0, 0, 0, 0, 0};
  std::uint64_t originated_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t delivered_bits_ = 0;
  std::uint64_t inconsistencies_ = 0;
  std::map<DropReason, std::uint64_t> drops_;
  std::unordered_map<std::uint64_t, Outstanding> outstanding_;
  std::unordered_set<std::uint64_t> settled_;
  std::map<FlowId, std::vector<sim::SimTime>> delays_by_flow_;
  std::uint64_t hf_total_ = 0;
  std::vector<std::uint64_t> hf_by_node_;
  std::vector<std::unordered_set<std::uint64_t>> rreq_sighted_;
  std::vector<std::unordered_set<std::uint64_t>> update_sighted_;
};

/// Scenario-level identity of one run, for reporting.
struct RunMeta {
  std::string scenario;
  Protocol protocol = Protocol::aodv;
  bool attack = false;
  std::uint64_t seed = 0;
  std::uint32_t nodes = 0;
  double area_w = 0.0;
  double area_h = 0.0;
  double max_speed = 0.0;
  double duration_s = 0.0;
};

/// Fixed result schema. Column order is part of the tool's contract.
std::string csv_header();
std::string csv_row(const RunMeta& meta, const MetricsReport& r);

}  // namespace manet::metrics
