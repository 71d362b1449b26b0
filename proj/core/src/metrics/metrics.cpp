#include "manetsim/metrics/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace manet::metrics {

const char* drop_reason_name(DropReason r) {
  switch (r) {
    case DropReason::buffer_evict: return "buffer_evict";
    case DropReason::no_route: return "no_route";
    case DropReason::discovery_fail: return "discovery_fail";
    case DropReason::ttl_expired: return "ttl_expired";
    case DropReason::channel_loss: return "channel_loss";
    case DropReason::attack_swallow: return "attack_swallow";
    case DropReason::sink_drop: return "sink_drop";
    case DropReason::end_of_run: return "end_of_run";
  }
  return "?";
}

void MetricsSink::configure(std::uint32_t node_count) {
  hf_by_node_.assign(node_count, 0);
  rreq_sighted_.assign(node_count, {});
  update_sighted_.assign(node_count, {});
}

void MetricsSink::on_control_tx(CtrlKind kind) { ++ctrl_tx_[static_cast<int>(kind)]; }

void MetricsSink::on_data_originated(FlowId flow, std::uint64_t uid,
                                     std::uint32_t bytes) {
  ++originated_;
  if (!outstanding_.emplace(uid, Outstanding{flow, bytes}).second) ++inconsistencies_;
}

bool MetricsSink::on_data_delivered(FlowId flow, std::uint64_t uid, std::uint32_t bytes,
                                    sim::SimTime delay) {
  auto it = outstanding_.find(uid);
  if (it == outstanding_.end()) {
    // Duplicate arrival of an already settled packet is normal under
    // multipath forwarding; a uid that was never originated is not.
    if (!settled_.count(uid)) ++inconsistencies_;
    return false;
  }
  outstanding_.erase(it);
  settled_.insert(uid);
  ++delivered_;
  delivered_bits_ += std::uint64_t{bytes} * 8;
  delays_by_flow_[flow].push_back(delay);
  return true;
}

bool MetricsSink::on_data_dropped(std::uint64_t uid, DropReason reason) {
  auto it = outstanding_.find(uid);
  if (it == outstanding_.end()) {
    if (!settled_.count(uid)) ++inconsistencies_;
    return false;
  }
  outstanding_.erase(it);
  settled_.insert(uid);
  ++drops_[reason];
  return true;
}

bool MetricsSink::on_rreq_sighted(NodeId node, NodeId origin, std::uint32_t counter) {
  if (node >= rreq_sighted_.size()) return false;
  const std::uint64_t key = (std::uint64_t{origin} << 32) | counter;
  if (!rreq_sighted_[node].insert(key).second) return false;
  ++hf_total_;
  ++hf_by_node_[node];
  return true;
}

bool MetricsSink::on_update_sighted(NodeId node, NodeId issuer, std::uint32_t counter) {
  if (node >= update_sighted_.size()) return false;
  const std::uint64_t key = (std::uint64_t{issuer} << 32) | counter;
  if (!update_sighted_[node].insert(key).second) return false;
  ++hf_total_;
  ++hf_by_node_[node];
  return true;
}

std::uint64_t MetricsSink::hf_of_node(NodeId node) const {
  return node < hf_by_node_.size() ? hf_by_node_[node] : 0;
}

std::uint64_t MetricsSink::drop_count(DropReason r) const {
  auto it = drops_.find(r);
  return it == drops_.end() ? 0 : it->second;
}

MetricsReport MetricsSink::finalize(sim::SimTime duration) {
  for (const auto& [uid, o] : outstanding_) {
    (void)uid;
    (void)o;
    ++drops_[DropReason::end_of_run];
  }
  outstanding_.clear();

  MetricsReport r;
  r.originated = originated_;
  r.delivered = delivered_;
  r.pdr = originated_ == 0 ? 0.0
                           : static_cast<double>(delivered_) / static_cast<double>(originated_);
  const double dur_s = duration.as_seconds();
  r.throughput_bps = dur_s > 0.0 ? static_cast<double>(delivered_bits_) / dur_s : 0.0;

  std::uint64_t delay_n = 0;
  double delay_sum = 0.0;
  double jitter_sum = 0.0;
  std::uint64_t jitter_flows = 0;
  for (const auto& [flow, delays] : delays_by_flow_) {
    (void)flow;
    for (const auto& d : delays) {
      delay_sum += d.as_seconds();
      ++delay_n;
    }
    if (delays.size() >= 2) {
      double acc = 0.0;
      for (std::size_t i = 1; i < delays.size(); ++i)
        acc += std::fabs(delays[i].as_seconds() - delays[i - 1].as_seconds());
      jitter_sum += acc / static_cast<double>(delays.size() - 1);
      ++jitter_flows;
    }
  }
  r.avg_delay_s = delay_n > 0 ? delay_sum / static_cast<double>(delay_n) : 0.0;
  r.jitter_s = jitter_flows > 0 ? jitter_sum / static_cast<double>(jitter_flows) : 0.0;

  r.rreq_tx = ctrl_tx_[static_cast<int>(CtrlKind::rreq)];
  r.rrep_tx = ctrl_tx_[static_cast<int>(CtrlKind::rrep)];
  r.rerr_tx = ctrl_tx_[static_cast<int>(CtrlKind::rerr)];
  r.hello_tx = ctrl_tx_[static_cast<int>(CtrlKind::hello)];
  r.update_tx = ctrl_tx_[static_cast<int>(CtrlKind::update)];
  r.control_tx_total = r.rreq_tx + r.rrep_tx + r.rerr_tx + r.hello_tx + r.update_tx;
  r.overhead_ratio = static_cast<double>(r.control_tx_total) /
                     static_cast<double>(delivered_ == 0 ? 1 : delivered_);
  r.hf = hf_total_;
  r.drops = drops_;
  std::uint64_t dropped = 0;
  for (const auto& [reason, n] : drops_) {
    (void)reason;
    dropped += n;
  }
  r.md = dropped;
  return r;
}

std::string csv_header() {
  return "scenario,protocol,attack,seed,nodes,area_w,area_h,max_speed,duration_s,"
         "pdr,throughput_bps,avg_delay_s,jitter_s,overhead_ratio,hf,md,"
         "rreq,rrep,rerr,proactive,hello";
}

std::string csv_row(const RunMeta& meta, const MetricsReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s,%s,%s,%llu,%u,%.1f,%.1f,%.1f,%.1f,"
                "%.6f,%.3f,%.6f,%.6f,%.6f,%llu,%llu,"
                "%llu,%llu,%llu,%llu,%llu",
                meta.scenario.c_str(), protocol_name(meta.protocol),
                meta.attack ? "on" : "off",
                static_cast<unsigned long long>(meta.seed), meta.nodes, meta.area_w,
                meta.area_h, meta.max_speed, meta.duration_s, r.pdr, r.throughput_bps,
                r.avg_delay_s, r.jitter_s, r.overhead_ratio,
                static_cast<unsigned long long>(r.hf),
                static_cast<unsigned long long>(r.md),
                static_cast<unsigned long long>(r.rreq_tx),
                static_cast<unsigned long long>(r.rrep_tx),
                static_cast<unsigned long long>(r.rerr_tx),
                static_cast<unsigned long long>(r.update_tx),
                static_cast<unsigned long long>(r.hello_tx));
  return std::string(buf);
}

}  // namespace manet::metrics
