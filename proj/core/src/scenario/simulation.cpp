#include "manetsim/scenario/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "manetsim/error.hpp"
#include "manetsim/routing/aodv.hpp"
#include "manetsim/routing/hsrp.hpp"
#include "manetsim/routing/wire.hpp"

namespace manet::scenario {

namespace {

metrics::CtrlKind ctrl_kind_of(routing::PacketKind k) {
  switch (k) {
    case routing::PacketKind::rreq: return metrics::CtrlKind::rreq;
    case routing::PacketKind::rrep: return metrics::CtrlKind::rrep;
    case routing::PacketKind::rerr: return metrics::CtrlKind::rerr;
    case routing::PacketKind::hello: return metrics::CtrlKind::hello;
    case routing::PacketKind::update: return metrics::CtrlKind::update;
    case routing::PacketKind::data: break;
  }
  throw SimError("data packets are not control traffic");
}

const char* loss_name(mobility::LossReason r) {
  switch (r) {
    case mobility::LossReason::none: return "none";
    case mobility::LossReason::out_of_range: return "out_of_range";
    case mobility::LossReason::jammed: return "jammed";
    case mobility::LossReason::random_loss: return "random_loss";
  }
  return "?";
}

std::uint64_t interval_us(double rate_pps) {
  const auto us = static_cast<std::uint64_t>(std::llround(1e6 / rate_pps));
  return us == 0 ? 1 : us;
}

}  // namespace

struct Simulation::Cell {
  std::unique_ptr<routing::ProtocolNode> stack;
  std::unique_ptr<NodeContext> ctx;
  mobility::WaypointState motion;
  sim::RandomStream proto_rng;
  sim::RandomStream mob_rng;

  Cell(sim::RandomStream p, sim::RandomStream m) : proto_rng(p), mob_rng(m) {}
};

class Simulation::NodeContext final : public routing::Context {
 public:
  NodeContext(Simulation* sim, NodeId id) : sim_(sim), id_(id) {}

  sim::SimTime now() const override { return sim_->queue_.now(); }
  NodeId self() const override { return id_; }
  const routing::ProtocolConfig& config() const override {
    return sim_->spec_.scenario.protocol_config;
  }
  void broadcast(const routing::Packet& pkt) override {
    sim_->transmit(id_, pkt, std::nullopt);
  }
  void unicast(NodeId to, const routing::Packet& pkt) override {
    sim_->transmit(id_, pkt, to);
  }
  sim::EventHandle schedule_in(sim::SimTime delay, std::function<void()> fn) override {
    return sim_->queue_.schedule_in(delay, std::move(fn));
  }
  void cancel(sim::EventHandle h) override { sim_->queue_.cancel(h); }
  sim::RandomStream& rng() override { return sim_->cells_[id_]->proto_rng; }
  std::uint64_t new_uid() override { return ++sim_->next_uid_; }
  metrics::MetricsSink& metrics() override { return sim_->metrics_; }
  metrics::TraceWriter& trace() override { return sim_->trace_; }
  const crypto::KeyDirectory* key_directory() const override {
    return sim_->authority_ ? &sim_->authority_->directory() : nullptr;
  }
  const crypto::SignatureScheme* signature_scheme() const override {
    return sim_->authority_ ? &sim_->authority_->scheme() : nullptr;
  }
  const crypto::PrivateKey* private_key() const override {
    return sim_->authority_ ? &sim_->authority_->private_key(id_) : nullptr;
  }
  void watch_forwarding(NodeId next_hop, std::uint64_t uid) override {
    sim_->add_watch(id_, next_hop, uid);
  }

 private:
  Simulation* sim_;
  NodeId id_;
};

Simulation::Simulation(RunSpec spec, metrics::TraceWriter trace)
    : spec_(std::move(spec)),
      trace_(std::move(trace)),
      channel_rng_(sim::fork_stream(spec_.seed, "channel")) {
  duration_ = sim::SimTime::seconds(spec_.scenario.duration_s);
}

Simulation::~Simulation() = default;

const routing::ProtocolNode& Simulation::node(NodeId id) const {
  return *cells_.at(id)->stack;
}

void Simulation::place_attackers() {
  const Scenario& s = spec_.scenario;
  if (!s.attacks.empty()) {
    for (const AttackSpec& a : s.attacks) assignments_.emplace(a.node, a.profile);
  } else if (s.auto_attack.count > 0) {
    // Placement is a pure function of the seed so the attack-off twin of
    // a run excludes the same nodes from traffic.
    std::set<NodeId> reserved;
    for (const FlowSpec& fl : s.traffic.flows) {
      reserved.insert(fl.src);
      reserved.insert(fl.dst);
    }
    auto rng = sim::fork_stream(spec_.seed, "attackers");
    while (assignments_.size() < s.auto_attack.count) {
      const auto id = static_cast<NodeId>(rng.below(s.nodes));
      if (reserved.count(id)) continue;
      assignments_.emplace(id, s.auto_attack.profile);
    }
  }
  for (const auto& [id, profile] : assignments_) {
    (void)profile;
    attacker_ids_.push_back(id);
  }
  jam_owners_.assign(s.jam_regions.size(), {});
  for (const auto& [id, profile] : assignments_) {
    (void)id;
    if (profile.kind == adversary::AttackKind::jammer &&
        profile.jam_region < jam_owners_.size())
      jam_owners_[profile.jam_region].push_back(profile);
  }
}

void Simulation::plan_flows() {
  const TrafficSpec& t = spec_.scenario.traffic;
  auto rng = sim::fork_stream(spec_.seed, "traffic");
  if (!t.flows.empty()) {
    flows_ = t.flows;
  } else {
    const std::set<NodeId> bad(attacker_ids_.begin(), attacker_ids_.end());
    for (std::uint32_t i = 0; i < t.flow_count; ++i) {
      NodeId src = 0;
      NodeId dst = 0;
      do {
        src = static_cast<NodeId>(rng.below(spec_.scenario.nodes));
      } while (bad.count(src) != 0);
      do {
        dst = static_cast<NodeId>(rng.below(spec_.scenario.nodes));
      } while (bad.count(dst) != 0 || dst == src);
      flows_.push_back(FlowSpec{src, dst, t.packet_bytes, t.data_rate_pps});
    }
  }
  for (const FlowSpec& fl : flows_)
    flow_start_.push_back(sim::SimTime::seconds(1.0 + rng.uniform(0.0, 1.0 / fl.rate_pps)));
}

void Simulation::build_nodes() {
  const Scenario& s = spec_.scenario;
  auto layout = sim::fork_stream(spec_.seed, "layout");
  positions_ = mobility::init_positions(s.nodes, s.area, layout);

  if (spec_.protocol == Protocol::hsrp && s.protocol_config.signatures_enabled) {
    authority_.emplace(std::make_unique<crypto::KeyedDigestScheme>());
    auto keys = sim::fork_stream(spec_.seed, "keys");
    for (NodeId id = 0; id < s.nodes; ++id) authority_->provision(id, keys);
    authority_->freeze();
  }

  cells_.reserve(s.nodes);
  for (NodeId id = 0; id < s.nodes; ++id) {
    char label[32];
    std::snprintf(label, sizeof(label), "node/%u", id);
    auto proto_rng = sim::fork_stream(spec_.seed, label);
    std::snprintf(label, sizeof(label), "mob/%u", id);
    auto mob_rng = sim::fork_stream(spec_.seed, label);

    auto cell = std::make_unique<Cell>(proto_rng, mob_rng);
    std::unique_ptr<routing::ProtocolNode> stack;
    if (spec_.protocol == Protocol::hsrp)
      stack = std::make_unique<routing::HsrpNode>(s.protocol_config);
    else
      stack = std::make_unique<routing::AodvNode>(s.protocol_config);
    if (spec_.attacks_enabled) {
      if (auto it = assignments_.find(id); it != assignments_.end())
        stack = std::make_unique<adversary::MaliciousNode>(std::move(stack), it->second);
    }
    cell->stack = std::move(stack);
    cell->ctx = std::make_unique<NodeContext>(this, id);
    if (s.speed.max_mps > 0.0)
      cell->motion = mobility::waypoint_init(positions_[id], s.area, s.speed, cell->mob_rng);
    else
      cell->motion.pos = positions_[id];
    cells_.push_back(std::move(cell));
  }
}

void Simulation::write_meta() {
  if (!trace_.enabled()) return;
  const Scenario& s = spec_.scenario;
  trace_.eventf(sim::kTimeZero, "meta",
                "scenario=%s protocol=%s attack=%d seed=%llu nodes=%u area_w=%.17g "
                "area_h=%.17g max_speed=%.17g duration_s=%.17g fcap=%.17g frate=%.17g",
                s.name.c_str(), protocol_name(spec_.protocol),
                spec_.attacks_enabled ? 1 : 0,
                static_cast<unsigned long long>(spec_.seed), s.nodes, s.area.width,
                s.area.height, s.speed.max_mps, s.duration_s,
                s.protocol_config.flood_bucket_capacity,
                s.protocol_config.flood_refill_per_s);
  if (spec_.attacks_enabled) {
    for (const auto& [id, profile] : assignments_)
      trace_.eventf(sim::kTimeZero, "attacker", "node=%u kind=%s", id,
                    adversary::attack_kind_name(profile.kind));
  }
  for (std::size_t i = 0; i < flows_.size(); ++i)
    trace_.eventf(sim::kTimeZero, "flow", "id=%zu src=%u dst=%u rate=%.17g bytes=%u", i,
                  flows_[i].src, flows_[i].dst, flows_[i].rate_pps,
                  flows_[i].packet_bytes);
}

void Simulation::schedule_flow_packet(std::size_t flow_idx, std::uint32_t seq,
                                      sim::SimTime at) {
  queue_.schedule(at, [this, flow_idx, seq, at] {
    const FlowSpec& fl = flows_[flow_idx];
    cells_[fl.src]->stack->originate(*cells_[fl.src]->ctx,
                                     static_cast<FlowId>(flow_idx), seq, fl.dst,
                                     fl.packet_bytes);
    const sim::SimTime next = at + sim::SimTime{interval_us(fl.rate_pps)};
    if (next <= duration_ - sim::SimTime::seconds(2.0))
      schedule_flow_packet(flow_idx, seq + 1, next);
  });
}

void Simulation::schedule_traffic() {
  // Sources go quiet two seconds before the end so packets in flight can
  // drain; whatever still cannot be delivered is charged to end_of_run.
  const sim::SimTime stop = duration_ - sim::SimTime::seconds(2.0);
  for (std::size_t i = 0; i < flows_.size(); ++i)
    if (flow_start_[i] <= stop) schedule_flow_packet(i, 0, flow_start_[i]);
}

void Simulation::schedule_mobility_tick(sim::SimTime at) {
  queue_.schedule(at, [this] { mobility_tick(); });
}

void Simulation::mobility_tick() {
  const Scenario& s = spec_.scenario;
  const sim::SimTime t = queue_.now();
  const sim::SimTime dt = t - last_mobility_;
  const sim::SimTime pause = sim::SimTime::seconds(s.pause_s);
  for (NodeId id = 0; id < cells_.size(); ++id) {
    Cell& c = *cells_[id];
    c.motion =
        mobility::waypoint_step(c.motion, last_mobility_, dt, s.area, s.speed, pause,
                                c.mob_rng);
    positions_[id] = c.motion.pos;
  }
  last_mobility_ = t;
  const sim::SimTime next = t + sim::SimTime::millis(100);
  if (next < duration_) schedule_mobility_tick(next);
}

void Simulation::start() {
  if (started_) throw SimError("simulation already started");
  started_ = true;
  const Scenario& s = spec_.scenario;

  metrics_.configure(s.nodes);
  place_attackers();
  plan_flows();
  build_nodes();
  write_meta();

  if (spec_.attacks_enabled) {
    for (const auto& [id, profile] : assignments_) {
      if (profile.kind != adversary::AttackKind::jammer) continue;
      const NodeId owner = id;
      const std::size_t region = profile.jam_region;
      if (profile.active_from < duration_)
        queue_.schedule(profile.active_from, [this, owner, region] {
          trace_.eventf(queue_.now(), "attack", "node=%u what=jam_on region=%zu", owner,
                        region);
        });
      if (profile.active_until < duration_)
        queue_.schedule(profile.active_until, [this, owner, region] {
          trace_.eventf(queue_.now(), "attack", "node=%u what=jam_off region=%zu", owner,
                        region);
        });
    }
  }

  schedule_traffic();
  if (s.speed.max_mps > 0.0) schedule_mobility_tick(sim::SimTime::millis(100));

  for (NodeId id = 0; id < cells_.size(); ++id)
    cells_[id]->stack->start(*cells_[id]->ctx);
}

void Simulation::run_to(sim::SimTime t) {
  if (!started_) start();
  queue_.run_until(std::min(t, duration_));
}

RunOutput Simulation::finish() {
  if (!started_) start();
  if (finished_) throw SimError("simulation already finished");
  finished_ = true;
  queue_.run_until(duration_);

  metrics::MetricsReport report = metrics_.finalize(duration_);
  write_summary(report);
  trace_.flush();

  RunOutput out;
  out.meta.scenario = spec_.scenario.name;
  out.meta.protocol = spec_.protocol;
  out.meta.attack = spec_.attacks_enabled;
  out.meta.seed = spec_.seed;
  out.meta.nodes = spec_.scenario.nodes;
  out.meta.area_w = spec_.scenario.area.width;
  out.meta.area_h = spec_.scenario.area.height;
  out.meta.max_speed = spec_.scenario.speed.max_mps;
  out.meta.duration_s = spec_.scenario.duration_s;
  out.report = std::move(report);
  return out;
}

RunOutput Simulation::run() {
  start();
  return finish();
}

void Simulation::write_summary(const metrics::MetricsReport& r) {
  if (!trace_.enabled()) return;
  char drops[320];
  int off = 0;
  for (int i = 0; i <= static_cast<int>(metrics::DropReason::end_of_run); ++i) {
    const auto reason = static_cast<metrics::DropReason>(i);
    const auto it = r.drops.find(reason);
    const std::uint64_t n = it == r.drops.end() ? 0 : it->second;
    off += std::snprintf(drops + off, sizeof(drops) - static_cast<std::size_t>(off),
                         "%sdrop_%s=%llu", i == 0 ? "" : " ",
                         metrics::drop_reason_name(reason),
                         static_cast<unsigned long long>(n));
  }
  trace_.eventf(duration_, "summary",
                "originated=%llu delivered=%llu pdr=%.17g throughput_bps=%.17g "
                "avg_delay_s=%.17g jitter_s=%.17g overhead=%.17g hf=%llu md=%llu "
                "rreq=%llu rrep=%llu rerr=%llu update=%llu hello=%llu %s "
                "inconsistencies=%llu",
                static_cast<unsigned long long>(r.originated),
                static_cast<unsigned long long>(r.delivered), r.pdr, r.throughput_bps,
                r.avg_delay_s, r.jitter_s, r.overhead_ratio,
                static_cast<unsigned long long>(r.hf),
                static_cast<unsigned long long>(r.md),
                static_cast<unsigned long long>(r.rreq_tx),
                static_cast<unsigned long long>(r.rrep_tx),
                static_cast<unsigned long long>(r.rerr_tx),
                static_cast<unsigned long long>(r.update_tx),
                static_cast<unsigned long long>(r.hello_tx), drops,
                static_cast<unsigned long long>(metrics_.inconsistencies()));
}

void Simulation::inject(NodeId src, NodeId dst, std::uint32_t bytes, FlowId flow) {
  if (!started_) throw SimError("inject before start");
  const std::uint32_t seq = inject_seq_[flow]++;
  cells_.at(src)->stack->originate(*cells_[src]->ctx, flow, seq, dst, bytes);
}

std::vector<mobility::JamRegion> Simulation::active_jams(sim::SimTime t) const {
  std::vector<mobility::JamRegion> out;
  const auto& regions = spec_.scenario.jam_regions;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& owners = jam_owners_[i];
    bool active = owners.empty();  // ownerless regions are environmental
    if (!active && spec_.attacks_enabled)
      for (const adversary::AttackProfile& p : owners)
        if (p.active_at(t)) {
          active = true;
          break;
        }
    if (active) out.push_back(regions[i]);
  }
  return out;
}

void Simulation::transmit(NodeId sender, const routing::Packet& pkt,
                          std::optional<NodeId> to) {
  const sim::SimTime now = queue_.now();
  if (pkt.kind != routing::PacketKind::data)
    metrics_.on_control_tx(ctrl_kind_of(pkt.kind));

  if (trace_.enabled()) {
    char tobuf[16];
    if (to)
      std::snprintf(tobuf, sizeof(tobuf), "%u", *to);
    else
      std::snprintf(tobuf, sizeof(tobuf), "bcast");
    switch (pkt.kind) {
      case routing::PacketKind::rreq: {
        const auto& m = pkt.rreq();
        trace_.eventf(now, "tx",
                      "node=%u kind=rreq uid=%llu to=%s origin=%u ctr=%u dest=%u "
                      "oseq=%u hops=%u ttl=%u",
                      sender, static_cast<unsigned long long>(pkt.uid), tobuf,
                      m.id.origin, m.id.counter, m.dest, m.origin_seq, m.hop_count,
                      m.ttl);
        break;
      }
      case routing::PacketKind::rrep: {
        const auto& m = pkt.rrep();
        trace_.eventf(now, "tx",
                      "node=%u kind=rrep uid=%llu to=%s origin=%u dest=%u dseq=%u "
                      "hops=%u",
                      sender, static_cast<unsigned long long>(pkt.uid), tobuf, m.origin,
                      m.dest, m.dest_seq, m.hop_count);
        break;
      }
      case routing::PacketKind::rerr:
        trace_.eventf(now, "tx", "node=%u kind=rerr uid=%llu to=%s n=%zu", sender,
                      static_cast<unsigned long long>(pkt.uid), tobuf,
                      pkt.rerr().unreachable.size());
        break;
      case routing::PacketKind::hello:
        trace_.eventf(now, "tx", "node=%u kind=hello uid=%llu to=%s seq=%u g=%zu",
                      sender, static_cast<unsigned long long>(pkt.uid), tobuf,
                      pkt.hello().seq, pkt.hello().gossip.size());
        break;
      case routing::PacketKind::update: {
        const auto& m = pkt.update();
        trace_.eventf(now, "tx",
                      "node=%u kind=update uid=%llu to=%s issuer=%u ctr=%u dest=%u "
                      "dseq=%u ahops=%u",
                      sender, static_cast<unsigned long long>(pkt.uid), tobuf, m.issuer,
                      m.counter, m.about_dest, m.dest_seq, m.advertised_hops);
        break;
      }
      case routing::PacketKind::data: {
        const auto& m = pkt.data();
        trace_.eventf(now, "tx",
                      "node=%u kind=data uid=%llu to=%s flow=%u dseq=%u src=%u dst=%u "
                      "ttl=%u",
                      sender, static_cast<unsigned long long>(pkt.uid), tobuf, m.flow,
                      m.seq_in_flow, m.src, m.dst, m.ttl);
        break;
      }
    }
  }

  if (pkt.kind == routing::PacketKind::data) resolve_watches(sender, pkt.uid);

  // Round-trip through the documented wire layout so the encoding stays
  // load-bearing rather than decorative.
  const Bytes wire = routing::serialize_packet(pkt);
  auto parsed = std::make_shared<const routing::Packet>(routing::parse_packet(wire));

  std::vector<mobility::Candidate> cand;
  if (to) {
    if (*to < cells_.size() && *to != sender)
      cand.push_back(mobility::Candidate{*to, positions_[*to]});
  } else {
    cand.reserve(cells_.size() - 1);
    for (NodeId id = 0; id < cells_.size(); ++id)
      if (id != sender) cand.push_back(mobility::Candidate{id, positions_[id]});
  }

  const auto deliveries = mobility::transmit(spec_.scenario.channel, active_jams(now),
                                             now, positions_[sender], cand,
                                             channel_rng_);
  for (const mobility::Delivery& d : deliveries) {
    if (d.delivered) {
      const NodeId r = d.receiver;
      queue_.schedule(d.arrive_at, [this, r, parsed, sender] {
        cells_[r]->stack->receive(*cells_[r]->ctx, *parsed, sender);
      });
    } else if (pkt.kind == routing::PacketKind::data && to) {
      if (metrics_.on_data_dropped(pkt.uid, metrics::DropReason::channel_loss))
        trace_.eventf(now, "drop",
                      "node=%u kind=data uid=%llu reason=channel_loss loss=%s", sender,
                      static_cast<unsigned long long>(pkt.uid), loss_name(d.loss));
    }
  }
}

void Simulation::add_watch(NodeId watcher, NodeId next_hop, std::uint64_t uid) {
  watches_[{next_hop, uid}].push_back(watcher);
  queue_.schedule_in(spec_.scenario.protocol_config.watchdog_deadline,
                     [this, next_hop, uid] { watch_deadline(next_hop, uid); });
}

void Simulation::resolve_watches(NodeId transmitter, std::uint64_t uid) {
  const auto it = watches_.find({transmitter, uid});
  if (it == watches_.end()) return;
  const std::vector<NodeId> watchers = std::move(it->second);
  watches_.erase(it);
  for (NodeId w : watchers)
    cells_[w]->stack->on_watch_result(*cells_[w]->ctx, transmitter, uid, true);
}

void Simulation::watch_deadline(NodeId next_hop, std::uint64_t uid) {
  const auto it = watches_.find({next_hop, uid});
  if (it == watches_.end()) return;
  const std::vector<NodeId> watchers = std::move(it->second);
  watches_.erase(it);
  for (NodeId w : watchers)
    cells_[w]->stack->on_watch_result(*cells_[w]->ctx, next_hop, uid, false);
}

RunOutput run_one(const RunSpec& spec, const std::string& trace_path) {
  metrics::TraceWriter trace = trace_path.empty()
                                   ? metrics::TraceWriter::disabled()
                                   : metrics::TraceWriter::to_file(trace_path);
  Simulation sim(spec, std::move(trace));
  return sim.run();
}

}  // namespace manet::scenario
