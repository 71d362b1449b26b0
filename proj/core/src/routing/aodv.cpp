#include "manetsim/routing/aodv.hpp"

#include <algorithm>

namespace manet::routing {

namespace {
BehaviorOverrides honest_defaults;
}

AodvNode::AodvNode(const ProtocolConfig& cfg)
    : cfg_(cfg),
      overrides_(&honest_defaults),
      seen_(cfg.seen_cache_retention),
      buffer_(cfg.buffer_capacity),
      neighbors_(cfg.hello_interval, cfg.hello_loss_limit) {}

void AodvNode::start(Context& ctx) {
  self_ = ctx.self();
  // Stagger beacons so 50 nodes do not all shout in the same microsecond.
  const double phase_s = ctx.rng().uniform(0.0, cfg_.hello_interval.as_seconds());
  ctx.schedule_in(sim::SimTime::seconds(phase_s), [this, &ctx] { hello_tick(ctx); });
}

void AodvNode::hello_tick(Context& ctx) {
  const sim::SimTime now = ctx.now();

  const std::vector<NodeId> lost = neighbors_.sweep(now);
  if (!lost.empty()) link_break(ctx, lost);

  for (auto& [dest, e] : table_) {
    if (e.valid && e.expires_at <= now) {
      e.valid = false;
      if (e.seq_valid) ++e.dest_seq;
      ctx.trace().eventf(now, "route", "node=%u dest=%u op=inval nh=%u hops=%u seq=%u",
                         self_, dest, e.next_hop, e.hop_count, e.dest_seq);
    }
  }

  Packet pkt;
  pkt.kind = PacketKind::hello;
  pkt.uid = ctx.new_uid();
  HelloMsg h;
  h.seq = hello_seq_++;
  fill_hello(ctx, h);
  pkt.body = std::move(h);
  ctx.broadcast(pkt);

  ctx.schedule_in(cfg_.hello_interval, [this, &ctx] { hello_tick(ctx); });
}

void AodvNode::fill_hello(Context&, HelloMsg&) {}

void AodvNode::on_hello(Context& ctx, const Packet&, NodeId from) {
  // A heard beacon doubles as a one-hop route with unknown sequence info.
  install_route(ctx, from, from, 1, 0, false, cfg_.active_route_lifetime);
}

void AodvNode::receive(Context& ctx, const Packet& pkt, NodeId from) {
  neighbors_.heard(from, ctx.now());
  switch (pkt.kind) {
    case PacketKind::rreq: handle_rreq(ctx, pkt, from); break;
    case PacketKind::rrep: handle_rrep(ctx, pkt, from); break;
    case PacketKind::rerr: handle_rerr(ctx, pkt, from); break;
    case PacketKind::hello: on_hello(ctx, pkt, from); break;
    case PacketKind::update: break;  // not part of this protocol
    case PacketKind::data: handle_data(ctx, pkt, from); break;
  }
}

RouteEntry* AodvNode::usable_route(NodeId dest, sim::SimTime now) {
  auto it = table_.find(dest);
  if (it == table_.end() || !route_usable(it->second, now)) return nullptr;
  return &it->second;
}

bool AodvNode::install_route(Context& ctx, NodeId dest, NodeId next_hop,
                             std::uint32_t hops, std::uint32_t seq, bool seq_valid,
                             sim::SimTime lifetime) {
  if (dest == self_) return false;
  const sim::SimTime now = ctx.now();
  const sim::SimTime expires = now + lifetime;

  auto it = table_.find(dest);
  if (it == table_.end()) {
    RouteEntry e;
    e.next_hop = next_hop;
    e.dest_seq = seq;
    e.seq_valid = seq_valid;
    e.hop_count = hops;
    e.expires_at = expires;
    e.valid = true;
    table_.emplace(dest, std::move(e));
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=set nh=%u hops=%u seq=%u",
                       self_, dest, next_hop, hops, seq);
    if (buffer_.has_for(dest)) flush_buffer(ctx, dest);
    return true;
  }

  RouteEntry& e = it->second;
  const bool usable = route_usable(e, now);
  bool accept = false;
  if (seq_valid && e.seq_valid) {
    if (seq > e.dest_seq) accept = true;
    else if (seq == e.dest_seq && (!usable || hops < e.hop_count)) accept = true;
    else if (seq == e.dest_seq && next_hop == e.next_hop && hops == e.hop_count)
      accept = true;  // same route, refresh lifetime
  } else if (!e.seq_valid) {
    accept = true;
  } else if (!usable && !seq_valid) {
    // Unknown-sequence info (e.g. beacons) may only fill dead entries.
    accept = true;
  }
  if (!accept) return false;

  e.next_hop = next_hop;
  if (seq_valid) {
    e.dest_seq = std::max(e.seq_valid ? e.dest_seq : seq, seq);
    e.seq_valid = true;
  }
  e.hop_count = hops;
  e.expires_at = expires;
  e.valid = true;
  ctx.trace().eventf(now, "route", "node=%u dest=%u op=set nh=%u hops=%u seq=%u",
                     self_, dest, next_hop, hops, e.dest_seq);
  if (buffer_.has_for(dest)) flush_buffer(ctx, dest);
  return true;
}

void AodvNode::handle_rreq(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  const RreqMsg& m = pkt.rreq();

  // A node never stores its own request, so an echoed copy of one does
  // not count toward its flood burden.
  if (m.id.origin == self_) return;

  const bool first = ctx.metrics().on_rreq_sighted(self_, m.id.origin, m.id.counter);
  ctx.trace().eventf(now, "rxq", "node=%u origin=%u ctr=%u new=%d", self_, m.id.origin,
                     m.id.counter, first ? 1 : 0);

  install_route(ctx, m.id.origin, from, m.hop_count + 1, m.origin_seq, true,
                cfg_.active_route_lifetime);

  if (seen_.seen_or_insert(m.id, now)) return;

  if (m.dest == self_) {
    own_seq_ = std::max(own_seq_, m.dest_seq_known) + 1;
    Packet rep;
    rep.kind = PacketKind::rrep;
    rep.uid = ctx.new_uid();
    RrepMsg r;
    r.origin = m.id.origin;
    r.dest = self_;
    r.dest_seq = overrides_->advertised_seq(own_seq_, now);
    r.hop_count = overrides_->advertised_hops(0, now);
    r.lifetime = cfg_.active_route_lifetime;
    rep.body = r;
    if (RouteEntry* back = usable_route(m.id.origin, now)) {
      ctx.unicast(back->next_hop, rep);
    }
    return;
  }

  RouteEntry* cached = usable_route(m.dest, now);
  const bool fresh = cached != nullptr && cached->seq_valid &&
                     (!m.dest_seq_valid || cached->dest_seq >= m.dest_seq_known);
  const bool eager = cached != nullptr && overrides_->answer_from_cache_eagerly(now);
  if (fresh || eager) {
    Packet rep;
    rep.kind = PacketKind::rrep;
    rep.uid = ctx.new_uid();
    RrepMsg r;
    r.origin = m.id.origin;
    r.dest = m.dest;
    r.dest_seq = overrides_->advertised_seq(cached->dest_seq, now);
    r.hop_count = overrides_->advertised_hops(cached->hop_count, now);
    r.lifetime = cached->expires_at - now;
    rep.body = r;
    cached->precursors.insert(from);
    if (RouteEntry* back = usable_route(m.id.origin, now)) {
      ctx.unicast(back->next_hop, rep);
    }
    return;
  }

  if (m.ttl <= 1) {
    ctx.trace().eventf(now, "drop", "node=%u kind=rreq uid=%llu reason=ttl_expired",
                       self_, static_cast<unsigned long long>(pkt.uid));
    return;
  }
  Packet fwd = pkt;
  fwd.rreq().hop_count = overrides_->advertised_hops(m.hop_count + 1, now);
  fwd.rreq().ttl = m.ttl - 1;
  ctx.broadcast(fwd);
}

void AodvNode::handle_rrep(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  const RrepMsg& m = pkt.rrep();
  if (m.dest == self_) return;

  const std::uint32_t hops_here = m.hop_count + 1;
  const sim::SimTime lifetime = std::min(m.lifetime, cfg_.active_route_lifetime);
  install_route(ctx, m.dest, from, hops_here, m.dest_seq, true, lifetime);

  if (m.origin == self_) {
    auto it = discoveries_.find(m.dest);
    if (it != discoveries_.end()) {
      ctx.cancel(it->second.timer);
      discoveries_.erase(it);
    }
    flush_buffer(ctx, m.dest);
    return;
  }

  RouteEntry* back = usable_route(m.origin, now);
  if (back == nullptr) {
    ctx.trace().eventf(now, "drop", "node=%u kind=rrep uid=%llu reason=no_route", self_,
                       static_cast<unsigned long long>(pkt.uid));
    return;
  }
  auto fwd_it = table_.find(m.dest);
  if (fwd_it != table_.end()) fwd_it->second.precursors.insert(back->next_hop);
  back->precursors.insert(from);

  Packet fwd = pkt;
  fwd.rrep().hop_count = overrides_->advertised_hops(hops_here, now);
  ctx.unicast(back->next_hop, fwd);
}

void AodvNode::handle_rerr(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  std::vector<RerrMsg::Unreachable> affected;
  for (const auto& u : pkt.rerr().unreachable) {
    auto it = table_.find(u.dest);
    if (it == table_.end()) continue;
    RouteEntry& e = it->second;
    if (!e.valid || e.next_hop != from) continue;
    e.valid = false;
    e.dest_seq = std::max(e.dest_seq, u.dest_seq);
    e.seq_valid = true;
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=inval nh=%u hops=%u seq=%u",
                       self_, u.dest, e.next_hop, e.hop_count, e.dest_seq);
    if (!e.precursors.empty()) affected.push_back({u.dest, e.dest_seq});
  }
  if (!affected.empty()) send_rerr(ctx, affected);
}

void AodvNode::link_break(Context& ctx, const std::vector<NodeId>& lost) {
  const sim::SimTime now = ctx.now();
  std::vector<RerrMsg::Unreachable> affected;
  for (auto& [dest, e] : table_) {
    if (!e.valid) continue;
    if (std::find(lost.begin(), lost.end(), e.next_hop) == lost.end()) continue;
    e.valid = false;
    if (e.seq_valid) ++e.dest_seq;
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=inval nh=%u hops=%u seq=%u",
                       self_, dest, e.next_hop, e.hop_count, e.dest_seq);
    if (!e.precursors.empty()) affected.push_back({dest, e.dest_seq});
  }
  if (!affected.empty()) send_rerr(ctx, affected);
}

void AodvNode::send_rerr(Context& ctx, const std::vector<RerrMsg::Unreachable>& lost) {
  Packet pkt;
  pkt.kind = PacketKind::rerr;
  pkt.uid = ctx.new_uid();
  RerrMsg m;
  m.unreachable = lost;
  pkt.body = std::move(m);
  ctx.broadcast(pkt);
}

void AodvNode::handle_data(Context& ctx, Packet pkt, NodeId) {
  const sim::SimTime now = ctx.now();
  const DataMsg& m = pkt.data();
  if (m.dst == self_) {
    const bool first = ctx.metrics().on_data_delivered(m.flow, pkt.uid, m.payload_bytes,
                                                       now - m.originated_at);
    ctx.trace().eventf(now, first ? "deliver" : "dup", "node=%u flow=%u uid=%llu delay_us=%llu",
                       self_, m.flow, static_cast<unsigned long long>(pkt.uid),
                       static_cast<unsigned long long>((now - m.originated_at).us));
    return;
  }
  forward_data(ctx, std::move(pkt));
}

void AodvNode::forward_data(Context& ctx, Packet pkt) {
  const sim::SimTime now = ctx.now();
  const DataMsg& m = pkt.data();

  RouteEntry* e = usable_route(m.dst, now);
  if (e != nullptr) {
    if (m.ttl == 0) {
      ctx.metrics().on_data_dropped(pkt.uid, metrics::DropReason::ttl_expired);
      ctx.trace().eventf(now, "drop", "node=%u kind=data uid=%llu reason=ttl_expired",
                         self_, static_cast<unsigned long long>(pkt.uid));
      return;
    }
    if (overrides_->swallow_data(pkt, now, ctx.rng())) {
      ctx.metrics().on_data_dropped(pkt.uid, metrics::DropReason::sink_drop);
      ctx.trace().eventf(now, "drop", "node=%u kind=data uid=%llu reason=sink_drop",
                         self_, static_cast<unsigned long long>(pkt.uid));
      ctx.trace().eventf(now, "attack", "node=%u what=sink_drop uid=%llu", self_,
                         static_cast<unsigned long long>(pkt.uid));
      return;
    }
    e->expires_at = now + cfg_.active_route_lifetime;
    if (RouteEntry* back = usable_route(m.src, now))
      back->expires_at = now + cfg_.active_route_lifetime;
    pkt.data().ttl -= 1;
    ctx.unicast(e->next_hop, pkt);
    return;
  }

  if (m.src == self_) {
    const NodeId dst = m.dst;
    const std::uint64_t uid = pkt.uid;
    if (auto evicted = buffer_.push(std::move(pkt))) {
      ctx.metrics().on_data_dropped(evicted->uid, metrics::DropReason::buffer_evict);
      ctx.trace().eventf(now, "drop", "node=%u kind=data uid=%llu reason=buffer_evict",
                         self_, static_cast<unsigned long long>(evicted->uid));
    }
    (void)uid;
    if (!discoveries_.count(dst)) start_discovery(ctx, dst);
    return;
  }

  ctx.metrics().on_data_dropped(pkt.uid, metrics::DropReason::no_route);
  ctx.trace().eventf(now, "drop", "node=%u kind=data uid=%llu reason=no_route", self_,
                     static_cast<unsigned long long>(pkt.uid));
  auto it = table_.find(m.dst);
  send_rerr(ctx, {{m.dst, it != table_.end() ? it->second.dest_seq : 0}});
}

void AodvNode::originate(Context& ctx, FlowId flow, std::uint32_t seq_in_flow,
                         NodeId dst, std::uint32_t payload_bytes) {
  const sim::SimTime now = ctx.now();
  Packet pkt;
  pkt.kind = PacketKind::data;
  pkt.uid = ctx.new_uid();
  DataMsg m;
  m.flow = flow;
  m.seq_in_flow = seq_in_flow;
  m.src = self_;
  m.dst = dst;
  m.payload_bytes = payload_bytes;
  m.originated_at = now;
  m.ttl = cfg_.data_ttl;
  pkt.body = m;

  ctx.metrics().on_data_originated(flow, pkt.uid, payload_bytes);
  ctx.trace().eventf(now, "orig", "node=%u flow=%u uid=%llu dst=%u bytes=%u", self_,
                     flow, static_cast<unsigned long long>(pkt.uid), dst, payload_bytes);
  forward_data(ctx, std::move(pkt));
}

void AodvNode::start_discovery(Context& ctx, NodeId dest) {
  Discovery d;
  d.retries_left = cfg_.rreq_retries;
  d.attempt = 0;
  discoveries_[dest] = d;
  send_rreq(ctx, dest);
}

void AodvNode::send_rreq(Context& ctx, NodeId dest) {
  const sim::SimTime now = ctx.now();
  ++own_seq_;
  ++rreq_counter_;

  Packet pkt;
  pkt.kind = PacketKind::rreq;
  pkt.uid = ctx.new_uid();
  RreqMsg m;
  m.id = RreqId{self_, rreq_counter_};
  m.origin_seq = own_seq_;
  m.dest = dest;
  auto it = table_.find(dest);
  m.dest_seq_known = it != table_.end() ? it->second.dest_seq : 0;
  m.dest_seq_valid = it != table_.end() && it->second.seq_valid;
  m.hop_count = 0;
  m.ttl = cfg_.rreq_ttl;
  pkt.body = m;

  seen_.seen_or_insert(m.id, now);
  ctx.broadcast(pkt);

  Discovery& d = discoveries_[dest];
  const std::uint64_t backoff = cfg_.rreq_retry_base.us << d.attempt;
  d.timer = ctx.schedule_in(sim::SimTime{backoff},
                            [this, &ctx, dest] { discovery_timeout(ctx, dest); });
}

void AodvNode::discovery_timeout(Context& ctx, NodeId dest) {
  auto it = discoveries_.find(dest);
  if (it == discoveries_.end()) return;
  if (usable_route(dest, ctx.now()) != nullptr) {
    discoveries_.erase(it);
    return;
  }
  if (it->second.retries_left > 0) {
    --it->second.retries_left;
    ++it->second.attempt;
    send_rreq(ctx, dest);
    return;
  }
  discoveries_.erase(it);
  for (Packet& p : buffer_.take_for(dest)) {
    ctx.metrics().on_data_dropped(p.uid, metrics::DropReason::discovery_fail);
    ctx.trace().eventf(ctx.now(), "drop", "node=%u kind=data uid=%llu reason=discovery_fail",
                       self_, static_cast<unsigned long long>(p.uid));
  }
}

void AodvNode::flush_buffer(Context& ctx, NodeId dest) {
  for (Packet& p : buffer_.take_for(dest)) forward_data(ctx, std::move(p));
}

bool AodvNode::has_valid_route(NodeId dest) const {
  auto it = table_.find(dest);
  return it != table_.end() && it->second.valid;
}

std::optional<std::uint32_t> AodvNode::route_hops(NodeId dest) const {
  auto it = table_.find(dest);
  if (it == table_.end() || !it->second.valid) return std::nullopt;
  return it->second.hop_count;
}

std::optional<NodeId> AodvNode::route_next_hop(NodeId dest) const {
  auto it = table_.find(dest);
  if (it == table_.end() || !it->second.valid) return std::nullopt;
  return it->second.next_hop;
}

}  // namespace manet::routing
