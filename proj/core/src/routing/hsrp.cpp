#include "manetsim/routing/hsrp.hpp"

#include <algorithm>
#include <cmath>

#include "manetsim/routing/wire.hpp"

namespace manet::routing {

namespace {

BehaviorOverrides honest_defaults;

constexpr std::size_t kGossipOutboxCap = 256;

bool hop_list_contains(const Packet& pkt, NodeId node) {
  if (!pkt.signed_ext) return false;
  const auto& hl = pkt.signed_ext->hop_list;
  return std::find(hl.begin(), hl.end(), node) != hl.end();
}

}  // namespace

bool rrep_plausible(std::optional<std::uint32_t> last_known, std::uint32_t rrep_seq,
                    std::uint32_t wire_hops, bool from_is_neighbor, bool from_is_dest,
                    std::uint32_t seq_jump_max) {
  if (last_known) {
    return !(rrep_seq > *last_known && rrep_seq - *last_known > seq_jump_max);
  }
  if (wire_hops == 0 && !from_is_dest) return false;
  if (wire_hops == 1 && !from_is_neighbor && !from_is_dest) return false;
  return true;
}

HsrpNode::HsrpNode(const ProtocolConfig& cfg)
    : cfg_(cfg),
      overrides_(&honest_defaults),
      table_(cfg.max_paths),
      seen_(cfg.seen_cache_retention),
      rate_limited_(cfg.seen_cache_retention),
      buffer_(cfg.buffer_capacity),
      neighbors_(cfg.hello_interval, cfg.hello_loss_limit),
      guard_(cfg.flood_bucket_capacity, cfg.flood_refill_per_s) {}

void HsrpNode::start(Context& ctx) {
  self_ = ctx.self();
  last_time_ = ctx.now();
  trust_.emplace(self_, cfg_.trust_weights, cfg_.report_window);

  const double hello_phase = ctx.rng().uniform(0.0, cfg_.hello_interval.as_seconds());
  ctx.schedule_in(sim::SimTime::seconds(hello_phase), [this, &ctx] { hello_tick(ctx); });
  const double upd_phase = ctx.rng().uniform(0.0, cfg_.update_interval.as_seconds());
  ctx.schedule_in(sim::SimTime::seconds(upd_phase), [this, &ctx] { proactive_tick(ctx); });
  const double rec_phase =
      ctx.rng().uniform(0.0, cfg_.recommendation_interval.as_seconds());
  ctx.schedule_in(sim::SimTime::seconds(rec_phase),
                  [this, &ctx] { recommendation_tick(ctx); });
}

void HsrpNode::hello_tick(Context& ctx) {
  const sim::SimTime now = ctx.now();
  last_time_ = now;

  for (NodeId lost : neighbors_.sweep(now)) link_loss(ctx, lost);
  table_.prune(now);
  std::erase_if(reply_memos_, [&](const auto& kv) {
    return now - kv.second.at > cfg_.seen_cache_retention;
  });

  Packet pkt;
  pkt.kind = PacketKind::hello;
  pkt.uid = ctx.new_uid();
  HelloMsg h;
  h.seq = hello_seq_++;
  const std::size_t n = std::min<std::size_t>(outbox_.size(), cfg_.gossip_per_hello);
  h.gossip.assign(outbox_.begin(), outbox_.begin() + static_cast<std::ptrdiff_t>(n));
  outbox_.erase(outbox_.begin(), outbox_.begin() + static_cast<std::ptrdiff_t>(n));
  pkt.body = std::move(h);
  ctx.broadcast(pkt);

  ctx.schedule_in(cfg_.hello_interval, [this, &ctx] { hello_tick(ctx); });
}

void HsrpNode::proactive_tick(Context& ctx) {
  const sim::SimTime now = ctx.now();
  last_time_ = now;

  for (NodeId dest : table_.destinations()) {
    if (dest == self_) continue;
    std::vector<PathEntry> paths = table_.usable_paths(dest, now);
    if (paths.empty()) continue;
    const std::uint32_t adv = table_.advertised_hops(dest, now);
    const std::uint32_t seq = *table_.last_known_seq(dest, now);
    std::sort(paths.begin(), paths.end(),
              [](const PathEntry& a, const PathEntry& b) { return a.next_hop < b.next_hop; });
    NodeId prev = kNoNode;
    for (const PathEntry& p : paths) {
      if (p.next_hop == prev) continue;
      prev = p.next_hop;
      Packet pkt;
      pkt.kind = PacketKind::update;
      pkt.uid = ctx.new_uid();
      UpdateMsg m;
      m.issuer = self_;
      m.counter = ++update_counter_;
      m.about_dest = dest;
      m.dest_seq = overrides_->advertised_seq(seq, now);
      m.advertised_hops = overrides_->advertised_hops(adv, now);
      m.issued_at = now;
      pkt.body = m;
      sign_origin(ctx, pkt);
      ctx.unicast(p.next_hop, pkt);
    }
  }

  ctx.schedule_in(cfg_.update_interval, [this, &ctx] { proactive_tick(ctx); });
}

void HsrpNode::recommendation_tick(Context& ctx) {
  last_time_ = ctx.now();
  for (const auto& [peer, rec] : trust_->records()) {
    if (rec.engagement.successes + rec.engagement.failures == 0) continue;
    if (outbox_.size() >= kGossipOutboxCap) break;
    TrustGossip g;
    g.kind = 1;
    g.about = peer;
    g.score = rec.engagement.score();
    outbox_.push_back(g);
  }
  ctx.schedule_in(cfg_.recommendation_interval,
                  [this, &ctx] { recommendation_tick(ctx); });
}

HsrpNode::SigResult HsrpNode::verify_packet(Context& ctx, const Packet& pkt,
                                            NodeId from) const {
  if (!pkt.signed_ext) return {SigCheck::unsigned_pkt, 0};
  const SignedExt& ext = *pkt.signed_ext;
  const auto& hl = ext.hop_list;
  const auto& ch = ext.chain.entries;
  if (hl.empty() || hl.size() != ch.size()) return {SigCheck::malformed, 0};
  for (std::size_t i = 0; i < hl.size(); ++i) {
    if (hl[i] != ch[i].signer) return {SigCheck::malformed, i};
  }
  if (hl.back() != from) return {SigCheck::malformed, hl.size() - 1};
  if (pkt.kind == PacketKind::rreq && hl.front() != pkt.rreq().id.origin)
    return {SigCheck::malformed, 0};
  if (pkt.kind == PacketKind::update &&
      (hl.size() != 1 || hl.front() != pkt.update().issuer))
    return {SigCheck::malformed, 0};

  const crypto::KeyDirectory* dir = ctx.key_directory();
  const crypto::SignatureScheme* scheme = ctx.signature_scheme();
  if (dir == nullptr || scheme == nullptr) return {SigCheck::malformed, 0};
  const crypto::ChainVerdict v =
      crypto::chain_verify(ext.chain, *dir, canonical_bytes(pkt), *scheme);
  if (!v.valid) return {SigCheck::bad_chain, v.at_index};
  return {SigCheck::ok, 0};
}

void HsrpNode::sign_origin(Context& ctx, Packet& pkt) const {
  if (!cfg_.signatures_enabled) return;
  const crypto::PrivateKey* key = ctx.private_key();
  const crypto::SignatureScheme* scheme = ctx.signature_scheme();
  if (key == nullptr || scheme == nullptr) return;
  SignedExt ext;
  ext.hop_list.push_back(self_);
  ext.chain = crypto::chain_append({}, self_, *key, canonical_bytes(pkt), *scheme);
  pkt.signed_ext = std::move(ext);
}

void HsrpNode::sign_forward(Context& ctx, Packet& pkt) const {
  if (!cfg_.signatures_enabled || !pkt.signed_ext) return;
  const crypto::PrivateKey* key = ctx.private_key();
  const crypto::SignatureScheme* scheme = ctx.signature_scheme();
  if (key == nullptr || scheme == nullptr) return;
  pkt.signed_ext->hop_list.push_back(self_);
  pkt.signed_ext->chain = crypto::chain_append(std::move(pkt.signed_ext->chain), self_,
                                               *key, canonical_bytes(pkt), *scheme);
}

void HsrpNode::receive(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  last_time_ = now;
  neighbors_.heard(from, now);

  switch (pkt.kind) {
    case PacketKind::hello:
      handle_hello(ctx, pkt, from);
      return;
    case PacketKind::rerr:
      handle_rerr(ctx, pkt, from);
      return;
    case PacketKind::data:
      handle_data(ctx, pkt, from);
      return;
    default:
      break;
  }

  // Signed control pipeline. Flood burden is counted before any checks
  // (a node pays the reception cost whether or not the packet survives),
  // but echoes of a node's own traffic are not stored and do not count.
  if (pkt.kind == PacketKind::rreq) {
    const auto& m = pkt.rreq();
    if (m.id.origin != self_) {
      const bool first = ctx.metrics().on_rreq_sighted(self_, m.id.origin, m.id.counter);
      ctx.trace().eventf(now, "rxq", "node=%u origin=%u ctr=%u new=%d", self_,
                         m.id.origin, m.id.counter, first ? 1 : 0);
    }
  } else if (pkt.kind == PacketKind::update) {
    const auto& m = pkt.update();
    if (m.issuer != self_) {
      const bool first = ctx.metrics().on_update_sighted(self_, m.issuer, m.counter);
      ctx.trace().eventf(now, "rxu", "node=%u issuer=%u ctr=%u new=%d", self_, m.issuer,
                         m.counter, first ? 1 : 0);
    }
  }

  if (cfg_.signatures_enabled) {
    const SigResult sr = verify_packet(ctx, pkt, from);
    if (sr.check == SigCheck::unsigned_pkt) {
      if (!cfg_.allow_insecure_fallback) {
        ctx.trace().eventf(now, "drop", "node=%u kind=%s uid=%llu reason=unsigned",
                           self_, packet_kind_name(pkt.kind),
                           static_cast<unsigned long long>(pkt.uid));
        return;
      }
    } else if (sr.check != SigCheck::ok) {
      ctx.trace().eventf(now, "sigfail", "node=%u from=%u kind=%s uid=%llu at=%zu",
                         self_, from, packet_kind_name(pkt.kind),
                         static_cast<unsigned long long>(pkt.uid), sr.at_index);
      penalize(ctx, from, true);
      ctx.trace().eventf(now, "drop", "node=%u kind=%s uid=%llu reason=bad_signature",
                         self_, packet_kind_name(pkt.kind),
                         static_cast<unsigned long long>(pkt.uid));
      return;
    }
  }

  switch (pkt.kind) {
    case PacketKind::rreq: handle_rreq(ctx, pkt, from); break;
    case PacketKind::rrep: handle_rrep(ctx, pkt, from); break;
    case PacketKind::update: handle_update(ctx, pkt, from); break;
    default: break;
  }
}

void HsrpNode::handle_rreq(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  const RreqMsg& m = pkt.rreq();
  if (m.id.origin == self_) return;
  if (hop_list_contains(pkt, self_)) return;

  if (rate_limited_.contains(m.id, now)) {
    ctx.trace().eventf(now, "drop", "node=%u kind=rreq uid=%llu reason=rate_limited",
                       self_, static_cast<unsigned long long>(pkt.uid));
    return;
  }
  const bool dup = seen_.contains(m.id, now);
  if (!dup && !guard_.allow(m.id.origin, now)) {
    rate_limited_.seen_or_insert(m.id, now);
    ctx.trace().eventf(now, "drop", "node=%u kind=rreq uid=%llu reason=rate_limited",
                       self_, static_cast<unsigned long long>(pkt.uid));
    penalize(ctx, m.id.origin, false);
    return;
  }

  // Reverse path toward the origin; duplicates may add disjoint options.
  NodeId rev_lh = m.id.origin;
  if (pkt.signed_ext && pkt.signed_ext->hop_list.size() >= 2)
    rev_lh = pkt.signed_ext->hop_list[1];
  else if (!pkt.signed_ext && m.hop_count > 0)
    rev_lh = from;
  PathEntry cand;
  cand.next_hop = from;
  cand.last_hop = rev_lh;
  cand.hop_count = m.hop_count + 1;
  cand.dest_seq = m.origin_seq;
  cand.expires_at = now + cfg_.active_route_lifetime;
  const PathAdd ar = table_.try_add(m.id.origin, cand, now);
  if (ar == PathAdd::installed || ar == PathAdd::replaced_set) {
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=%s nh=%u hops=%u seq=%u",
                       self_, m.id.origin,
                       ar == PathAdd::replaced_set ? "set" : "add", from,
                       cand.hop_count, cand.dest_seq);
    if (buffer_.has_for(m.id.origin)) flush_buffer(ctx, m.id.origin);
  }

  if (dup) {
    if (m.dest == self_ && ar == PathAdd::installed) reply_as_destination(ctx, m, from, false);
    return;
  }
  seen_.seen_or_insert(m.id, now);

  if (m.dest == self_) {
    reply_as_destination(ctx, m, from, true);
    return;
  }

  const std::vector<PathEntry> cached = table_.usable_paths(m.dest, now);
  if (!cached.empty()) {
    const std::uint32_t known_seq = *table_.last_known_seq(m.dest, now);
    const bool fresh = !m.dest_seq_valid || known_seq >= m.dest_seq_known;
    const bool eager = overrides_->answer_from_cache_eagerly(now);
    if (fresh || eager) {
      Packet rep;
      rep.kind = PacketKind::rrep;
      rep.uid = ctx.new_uid();
      RrepMsg r;
      r.origin = m.id.origin;
      r.dest = m.dest;
      r.dest_seq = overrides_->advertised_seq(known_seq, now);
      r.hop_count = overrides_->advertised_hops(table_.advertised_hops(m.dest, now), now);
      r.lifetime = cfg_.active_route_lifetime;
      rep.body = r;
      sign_origin(ctx, rep);
      ctx.unicast(from, rep);
      return;
    }
  }

  if (m.ttl <= 1) {
    ctx.trace().eventf(now, "drop", "node=%u kind=rreq uid=%llu reason=ttl_expired",
                       self_, static_cast<unsigned long long>(pkt.uid));
    return;
  }
  Packet fwd = pkt;
  fwd.rreq().hop_count = overrides_->advertised_hops(m.hop_count + 1, now);
  fwd.rreq().ttl = m.ttl - 1;
  sign_forward(ctx, fwd);
  ctx.broadcast(fwd);
}

void HsrpNode::reply_as_destination(Context& ctx, const RreqMsg& m, NodeId from,
                                    bool first_copy) {
  const sim::SimTime now = ctx.now();
  ReplyMemo& memo = reply_memos_[m.id];
  if (memo.replies == 0) {
    own_seq_ = std::max(own_seq_, m.dest_seq_known) + 1;
    memo.seq = own_seq_;
  }
  if (!first_copy && memo.replies >= cfg_.max_paths) return;
  memo.replies += 1;
  memo.at = now;

  Packet rep;
  rep.kind = PacketKind::rrep;
  rep.uid = ctx.new_uid();
  RrepMsg r;
  r.origin = m.id.origin;
  r.dest = self_;
  r.dest_seq = overrides_->advertised_seq(memo.seq, now);
  r.hop_count = overrides_->advertised_hops(0, now);
  r.lifetime = cfg_.active_route_lifetime;
  rep.body = r;
  sign_origin(ctx, rep);
  ctx.unicast(from, rep);
}

void HsrpNode::handle_rrep(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  const RrepMsg& m = pkt.rrep();
  if (m.dest == self_) return;
  if (hop_list_contains(pkt, self_)) return;

  const std::optional<std::uint32_t> last_known = table_.last_known_seq(m.dest, now);
  const bool plausible =
      rrep_plausible(last_known, m.dest_seq, m.hop_count,
                     neighbors_.is_neighbor(from, now), from == m.dest,
                     cfg_.seq_jump_max);
  if (!plausible) {
    NodeId replier = from;
    if (pkt.signed_ext && !pkt.signed_ext->chain.entries.empty())
      replier = pkt.signed_ext->chain.entries.front().signer;
    ctx.trace().eventf(now, "drop", "node=%u kind=rrep uid=%llu reason=implausible_seq",
                       self_, static_cast<unsigned long long>(pkt.uid));
    penalize(ctx, replier, false);
    return;
  }

  NodeId fwd_lh;
  if (pkt.signed_ext) {
    const auto& hl = pkt.signed_ext->hop_list;
    if (hl.front() == m.dest)
      fwd_lh = hl.size() >= 2 ? hl[1] : m.dest;
    else
      fwd_lh = hl.front();  // cached reply: fingerprint by the replier
  } else {
    fwd_lh = m.hop_count == 0 ? m.dest : from;
  }

  PathEntry cand;
  cand.next_hop = from;
  cand.last_hop = fwd_lh;
  cand.hop_count = m.hop_count + 1;
  cand.dest_seq = m.dest_seq;
  cand.expires_at = now + std::min(m.lifetime, cfg_.active_route_lifetime);
  const PathAdd ar = table_.try_add(m.dest, cand, now);
  if (ar == PathAdd::installed || ar == PathAdd::replaced_set) {
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=%s nh=%u hops=%u seq=%u",
                       self_, m.dest, ar == PathAdd::replaced_set ? "set" : "add",
                       from, cand.hop_count, cand.dest_seq);
  }

  if (m.origin == self_) {
    // The discovery stays open until its timer sees a usable route. Closing
    // it on the first reply would let a reply whose path the trust gate then
    // refuses restart discovery immediately, sidestepping the retry backoff.
    flush_buffer(ctx, m.dest);
    return;
  }

  const std::vector<PathEntry> rev = table_.usable_paths(m.origin, now);
  const std::optional<PathEntry> back = trust_gate(ctx, m.origin, rev);
  if (!back) {
    ctx.trace().eventf(now, "drop", "node=%u kind=rrep uid=%llu reason=no_route",
                       self_, static_cast<unsigned long long>(pkt.uid));
    return;
  }
  Packet fwd = pkt;
  fwd.rrep().hop_count = overrides_->advertised_hops(m.hop_count + 1, now);
  sign_forward(ctx, fwd);
  ctx.unicast(back->next_hop, fwd);
}

void HsrpNode::handle_update(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  const UpdateMsg& m = pkt.update();
  if (m.issuer == self_ || m.about_dest == self_) return;
  if (!pkt.signed_ext && m.issuer != from) return;

  const std::uint32_t my_adv = table_.advertised_hops(m.about_dest, now);
  const std::optional<std::uint32_t> cur = table_.last_known_seq(m.about_dest, now);

  PathEntry cand;
  cand.next_hop = from;
  cand.last_hop = from;
  cand.hop_count = m.advertised_hops + 1;
  cand.dest_seq = m.dest_seq;
  cand.expires_at = now + cfg_.active_route_lifetime;

  PathAdd ar = PathAdd::rejected_stale;
  if (cur && m.dest_seq == *cur) {
    if (table_.refresh_path(m.about_dest, from, m.dest_seq, cand.expires_at)) return;
    // Alternate at the same sequence: only a strictly shorter advertised
    // distance keeps the next_hop graph acyclic.
    if (m.advertised_hops < my_adv) ar = table_.try_add(m.about_dest, cand, now);
  } else if (!cur || m.dest_seq > *cur) {
    ar = table_.try_add(m.about_dest, cand, now);
  }
  if (ar == PathAdd::installed || ar == PathAdd::replaced_set) {
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=%s nh=%u hops=%u seq=%u",
                       self_, m.about_dest, ar == PathAdd::replaced_set ? "set" : "add",
                       from, cand.hop_count, cand.dest_seq);
    if (buffer_.has_for(m.about_dest)) flush_buffer(ctx, m.about_dest);
  }
}

void HsrpNode::handle_rerr(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  std::vector<RerrMsg::Unreachable> cascade;
  for (const auto& u : pkt.rerr().unreachable) {
    if (!table_.invalidate_path(u.dest, from)) continue;
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=inval nh=%u hops=0 seq=%u",
                       self_, u.dest, from, u.dest_seq);
    if (table_.path_count(u.dest) == 0) cascade.push_back(u);
  }
  if (!cascade.empty()) send_rerr(ctx, cascade);
}

void HsrpNode::handle_hello(Context& ctx, const Packet& pkt, NodeId from) {
  const sim::SimTime now = ctx.now();
  for (const TrustGossip& g : pkt.hello().gossip) {
    if (g.kind > 1) continue;
    if (!(g.score >= 0.0 && g.score <= 1.0)) continue;
    if (g.about == self_ || g.about == from) continue;
    const trust::TrustClass before = trust_->cls(g.about);
    trust_->ingest_report(
        g.kind == 0 ? trust::ReportKind::reputation : trust::ReportKind::recommendation,
        from, g.about, g.score, now);
    note_class_change(ctx, g.about, before);
  }
}

void HsrpNode::handle_data(Context& ctx, Packet pkt, NodeId) {
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

std::optional<PathEntry> HsrpNode::trust_gate(Context& ctx, NodeId dest,
                                              const std::vector<PathEntry>& paths) {
  struct Cand {
    PathEntry p;
    trust::TrustClass cls;
    double fused;
  };
  std::vector<Cand> survivors;
  for (const PathEntry& p : paths) {
    const trust::TrustClass c = trust_->cls(p.next_hop);
    if (c == trust::TrustClass::bad) continue;
    survivors.push_back({p, c, trust_->fused(p.next_hop)});
  }
  if (survivors.empty()) return std::nullopt;
  std::sort(survivors.begin(), survivors.end(), [](const Cand& a, const Cand& b) {
    const bool a_good = a.cls == trust::TrustClass::good;
    const bool b_good = b.cls == trust::TrustClass::good;
    if (a_good != b_good) return a_good;
    if (a.p.hop_count != b.p.hop_count) return a.p.hop_count < b.p.hop_count;
    if (a.fused != b.fused) return a.fused > b.fused;
    return a.p.next_hop < b.p.next_hop;
  });
  const Cand& pick = survivors.front();
  ctx.trace().eventf(ctx.now(), "select", "node=%u dest=%u nh=%u cls=%s hops=%u fused=%.6f",
                     self_, dest, pick.p.next_hop, trust::trust_class_name(pick.cls),
                     pick.p.hop_count, pick.fused);
  return pick.p;
}

void HsrpNode::forward_data(Context& ctx, Packet pkt) {
  const sim::SimTime now = ctx.now();
  const DataMsg& m = pkt.data();

  const std::vector<PathEntry> paths = table_.usable_paths(m.dst, now);
  if (!paths.empty()) {
    const std::optional<PathEntry> pick = trust_gate(ctx, m.dst, paths);
    if (pick) {
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
      table_.refresh_path(m.dst, pick->next_hop, pick->dest_seq,
                          now + cfg_.active_route_lifetime);
      const NodeId nh = pick->next_hop;
      const std::uint64_t uid = pkt.uid;
      pkt.data().ttl -= 1;
      ctx.unicast(nh, pkt);
      if (nh != m.dst) ctx.watch_forwarding(nh, uid);
      return;
    }
    // Every stored path runs through a distrusted neighbor; scrap them so
    // a fresh discovery is allowed to rebuild the set.
    for (const PathEntry& p : paths) {
      if (table_.invalidate_path(m.dst, p.next_hop)) {
        ctx.trace().eventf(now, "route", "node=%u dest=%u op=inval nh=%u hops=%u seq=%u",
                           self_, m.dst, p.next_hop, p.hop_count, p.dest_seq);
      }
    }
  }

  if (m.src == self_) {
    const NodeId dst = m.dst;
    if (auto evicted = buffer_.push(std::move(pkt))) {
      ctx.metrics().on_data_dropped(evicted->uid, metrics::DropReason::buffer_evict);
      ctx.trace().eventf(now, "drop", "node=%u kind=data uid=%llu reason=buffer_evict",
                         self_, static_cast<unsigned long long>(evicted->uid));
    }
    if (!discoveries_.count(dst)) start_discovery(ctx, dst);
    return;
  }

  ctx.metrics().on_data_dropped(pkt.uid, metrics::DropReason::no_route);
  ctx.trace().eventf(now, "drop", "node=%u kind=data uid=%llu reason=no_route", self_,
                     static_cast<unsigned long long>(pkt.uid));
  send_rerr(ctx, {{m.dst, table_.last_known_seq(m.dst, now).value_or(0)}});
}

void HsrpNode::originate(Context& ctx, FlowId flow, std::uint32_t seq_in_flow,
                         NodeId dst, std::uint32_t payload_bytes) {
  const sim::SimTime now = ctx.now();
  last_time_ = now;
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

void HsrpNode::start_discovery(Context& ctx, NodeId dest) {
  if (table_.has_usable(dest, ctx.now())) return;
  Discovery d;
  d.retries_left = cfg_.rreq_retries;
  d.attempt = 0;
  discoveries_[dest] = d;
  send_rreq(ctx, dest);
}

void HsrpNode::send_rreq(Context& ctx, NodeId dest) {
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
  const std::optional<std::uint32_t> known = table_.last_known_seq(dest, now);
  m.dest_seq_known = known.value_or(table_.required_seq(dest));
  m.dest_seq_valid = known.has_value() || table_.required_seq(dest) > 0;
  m.hop_count = 0;
  m.ttl = cfg_.rreq_ttl;
  pkt.body = m;
  sign_origin(ctx, pkt);

  seen_.seen_or_insert(m.id, now);
  ctx.broadcast(pkt);

  const Discovery& d = discoveries_[dest];
  const std::uint64_t backoff = cfg_.rreq_retry_base.us << d.attempt;
  ctx.schedule_in(sim::SimTime{backoff},
                  [this, &ctx, dest] { discovery_timeout(ctx, dest); });
}

void HsrpNode::discovery_timeout(Context& ctx, NodeId dest) {
  auto it = discoveries_.find(dest);
  if (it == discoveries_.end()) return;
  if (table_.has_usable(dest, ctx.now())) {
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

void HsrpNode::flush_buffer(Context& ctx, NodeId dest) {
  for (Packet& p : buffer_.take_for(dest)) forward_data(ctx, std::move(p));
}

void HsrpNode::link_loss(Context& ctx, NodeId neighbor) {
  const sim::SimTime now = ctx.now();
  std::vector<RerrMsg::Unreachable> dead;
  for (const auto& [dest, seq] : table_.invalidate_via(neighbor)) {
    ctx.trace().eventf(now, "route", "node=%u dest=%u op=inval nh=%u hops=0 seq=%u",
                       self_, dest, neighbor, seq);
    if (table_.path_count(dest) == 0) dead.push_back({dest, seq});
  }
  if (!dead.empty()) send_rerr(ctx, dead);
}

void HsrpNode::send_rerr(Context& ctx, const std::vector<RerrMsg::Unreachable>& lost) {
  Packet pkt;
  pkt.kind = PacketKind::rerr;
  pkt.uid = ctx.new_uid();
  RerrMsg m;
  m.unreachable = lost;
  pkt.body = std::move(m);
  ctx.broadcast(pkt);
}

void HsrpNode::penalize(Context& ctx, NodeId offender, bool gossip_zero) {
  if (offender == self_ || offender == kNoNode) return;
  const trust::TrustClass before = trust_->cls(offender);
  trust_->record_interaction(offender, trust::Outcome::failure);
  note_class_change(ctx, offender, before);
  if (gossip_zero && outbox_.size() < kGossipOutboxCap) {
    TrustGossip g;
    g.kind = 0;
    g.about = offender;
    g.score = 0.0;
    outbox_.push_back(g);
  }
}

void HsrpNode::note_class_change(Context& ctx, NodeId peer, trust::TrustClass before) {
  const trust::TrustClass after = trust_->cls(peer);
  if (after == before) return;
  ctx.trace().eventf(ctx.now(), "trust", "node=%u peer=%u fused=%.6f cls=%s", self_,
                     peer, trust_->fused(peer), trust::trust_class_name(after));
}

void HsrpNode::on_watch_result(Context& ctx, NodeId next_hop, std::uint64_t uid,
                               bool forwarded) {
  const sim::SimTime now = ctx.now();
  last_time_ = now;
  ctx.trace().eventf(now, "watch", "node=%u peer=%u uid=%llu ok=%d", self_, next_hop,
                     static_cast<unsigned long long>(uid), forwarded ? 1 : 0);
  const trust::TrustClass before = trust_->cls(next_hop);
  trust_->record_interaction(
      next_hop, forwarded ? trust::Outcome::success : trust::Outcome::failure);
  note_class_change(ctx, next_hop, before);
  if (forwarded) return;

  auto [it, inserted] = links_.try_emplace(
      next_hop, cfg_.bypass_threshold, cfg_.bypass_window);
  it->second.record_bypass(now);
  if (it->second.label(now) == trust::LinkLabel::weak) {
    it->second.clear();
    link_loss(ctx, next_hop);
  }
}

bool HsrpNode::has_valid_route(NodeId dest) const {
  return table_.has_usable(dest, last_time_);
}

std::optional<std::uint32_t> HsrpNode::route_hops(NodeId dest) const {
  const std::vector<PathEntry> paths = table_.usable_paths(dest, last_time_);
  if (paths.empty()) return std::nullopt;
  return paths.front().hop_count;
}

std::optional<NodeId> HsrpNode::route_next_hop(NodeId dest) const {
  const std::vector<PathEntry> paths = table_.usable_paths(dest, last_time_);
  if (paths.empty()) return std::nullopt;
  return paths.front().next_hop;
}

}  // namespace manet::routing
