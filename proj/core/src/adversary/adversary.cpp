#include "manetsim/adversary/adversary.hpp"

#include <algorithm>

#include "manetsim/crypto/multisig.hpp"
#include "manetsim/routing/wire.hpp"

namespace manet::adversary {

using routing::Packet;
using routing::PacketKind;

const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::blackhole: return "blackhole";
    case AttackKind::flooder: return "flooder";
    case AttackKind::sinkhole: return "sinkhole";
    case AttackKind::jammer: return "jammer";
  }
  return "?";
}

std::uint32_t SinkholeOverrides::advertised_hops(std::uint32_t honest, sim::SimTime now) {
  if (!profile_.active_at(now) || honest == 0) return honest;
  return std::max(honest - 1, 1u);
}

std::uint32_t SinkholeOverrides::advertised_seq(std::uint32_t honest, sim::SimTime now) {
  if (!profile_.active_at(now)) return honest;
  return honest + 1;
}

bool SinkholeOverrides::answer_from_cache_eagerly(sim::SimTime now) {
  return profile_.active_at(now);
}

bool SinkholeOverrides::swallow_data(const routing::Packet&, sim::SimTime now,
                                     sim::RandomStream& rng) {
  if (!profile_.active_at(now)) return false;
  if (profile_.drop_fraction <= 0.0) return false;
  if (profile_.drop_fraction >= 1.0) return true;
  return rng.next_double() < profile_.drop_fraction;
}

MaliciousNode::MaliciousNode(std::unique_ptr<routing::ProtocolNode> inner,
                             AttackProfile profile)
    : inner_(std::move(inner)), profile_(profile) {
  if (profile_.kind == AttackKind::sinkhole) {
    sink_overrides_ = std::make_unique<SinkholeOverrides>(profile_);
    inner_->set_overrides(sink_overrides_.get());
  }
}

void MaliciousNode::start(routing::Context& ctx) {
  inner_->start(ctx);
  if (profile_.kind == AttackKind::flooder && profile_.flood_rate_per_s > 0.0) {
    schedule_flood(ctx);
  }
}

void MaliciousNode::schedule_flood(routing::Context& ctx) {
  const sim::SimTime now = ctx.now();
  if (now >= profile_.active_until) return;
  const double gap_s = ctx.rng().exponential(profile_.flood_rate_per_s);
  sim::SimTime at = std::max(now, profile_.active_from) + sim::SimTime::seconds(gap_s);
  if (at >= profile_.active_until) return;
  ctx.schedule_in(at - now, [this, &ctx] { flood_once(ctx); });
}

void MaliciousNode::flood_once(routing::Context& ctx) {
  const sim::SimTime now = ctx.now();
  if (profile_.active_at(now)) {
    Packet pkt;
    pkt.kind = PacketKind::rreq;
    pkt.uid = ctx.new_uid();
    routing::RreqMsg m;
    m.id = routing::RreqId{ctx.self(), ++flood_counter_};
    m.origin_seq = ++flood_seq_;
    m.dest = profile_.flood_target;
    m.dest_seq_known = 0;
    m.dest_seq_valid = false;
    m.hop_count = 0;
    m.ttl = ctx.config().rreq_ttl;
    pkt.body = m;
    if (ctx.config().signatures_enabled && ctx.private_key() != nullptr &&
        ctx.signature_scheme() != nullptr) {
      routing::SignedExt ext;
      ext.hop_list.push_back(ctx.self());
      ext.chain = crypto::chain_append({}, ctx.self(), *ctx.private_key(),
                                       routing::canonical_bytes(pkt),
                                       *ctx.signature_scheme());
      pkt.signed_ext = std::move(ext);
    }
    ctx.trace().eventf(now, "attack", "node=%u what=flood ctr=%u", ctx.self(),
                       flood_counter_);
    ctx.broadcast(pkt);
  }
  schedule_flood(ctx);
}

void MaliciousNode::note_seq(NodeId dest, std::uint32_t seq) {
  auto [it, inserted] = best_seen_.try_emplace(dest, seq);
  if (!inserted && seq > it->second) it->second = seq;
}

void MaliciousNode::forge_reply(routing::Context& ctx, const routing::RreqMsg& m,
                                NodeId from) {
  const sim::SimTime now = ctx.now();
  Packet rep;
  rep.kind = PacketKind::rrep;
  rep.uid = ctx.new_uid();
  routing::RrepMsg r;
  r.origin = m.id.origin;
  r.dest = m.dest;
  r.dest_seq = best_seen_[m.dest] + profile_.seq_inflation;
  r.hop_count = 1;
  r.lifetime = ctx.config().active_route_lifetime;
  rep.body = r;

  const NodeId claimed = profile_.masquerade_as.value_or(ctx.self());
  if (ctx.config().signatures_enabled && ctx.private_key() != nullptr &&
      ctx.signature_scheme() != nullptr) {
    // Signs with its own (valid) key; a masquerading variant stamps the
    // victim's id instead, which chain verification then rejects.
    routing::SignedExt ext;
    ext.hop_list.push_back(claimed);
    ext.chain = crypto::chain_append({}, claimed, *ctx.private_key(),
                                     routing::canonical_bytes(rep),
                                     *ctx.signature_scheme());
    rep.signed_ext = std::move(ext);
  } else if (profile_.masquerade_as) {
    routing::SignedExt ext;
    ext.hop_list.push_back(claimed);
    crypto::MultiSigEntry e;
    e.signer = claimed;
    ext.chain.entries.push_back(e);
    rep.signed_ext = std::move(ext);
  }

  ctx.trace().eventf(now, "attack", "node=%u what=forge_rrep dest=%u seq=%u to=%u",
                     ctx.self(), m.dest, r.dest_seq, from);
  ctx.unicast(from, rep);
}

void MaliciousNode::blackhole_receive(routing::Context& ctx, const Packet& pkt,
                                      NodeId from) {
  const sim::SimTime now = ctx.now();
  switch (pkt.kind) {
    case PacketKind::rreq: {
      const auto& m = pkt.rreq();
      if (m.id.origin == ctx.self()) return;
      const bool first = ctx.metrics().on_rreq_sighted(ctx.self(), m.id.origin,
                                                       m.id.counter);
      ctx.trace().eventf(now, "rxq", "node=%u origin=%u ctr=%u new=%d", ctx.self(),
                         m.id.origin, m.id.counter, first ? 1 : 0);
      note_seq(m.id.origin, m.origin_seq);
      if (m.dest_seq_valid) note_seq(m.dest, m.dest_seq_known);
      forge_reply(ctx, m, from);
      return;
    }
    case PacketKind::rrep: {
      const auto& m = pkt.rrep();
      note_seq(m.dest, m.dest_seq);
      return;  // never forwarded
    }
    case PacketKind::update: {
      const auto& m = pkt.update();
      if (m.issuer == ctx.self()) return;
      const bool first = ctx.metrics().on_update_sighted(ctx.self(), m.issuer, m.counter);
      ctx.trace().eventf(now, "rxu", "node=%u issuer=%u ctr=%u new=%d", ctx.self(),
                         m.issuer, m.counter, first ? 1 : 0);
      note_seq(m.about_dest, m.dest_seq);
      return;
    }
    case PacketKind::hello:
      inner_->receive(ctx, pkt, from);  // stay visibly alive
      return;
    case PacketKind::rerr:
      return;
    case PacketKind::data: {
      const auto& m = pkt.data();
      if (m.dst == ctx.self()) {
        inner_->receive(ctx, pkt, from);
        return;
      }
      ctx.metrics().on_data_dropped(pkt.uid, metrics::DropReason::attack_swallow);
      ctx.trace().eventf(now, "drop", "node=%u kind=data uid=%llu reason=attack_swallow",
                         ctx.self(), static_cast<unsigned long long>(pkt.uid));
      ctx.trace().eventf(now, "attack", "node=%u what=swallow uid=%llu", ctx.self(),
                         static_cast<unsigned long long>(pkt.uid));
      return;
    }
  }
}

void MaliciousNode::receive(routing::Context& ctx, const Packet& pkt, NodeId from) {
  if (profile_.kind == AttackKind::blackhole && profile_.active_at(ctx.now())) {
    blackhole_receive(ctx, pkt, from);
    return;
  }
  inner_->receive(ctx, pkt, from);
}

void MaliciousNode::originate(routing::Context& ctx, FlowId flow,
                              std::uint32_t seq_in_flow, NodeId dst,
                              std::uint32_t payload_bytes) {
  inner_->originate(ctx, flow, seq_in_flow, dst, payload_bytes);
}

void MaliciousNode::on_watch_result(routing::Context& ctx, NodeId next_hop,
                                    std::uint64_t uid, bool forwarded) {
  inner_->on_watch_result(ctx, next_hop, uid, forwarded);
}

void MaliciousNode::set_overrides(routing::BehaviorOverrides* o) {
  if (profile_.kind == AttackKind::sinkhole) return;  // profile owns the hooks
  inner_->set_overrides(o);
}

bool MaliciousNode::has_valid_route(NodeId dest) const {
  return inner_->has_valid_route(dest);
}

std::optional<std::uint32_t> MaliciousNode::route_hops(NodeId dest) const {
  return inner_->route_hops(dest);
}

std::optional<NodeId> MaliciousNode::route_next_hop(NodeId dest) const {
  return inner_->route_next_hop(dest);
}

}  // namespace manet::adversary
