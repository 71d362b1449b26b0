#include "manetsim/routing/wire.hpp"

#include <bit>
#include <cstring>

#include "manetsim/error.hpp"

namespace manet::routing {

void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (24 - 8 * i)));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (56 - 8 * i)));
}

namespace {

void put_f64(Bytes& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  explicit Reader(const Bytes& b) : b_(b) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    const std::uint8_t* p = take(2);
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
  }
  std::uint32_t u32() {
    const std::uint8_t* p = take(4);
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
           (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
  }
  std::uint64_t u64() {
    std::uint64_t hi = u32();
    return (hi << 32) | u32();
  }
  double f64() { return std::bit_cast<double>(u64()); }
  Bytes blob(std::size_t n) {
    const std::uint8_t* p = take(n);
    return Bytes(p, p + n);
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  const std::uint8_t* take(std::size_t n) {
    if (pos_ + n > b_.size()) throw ParseError("packet truncated");
    const std::uint8_t* p = b_.data() + pos_;
    pos_ += n;
    return p;
  }
  const Bytes& b_;
  std::size_t pos_ = 0;
};

void put_canonical_body(Bytes& out, const Packet& pkt) {
  put_u8(out, static_cast<std::uint8_t>(pkt.kind));
  switch (pkt.kind) {
    case PacketKind::rreq: {
      const auto& m = pkt.rreq();
      put_u32(out, m.id.origin);
      put_u32(out, m.id.counter);
      put_u32(out, m.origin_seq);
      put_u32(out, m.dest);
      put_u32(out, m.dest_seq_known);
      put_u8(out, m.dest_seq_valid ? 1 : 0);
      break;
    }
    case PacketKind::rrep: {
      const auto& m = pkt.rrep();
      put_u32(out, m.origin);
      put_u32(out, m.dest);
      put_u32(out, m.dest_seq);
      put_u64(out, m.lifetime.us);
      break;
    }
    case PacketKind::rerr: {
      const auto& m = pkt.rerr();
      put_u16(out, static_cast<std::uint16_t>(m.unreachable.size()));
      for (const auto& u : m.unreachable) {
        put_u32(out, u.dest);
        put_u32(out, u.dest_seq);
      }
      break;
    }
    case PacketKind::hello: {
      const auto& m = pkt.hello();
      put_u32(out, m.seq);
      put_u16(out, static_cast<std::uint16_t>(m.gossip.size()));
      for (const auto& g : m.gossip) {
        put_u8(out, g.kind);
        put_u32(out, g.about);
        put_f64(out, g.score);
      }
      break;
    }
    case PacketKind::update: {
      const auto& m = pkt.update();
      put_u32(out, m.issuer);
      put_u32(out, m.counter);
      put_u32(out, m.about_dest);
      put_u32(out, m.dest_seq);
      put_u32(out, m.advertised_hops);
      put_u64(out, m.issued_at.us);
      break;
    }
    case PacketKind::data: {
      const auto& m = pkt.data();
      put_u32(out, m.flow);
      put_u32(out, m.seq_in_flow);
      put_u32(out, m.src);
      put_u32(out, m.dst);
      put_u32(out, m.payload_bytes);
      put_u64(out, m.originated_at.us);
      break;
    }
  }
}

void put_mutable_fields(Bytes& out, const Packet& pkt) {
  switch (pkt.kind) {
    case PacketKind::rreq:
      put_u32(out, pkt.rreq().hop_count);
      put_u32(out, pkt.rreq().ttl);
      break;
    case PacketKind::rrep:
      put_u32(out, pkt.rrep().hop_count);
      break;
    case PacketKind::data:
      put_u32(out, pkt.data().ttl);
      break;
    default:
      break;
  }
}

}  // namespace

Bytes canonical_bytes(const Packet& pkt) {
  // Only fields frozen at origination. The hop list grows at each forwarder,
  // so it stays out of the signed image; the signature chain binds it
  // instead (entry i signs these bytes plus the signer ids through i).
  Bytes out;
  put_canonical_body(out, pkt);
  return out;
}

Bytes serialize_packet(const Packet& pkt) {
  Bytes out;
  put_u64(out, pkt.uid);
  put_canonical_body(out, pkt);
  put_mutable_fields(out, pkt);
  if (pkt.signed_ext) {
    put_u8(out, 1);
    put_u16(out, static_cast<std::uint16_t>(pkt.signed_ext->hop_list.size()));
    for (NodeId n : pkt.signed_ext->hop_list) put_u32(out, n);
    const Bytes cb = crypto::chain_bytes(pkt.signed_ext->chain);
    out.insert(out.end(), cb.begin(), cb.end());
  } else {
    put_u8(out, 0);
  }
  return out;
}

Packet parse_packet(const Bytes& wire) {
  Reader r(wire);
  Packet pkt;
  pkt.uid = r.u64();
  const std::uint8_t kind = r.u8();
  if (kind < 1 || kind > 6) throw ParseError("unknown packet kind");
  pkt.kind = static_cast<PacketKind>(kind);
  switch (pkt.kind) {
    case PacketKind::rreq: {
      RreqMsg m;
      m.id.origin = r.u32();
      m.id.counter = r.u32();
      m.origin_seq = r.u32();
      m.dest = r.u32();
      m.dest_seq_known = r.u32();
      m.dest_seq_valid = r.u8() != 0;
      m.hop_count = r.u32();
      m.ttl = r.u32();
      pkt.body = m;
      break;
    }
    case PacketKind::rrep: {
      RrepMsg m;
      m.origin = r.u32();
      m.dest = r.u32();
      m.dest_seq = r.u32();
      m.lifetime = sim::SimTime{r.u64()};
      m.hop_count = r.u32();
      pkt.body = m;
      break;
    }
    case PacketKind::rerr: {
      RerrMsg m;
      const std::uint16_t n = r.u16();
      for (std::uint16_t i = 0; i < n; ++i) {
        RerrMsg::Unreachable u;
        u.dest = r.u32();
        u.dest_seq = r.u32();
        m.unreachable.push_back(u);
      }
      pkt.body = m;
      break;
    }
    case PacketKind::hello: {
      HelloMsg m;
      m.seq = r.u32();
      const std::uint16_t n = r.u16();
      for (std::uint16_t i = 0; i < n; ++i) {
        TrustGossip g;
        g.kind = r.u8();
        g.about = r.u32();
        g.score = r.f64();
        m.gossip.push_back(g);
      }
      pkt.body = m;
      break;
    }
    case PacketKind::update: {
      UpdateMsg m;
      m.issuer = r.u32();
      m.counter = r.u32();
      m.about_dest = r.u32();
      m.dest_seq = r.u32();
      m.advertised_hops = r.u32();
      m.issued_at = sim::SimTime{r.u64()};
      pkt.body = m;
      break;
    }
    case PacketKind::data: {
      DataMsg m;
      m.flow = r.u32();
      m.seq_in_flow = r.u32();
      m.src = r.u32();
      m.dst = r.u32();
      m.payload_bytes = r.u32();
      m.originated_at = sim::SimTime{r.u64()};
      m.ttl = r.u32();
      pkt.body = m;
      break;
    }
  }
  if (r.u8() != 0) {
    SignedExt ext;
    const std::uint16_t hops = r.u16();
    for (std::uint16_t i = 0; i < hops; ++i) ext.hop_list.push_back(r.u32());
    const std::uint16_t entries = r.u16();
    for (std::uint16_t i = 0; i < entries; ++i) {
      crypto::MultiSigEntry e;
      e.signer = r.u32();
      e.sig = r.blob(r.u16());
      ext.chain.entries.push_back(std::move(e));
    }
    pkt.signed_ext = std::move(ext);
  }
  if (!r.done()) throw ParseError("trailing bytes after packet");
  return pkt;
}

const char* packet_kind_name(PacketKind k) {
  switch (k) {
    case PacketKind::rreq: return "rreq";
    case PacketKind::rrep: return "rrep";
    case PacketKind::rerr: return "rerr";
    case PacketKind::hello: return "hello";
    case PacketKind::update: return "upd";
    case PacketKind::data: return "data";
  }
  return "?";
}

}  // namespace manet::routing
