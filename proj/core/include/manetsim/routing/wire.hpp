#pragma once

#include "manetsim/routing/packet.hpp"
#include "manetsim/types.hpp"

namespace manet::routing {

// Big-endian primitive writers shared by the wire and signing layers.
void put_u8(Bytes& out, std::uint8_t v);
void put_u16(Bytes& out, std::uint16_t v);
void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);

/// Bytes a signature chain commits to: the packet kind tag and every
/// field frozen at origination. Mutable-in-flight fields (hop counts,
/// TTLs) and the growing hop list are excluded so honest forwarding does
/// not break earlier signatures; the chain binds the hop list separately
/// by signing the signer-id prefix at each position. Field order is
/// fixed and documented in docs/wire-format.md.
Bytes canonical_bytes(const Packet& pkt);

/// Full wire encoding including mutable fields and the signature chain.
/// The simulator passes packets in memory; this exists so traces and
/// dumps are decodable and is exercised as the documented layout.
Bytes serialize_packet(const Packet& pkt);

/// Inverse of serialize_packet. Throws ParseError on malformed input.
Packet parse_packet(const Bytes& wire);

}  // namespace manet::routing
