#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace manet {

using NodeId = std::uint32_t;
using FlowId = std::uint32_t;
using Bytes = std::vector<std::uint8_t>;

/// Sentinel meaning "no node".
inline constexpr NodeId kNoNode = 0xFFFFFFFFu;

/// Reserved id that never maps to a real node. Flooding attackers direct
/// route requests here so that no discovery can ever complete.
inline constexpr NodeId kPhantomDest = 0xFFFFFFFEu;

enum class Protocol : std::uint8_t { aodv, hsrp };

inline const char* protocol_name(Protocol p) {
  return p == Protocol::aodv ? "aodv" : "hsrp";
}

}  // namespace manet
