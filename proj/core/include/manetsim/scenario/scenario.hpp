#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manetsim/adversary/adversary.hpp"
#include "manetsim/mobility/channel.hpp"
#include "manetsim/mobility/mobility.hpp"
#include "manetsim/routing/config.hpp"
#include "manetsim/types.hpp"

namespace manet::scenario {

/// One constant-bit-rate flow. Endpoints must be honest nodes.
struct FlowSpec {
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  std::uint32_t packet_bytes = 512;
  double rate_pps = 2.5;
};

/// Traffic description. When `flows` is empty the runner draws
/// `flow_count` random honest source/destination pairs per run seed,
/// using `packet_bytes` and `data_rate_pps` for all of them.
struct TrafficSpec {
  std::uint32_t flow_count = 10;
  std::uint32_t packet_bytes = 512;
  double data_rate_pps = 2.5;
  std::vector<FlowSpec> flows;
};

/// Explicit attacker placement: this node runs this profile.
struct AttackSpec {
  NodeId node = kNoNode;
  adversary::AttackProfile profile;
};

/// Placement rule used when no explicit attacks are listed and attacks
/// are toggled on: `count` uniformly drawn nodes all run `profile`.
struct AutoAttack {
  std::uint32_t count = 5;
  adversary::AttackProfile profile;
};

/// Everything a run needs besides the seed. Loaded from a JSON file
/// (schema in docs/scenario-format.md, unknown keys rejected) and
/// validated against the invariants listed there.
struct Scenario {
  std::string name;
  std::uint32_t nodes = 50;
  mobility::Area area{700.0, 700.0};
  mobility::SpeedRange speed{0.0, 10.0};
  double pause_s = 2.0;
  double duration_s = 60.0;
  std::uint64_t master_seed = 1;
  Protocol protocol = Protocol::aodv;
  TrafficSpec traffic;
  std::vector<AttackSpec> attacks;
  AutoAttack auto_attack;
  mobility::ChannelConfig channel;
  std::vector<mobility::JamRegion> jam_regions;
  routing::ProtocolConfig protocol_config;

  // Optional parameter sweep axes; each combination becomes a variant.
  std::vector<std::uint32_t> sweep_nodes;
  std::vector<double> sweep_speeds;

  bool is_sweep() const { return !sweep_nodes.empty() || !sweep_speeds.empty(); }
};

/// Parses scenario JSON. `fallback_name` is used when the file does not
/// name itself. Throws ParseError on malformed input or unknown keys.
/// Parsing alone does not validate cross-field invariants.
Scenario parse_scenario(const std::string& text, const std::string& fallback_name);

/// Reads, parses, and validates a scenario file (every sweep variant is
/// validated). Throws ParseError or ValidationError.
Scenario load_scenario(const std::string& path);

/// Canonical JSON form, suitable for reload. load(serialize(s)) yields
/// an equal structure; serialize is a fixed point after one round trip.
std::string serialize_scenario(const Scenario& s);

/// Checks the documented invariants for one concrete (non-sweep)
/// scenario. Throws ValidationError naming the violated invariant.
void validate_scenario(const Scenario& s);

/// Expands sweep axes into concrete variants (name suffixed _n<N>_v<V>);
/// a non-sweep scenario expands to itself. Variants are not validated
/// here.
std::vector<Scenario> expand_variants(const Scenario& s);

}  // namespace manet::scenario
