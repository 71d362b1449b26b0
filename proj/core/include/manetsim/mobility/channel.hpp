#pragma once

#include <vector>

#include "manetsim/mobility/mobility.hpp"
#include "manetsim/sim/random.hpp"
#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::mobility {

/// Circular region in which every reception fails while the region is
/// active. A jamming attacker owns one of these; regions without an
/// owner are environmental and always on.
struct JamRegion {
  Position center;
  double radius = 0.0;
};

struct ChannelConfig {
  double range_m = 250.0;
  double loss_probability = 0.0;
  sim::SimTime base_delay = sim::SimTime::millis(2);
  sim::SimTime jitter_bound = sim::SimTime::millis(1);
};

enum class LossReason : std::uint8_t { none, out_of_range, jammed, random_loss };

struct Delivery {
  NodeId receiver = kNoNode;
  bool delivered = false;
  sim::SimTime arrive_at{};
  LossReason loss = LossReason::none;
};

struct Candidate {
  NodeId node = kNoNode;
  Position pos;
};

/// One broadcast transmission. Loss is drawn independently per receiver,
/// in candidate order, so callers must present candidates in a canonical
/// (id-sorted) order for replays to match. Draw discipline per in-range,
/// un-jammed candidate: one loss draw (skipped when loss_probability is
/// zero); delivered receptions consume one further draw for jitter
/// (skipped when jitter_bound is zero). Jammed or out-of-range candidates
/// consume no draws. The channel never looks at packet contents.
std::vector<Delivery> transmit(const ChannelConfig& cfg,
                               const std::vector<JamRegion>& active_jams,
                               sim::SimTime now, Position sender,
                               const std::vector<Candidate>& candidates,
                               sim::RandomStream& rng);

}  // namespace manet::mobility
