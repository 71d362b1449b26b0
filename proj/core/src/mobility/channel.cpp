#include "manetsim/mobility/channel.hpp"

namespace manet::mobility {
namespace {

bool inside_any(const std::vector<JamRegion>& jams, Position p) {
  for (const auto& j : jams) {
    if (distance(j.center, p) <= j.radius) return true;
  }
  return false;
}

}  // namespace

std::vector<Delivery> transmit(const ChannelConfig& cfg,
                               const std::vector<JamRegion>& active_jams,
                               sim::SimTime now, Position sender,
                               const std::vector<Candidate>& candidates,
                               sim::RandomStream& rng) {
  std::vector<Delivery> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    Delivery d;
    d.receiver = c.node;
    if (distance(sender, c.pos) > cfg.range_m) {
      d.loss = LossReason::out_of_range;
    } else if (inside_any(active_jams, c.pos)) {
      d.loss = LossReason::jammed;
    } else if (cfg.loss_probability > 0.0 && rng.next_double() < cfg.loss_probability) {
      d.loss = LossReason::random_loss;
    } else {
      d.delivered = true;
      const double jitter_s = cfg.jitter_bound.us == 0
                                  ? 0.0
                                  : rng.uniform(0.0, cfg.jitter_bound.as_seconds());
      d.arrive_at = now + cfg.base_delay + sim::SimTime::seconds(jitter_s);
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace manet::mobility
