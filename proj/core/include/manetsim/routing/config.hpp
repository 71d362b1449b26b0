#pragma once

#include <cstdint>

#include "manetsim/sim/time.hpp"
#include "manetsim/trust/trust.hpp"

namespace manet::routing {

/// Every tunable the protocols read, in one place, with the defaults the
/// bundled scenarios assume. Scenario files may override any field by
/// name; nothing below is read from anywhere else.
struct ProtocolConfig {
  // Reactive discovery.
  std::uint32_t rreq_ttl = 35;
  std::uint32_t rreq_retries = 2;
  sim::SimTime rreq_retry_base = sim::SimTime::seconds(1.0);  // doubles per retry
  sim::SimTime active_route_lifetime = sim::SimTime::seconds(10.0);
  sim::SimTime seen_cache_retention = sim::SimTime::seconds(30.0);
  std::uint32_t buffer_capacity = 64;
  std::uint32_t data_ttl = 64;

  // Neighborhood beaconing.
  sim::SimTime hello_interval = sim::SimTime::seconds(1.0);
  std::uint32_t hello_loss_limit = 3;

  // Multipath maintenance.
  std::uint32_t max_paths = 3;
  sim::SimTime update_interval = sim::SimTime::seconds(2.0);

  // Authentication and attack screening.
  bool signatures_enabled = true;
  bool allow_insecure_fallback = false;
  std::uint32_t seq_jump_max = 50;  // RREP dest_seq plausibility bound
  double flood_bucket_capacity = 10.0;
  double flood_refill_per_s = 10.0;

  // Watchdog and trust.
  sim::SimTime watchdog_deadline = sim::SimTime::millis(500);
  trust::TrustWeights trust_weights;
  std::uint32_t report_window = 20;
  std::uint32_t bypass_threshold = 5;
  sim::SimTime bypass_window = sim::SimTime::seconds(10.0);
  sim::SimTime recommendation_interval = sim::SimTime::seconds(5.0);
  std::uint32_t gossip_per_hello = 8;
};

}  // namespace manet::routing
