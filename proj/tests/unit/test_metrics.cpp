#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "manetsim/metrics/metrics.hpp"
#include "manetsim/sim/random.hpp"
#include "manetsim/sim/time.hpp"

using namespace manet;
using namespace manet::metrics;
using manet::sim::SimTime;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("every uid settles exactly once") {
  MetricsSink m;
  m.configure(4);
  m.on_data_originated(0, 1, 512);
  m.on_data_originated(0, 2, 512);
  m.on_data_originated(1, 3, 512);
  CHECK(m.outstanding() == 3);

  CHECK(m.on_data_delivered(0, 1, 512, SimTime::millis(10)));
  CHECK_FALSE(m.on_data_delivered(0, 1, 512, SimTime::millis(12)));  // dup arrival
  CHECK(m.inconsistencies() == 0);

  CHECK(m.on_data_dropped(2, DropReason::no_route));
  CHECK_FALSE(m.on_data_dropped(2, DropReason::ttl_expired));
  CHECK_FALSE(m.on_data_delivered(0, 2, 512, SimTime::millis(5)));  // already settled
  CHECK(m.inconsistencies() == 0);

  // A uid no one originated is a bookkeeping bug, not multipath noise.
  CHECK_FALSE(m.on_data_delivered(0, 99, 512, SimTime::millis(1)));
  CHECK(m.inconsistencies() == 1);
  CHECK_FALSE(m.on_data_dropped(98, DropReason::channel_loss));
  CHECK(m.inconsistencies() == 2);

  const MetricsReport r = m.finalize(SimTime::seconds(10.0));
  CHECK(r.originated == 3);
  CHECK(r.delivered == 1);
  CHECK(r.drops.at(DropReason::no_route) == 1);
  CHECK(r.drops.at(DropReason::end_of_run) == 1);  // uid 3 never settled
  CHECK(r.md == 2);
  CHECK(r.originated == r.delivered + r.md);
}

TEST_CASE("derived metrics match a hand accumulation") {
  MetricsSink m;
  m.configure(4);
  // Flow 0: delays 10ms, 30ms, 20ms. Flow 1: a single 40ms delivery.
  m.on_data_originated(0, 1, 100);
  m.on_data_originated(0, 2, 100);
  m.on_data_originated(0, 3, 100);
  m.on_data_originated(1, 4, 250);
  m.on_data_delivered(0, 1, 100, SimTime::millis(10));
  m.on_data_delivered(0, 2, 100, SimTime::millis(30));
  m.on_data_delivered(0, 3, 100, SimTime::millis(20));
  m.on_data_delivered(1, 4, 250, SimTime::millis(40));

  for (int i = 0; i < 6; ++i) m.on_control_tx(CtrlKind::rreq);
  for (int i = 0; i < 2; ++i) m.on_control_tx(CtrlKind::hello);

  const MetricsReport r = m.finalize(SimTime::seconds(5.0));
  CHECK(r.pdr == 1.0);
  // (3*100 + 250) bytes delivered over 5 s.
  CHECK(r.throughput_bps == doctest::Approx(550.0 * 8.0 / 5.0));
  CHECK(r.avg_delay_s == doctest::Approx((0.010 + 0.030 + 0.020 + 0.040) / 4.0));
  // Jitter: flow 0 contributes (|30-10| + |20-30|)/2 = 15ms, flow 1 has
  // a single sample and contributes nothing; mean over 1 flow.
  CHECK(r.jitter_s == doctest::Approx(0.015));
  CHECK(r.control_tx_total == 8);
  CHECK(r.overhead_ratio == doctest::Approx(8.0 / 4.0));
}

TEST_CASE("empty run divides by nothing") {
  MetricsSink m;
  m.configure(2);
  const MetricsReport r = m.finalize(SimTime::seconds(30.0));
  CHECK(r.originated == 0);
  CHECK(r.pdr == 0.0);
  CHECK(r.throughput_bps == 0.0);
  CHECK(r.avg_delay_s == 0.0);
  CHECK(r.jitter_s == 0.0);
  CHECK(r.overhead_ratio == 0.0);  // control 0 / max(delivered,1)
  CHECK(r.md == 0);
}

TEST_CASE("overhead charges control against max(delivered, 1)") {
  MetricsSink m;
  m.configure(2);
  for (int i = 0; i < 7; ++i) m.on_control_tx(CtrlKind::rerr);
  const MetricsReport r = m.finalize(SimTime::seconds(1.0));
  CHECK(r.delivered == 0);
  CHECK(r.overhead_ratio == 7.0);
}

TEST_CASE("flood counting is first sight per node per id") {
  MetricsSink m;
  m.configure(3);
  CHECK(m.on_rreq_sighted(0, 5, 1));
  CHECK(m.on_rreq_sighted(1, 5, 1));
  CHECK_FALSE(m.on_rreq_sighted(0, 5, 1));  // rebroadcast reaches node 0 again
  CHECK(m.on_rreq_sighted(0, 5, 2));        // new counter, same origin
  CHECK(m.on_rreq_sighted(2, 6, 1));
  CHECK(m.hf_total() == 4);
  CHECK(m.hf_of_node(0) == 2);
  CHECK(m.hf_of_node(1) == 1);

  CHECK(m.on_update_sighted(0, 7, 1));
  CHECK_FALSE(m.on_update_sighted(0, 7, 1));
  CHECK(m.hf_total() == 5);

  // Out-of-range node ids never count.
  CHECK_FALSE(m.on_rreq_sighted(99, 5, 9));
  CHECK(m.hf_total() == 5);
}

TEST_CASE("randomized settlement ledger stays balanced") {
  sim::RandomStream rng(sim::RandomStream::stream_key(77, "metrics-prop"));
  MetricsSink m;
  m.configure(2);

  std::uint64_t want_orig = 0, want_deliv = 0, want_bits = 0;
  std::map<DropReason, std::uint64_t> want_drops;
  std::uint64_t outstanding_left = 0;

  for (std::uint64_t uid = 1; uid <= 500; ++uid) {
    const std::uint32_t bytes = 64 + rng.below(1000);
    m.on_data_originated(0, uid, bytes);
    ++want_orig;
    const std::uint64_t fate = rng.below(4);
    if (fate == 0) {
      m.on_data_delivered(0, uid, bytes, SimTime::millis(1 + rng.below(100)));
      ++want_deliv;
      want_bits += std::uint64_t{bytes} * 8;
    } else if (fate == 1) {
      m.on_data_dropped(uid, DropReason::channel_loss);
      ++want_drops[DropReason::channel_loss];
    } else if (fate == 2) {
      m.on_data_dropped(uid, DropReason::ttl_expired);
      ++want_drops[DropReason::ttl_expired];
    } else {
      ++outstanding_left;  // settles at finalize
    }
  }

  CHECK(m.outstanding() == outstanding_left);
  const MetricsReport r = m.finalize(SimTime::seconds(100.0));
  CHECK(r.originated == want_orig);
  CHECK(r.delivered == want_deliv);
  CHECK(r.throughput_bps == doctest::Approx(static_cast<double>(want_bits) / 100.0));
  for (const auto& [reason, n] : want_drops) CHECK(r.drops.at(reason) == n);
  CHECK(r.drops.at(DropReason::end_of_run) == outstanding_left);
  CHECK(r.originated == r.delivered + r.md);
  CHECK(m.inconsistencies() == 0);
}

TEST_CASE("csv schema is pinned") {
  CHECK(csv_header() ==
        "scenario,protocol,attack,seed,nodes,area_w,area_h,max_speed,duration_s,"
        "pdr,throughput_bps,avg_delay_s,jitter_s,overhead_ratio,hf,md,"
        "rreq,rrep,rerr,proactive,hello");

  MetricsSink m;
  m.configure(3);
  m.on_data_originated(0, 1, 512);
  m.on_data_originated(0, 2, 512);
  m.on_data_originated(0, 3, 512);
  m.on_data_originated(0, 4, 512);
  m.on_data_delivered(0, 1, 512, SimTime::millis(10));
  m.on_data_delivered(0, 2, 512, SimTime::millis(30));
  m.on_data_dropped(3, DropReason::no_route);
  for (int i = 0; i < 3; ++i) m.on_control_tx(CtrlKind::rreq);
  for (int i = 0; i < 2; ++i) m.on_control_tx(CtrlKind::rrep);
  m.on_control_tx(CtrlKind::rerr);
  for (int i = 0; i < 4; ++i) m.on_control_tx(CtrlKind::update);
  for (int i = 0; i < 5; ++i) m.on_control_tx(CtrlKind::hello);
  m.on_rreq_sighted(0, 0, 1);
  m.on_rreq_sighted(1, 0, 1);
  m.on_update_sighted(2, 5, 9);

  RunMeta meta;
  meta.scenario = "alpha";
  meta.protocol = Protocol::aodv;
  meta.attack = true;
  meta.seed = 7;
  meta.nodes = 25;
  meta.area_w = 500.0;
  meta.area_h = 600.0;
  meta.max_speed = 10.0;
  meta.duration_s = 60.0;

  const MetricsReport r = m.finalize(SimTime::seconds(60.0));
  // pdr 2/4; throughput 2*512*8/60; delay mean(10ms,30ms); jitter 20ms over
  // one eligible flow; overhead 15/2; hf 3; md = 1 drop + 1 end_of_run.
  CHECK(csv_row(meta, r) ==
        "alpha,aodv,on,7,25,500.0,600.0,10.0,60.0,"
        "0.500000,136.533,0.020000,0.020000,7.500000,3,2,"
        "3,2,1,4,5");
}

TEST_SUITE_END();
