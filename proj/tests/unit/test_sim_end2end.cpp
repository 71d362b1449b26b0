#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "manetsim/metrics/metrics.hpp"
#include "manetsim/metrics/trace.hpp"
#include "manetsim/scenario/simulation.hpp"
#include "manetsim/scenario/verify.hpp"

using namespace manet;
using namespace manet::scenario;
using manet::sim::SimTime;

TEST_SUITE_BEGIN("sim_end2end");

namespace {

RunSpec small_spec(Protocol proto, bool attacks, std::uint64_t seed) {
  Scenario s = testers::base_scenario(12, 500.0, 20.0);
  s.traffic.flow_count = 4;
  s.auto_attack.count = 2;
  RunSpec spec;
  spec.scenario = s;
  spec.protocol = proto;
  spec.attacks_enabled = attacks;
  spec.seed = seed;
  return spec;
}

std::string run_traced(const RunSpec& spec, std::string* csv = nullptr) {
  Simulation sim(spec, metrics::TraceWriter::to_memory());
  const RunOutput out = sim.run();
  if (csv) *csv = metrics::csv_row(out.meta, out.report);
  return sim.trace().buffer();
}

}  // namespace

TEST_CASE("identical specs replay bit for bit") {
  for (Protocol proto : {Protocol::aodv, Protocol::hsrp}) {
    CAPTURE(protocol_name(proto));
    const RunSpec spec = small_spec(proto, true, 11);
    std::string csv1, csv2;
    const std::string t1 = run_traced(spec, &csv1);
    const std::string t2 = run_traced(spec, &csv2);
    CHECK(t1 == t2);
    CHECK(csv1 == csv2);
    CHECK(!t1.empty());
  }
}

TEST_CASE("different seeds give different runs") {
  const std::string t1 = run_traced(small_spec(Protocol::aodv, false, 1));
  const std::string t2 = run_traced(small_spec(Protocol::aodv, false, 2));
  CHECK(t1 != t2);
}

TEST_CASE("attack toggle changes behavior, not placement or traffic") {
  const RunSpec on = small_spec(Protocol::hsrp, true, 5);
  const RunSpec off = small_spec(Protocol::hsrp, false, 5);

  Simulation sim_on(on, metrics::TraceWriter::to_memory());
  Simulation sim_off(off, metrics::TraceWriter::to_memory());
  sim_on.start();
  sim_off.start();

  REQUIRE(sim_on.attacker_ids().size() == 2);
  CHECK(sim_on.attacker_ids() == sim_off.attacker_ids());

  REQUIRE(sim_on.flows().size() == 4);
  REQUIRE(sim_off.flows().size() == 4);
  for (std::size_t i = 0; i < sim_on.flows().size(); ++i) {
    CHECK(sim_on.flows()[i].src == sim_off.flows()[i].src);
    CHECK(sim_on.flows()[i].dst == sim_off.flows()[i].dst);
    CHECK(sim_on.flows()[i].packet_bytes == sim_off.flows()[i].packet_bytes);
    CHECK(sim_on.flows()[i].rate_pps == sim_off.flows()[i].rate_pps);
  }

  sim_on.finish();
  sim_off.finish();
  CHECK(sim_on.trace().buffer().find("ev=attacker") != std::string::npos);
  CHECK(sim_off.trace().buffer().find("ev=attacker") == std::string::npos);
}

TEST_CASE("injected packet crosses a single-hop mesh") {
  for (Protocol proto : {Protocol::aodv, Protocol::hsrp}) {
    CAPTURE(protocol_name(proto));
    Scenario s = testers::base_scenario(8, 200.0, 10.0);  // range 250: full mesh
    RunSpec spec;
    spec.scenario = s;
    spec.protocol = proto;
    spec.attacks_enabled = false;
    spec.seed = 3;

    Simulation sim(spec);
    sim.start();
    sim.run_to(SimTime::seconds(2.0));
    sim.inject(0, 7, 256);
    const RunOutput out = sim.finish();
    CHECK(out.report.originated == 1);
    CHECK(out.report.delivered == 1);
  }
}

TEST_CASE("runs conserve packets and satisfy the trace checker") {
  for (Protocol proto : {Protocol::aodv, Protocol::hsrp}) {
    for (bool attacks : {false, true}) {
      CAPTURE(protocol_name(proto));
      CAPTURE(attacks);
      std::string csv;
      const std::string trace =
          run_traced(small_spec(proto, attacks, 9), &csv);

      const VerifyResult v = verify_trace_text(trace);
      for (const std::string& p : v.problems) MESSAGE(p);
      CHECK(v.ok);
      CHECK(v.lines > 0);
    }
  }
}

TEST_CASE("report reconciles originated against delivered plus drops") {
  const RunSpec spec = small_spec(Protocol::hsrp, true, 21);
  Simulation sim(spec);
  const RunOutput out = sim.run();
  CHECK(out.report.originated == out.report.delivered + out.report.md);
  CHECK(sim.metrics().inconsistencies() == 0);
  CHECK(out.report.originated > 0);
}

TEST_SUITE_END();
