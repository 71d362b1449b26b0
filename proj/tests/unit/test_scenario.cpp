#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "manetsim/error.hpp"
#include "manetsim/scenario/scenario.hpp"

using namespace manet;
using namespace manet::scenario;

TEST_SUITE_BEGIN("scenario");

TEST_CASE("empty object yields the documented defaults") {
  const Scenario s = parse_scenario("{}", "fallback");
  CHECK(s.name == "fallback");
  CHECK(s.nodes == 50);
  CHECK(s.area.width == 700.0);
  CHECK(s.area.height == 700.0);
  CHECK(s.speed.min_mps == 0.0);
  CHECK(s.speed.max_mps == 10.0);
  CHECK(s.pause_s == 2.0);
  CHECK(s.duration_s == 60.0);
  CHECK(s.master_seed == 1);
  CHECK(s.protocol == Protocol::aodv);
  CHECK(s.traffic.flow_count == 10);
  CHECK(s.traffic.packet_bytes == 512);
  CHECK(s.traffic.data_rate_pps == 2.5);
  CHECK(s.traffic.flows.empty());
  CHECK(s.attacks.empty());
  CHECK(s.auto_attack.count == 5);
  CHECK(s.auto_attack.profile.kind == adversary::AttackKind::blackhole);
  CHECK(s.channel.range_m == 250.0);
  CHECK(s.channel.loss_probability == 0.0);
  CHECK(s.channel.base_delay.us == 2000);
  CHECK(s.channel.jitter_bound.us == 1000);
  CHECK_FALSE(s.is_sweep());
  CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_scenario(R"({"nodez": 10})", "x"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"traffic": {"flowz": 1}})", "x"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"channel": {"range": 100}})", "x"), ParseError);
  CHECK_THROWS_AS(
      parse_scenario(R"({"protocol_overrides": {"rreq_tttl": 5}})", "x"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"attacks": [{"node": 0, "power": 9}]})", "x"),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario("[1,2]", "x"), ParseError);
  CHECK_THROWS_AS(parse_scenario("not json at all", "x"), ParseError);
}

TEST_CASE("type errors carry the field path") {
  try {
    parse_scenario(R"({"traffic": {"packet_bytes": "big"}})", "x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("traffic.packet_bytes") != std::string::npos);
  }
}

TEST_CASE("protocol overrides land in the config") {
  const char* text = R"({
    "protocol": "hsrp",
    "protocol_overrides": {
      "rreq_ttl": 12,
      "rreq_retries": 4,
      "hello_interval_s": 0.5,
      "max_paths": 5,
      "signatures_enabled": false,
      "seq_jump_max": 99,
      "flood_bucket_capacity": 3.0,
      "flood_refill_per_s": 1.5,
      "trust_w_engagement": 0.6,
      "trust_w_reputation": 0.25,
      "trust_w_recommendation": 0.15
    }
  })";
  const Scenario s = parse_scenario(text, "x");
  CHECK(s.protocol == Protocol::hsrp);
  const routing::ProtocolConfig& c = s.protocol_config;
  CHECK(c.rreq_ttl == 12);
  CHECK(c.rreq_retries == 4);
  CHECK(c.hello_interval.us == 500000);
  CHECK(c.max_paths == 5);
  CHECK_FALSE(c.signatures_enabled);
  CHECK(c.seq_jump_max == 99);
  CHECK(c.flood_bucket_capacity == 3.0);
  CHECK(c.flood_refill_per_s == 1.5);
  CHECK(c.trust_weights.engagement == 0.6);
  CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("flooders default to 20 packets per second") {
  const Scenario s = parse_scenario(
      R"({"attacks": [{"node": 3, "kind": "flooder", "target": "phantom"}]})", "x");
  REQUIRE(s.attacks.size() == 1);
  CHECK(s.attacks[0].profile.kind == adversary::AttackKind::flooder);
  CHECK(s.attacks[0].profile.flood_rate_per_s == 20.0);
  CHECK(s.attacks[0].profile.flood_target == kPhantomDest);

  const Scenario t = parse_scenario(
      R"({"attacks": [{"node": 3, "kind": "flooder", "rate_pps": 7.5, "target": 1}]})",
      "x");
  CHECK(t.attacks[0].profile.flood_rate_per_s == 7.5);
  CHECK(t.attacks[0].profile.flood_target == 1);
}

TEST_CASE("validation rejects the documented out-of-range shapes") {
  Scenario s = testers::base_scenario(10, 500.0, 20.0);

  SUBCASE("too few nodes") {
    s.nodes = 1;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("inverted speed range") {
    s.speed = {5.0, 2.0};
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("zero duration") {
    s.duration_s = 0.0;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("certain loss") {
    s.channel.loss_probability = 1.0;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("attacker outside the node set") {
    s.attacks.push_back({s.nodes, adversary::AttackProfile{}});
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("two profiles on one node") {
    s.attacks.push_back({2, adversary::AttackProfile{}});
    s.attacks.push_back({2, adversary::AttackProfile{}});
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("masquerading as oneself") {
    adversary::AttackProfile p;
    p.masquerade_as = 2;
    s.attacks.push_back({2, p});
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("flow endpoint on an attacker") {
    s.attacks.push_back({2, adversary::AttackProfile{}});
    s.traffic.flows.push_back({2, 5, 512, 1.0});
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("self flow") {
    s.traffic.flows.push_back({4, 4, 512, 1.0});
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("jammer without its region") {
    adversary::AttackProfile p;
    p.kind = adversary::AttackKind::jammer;
    p.jam_region = 0;
    s.attacks.push_back({2, p});
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
    s.jam_regions.push_back({{100.0, 100.0}, 50.0});
    CHECK_NOTHROW(validate_scenario(s));
  }
  SUBCASE("jam region centered outside the area") {
    s.jam_regions.push_back({{9999.0, 9999.0}, 10.0});
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("auto attackers plus pinned endpoints need spare nodes") {
    s.auto_attack.count = 8;
    s.traffic.flows.push_back({0, 1, 512, 1.0});
    s.traffic.flows.push_back({2, 3, 512, 1.0});
    // 8 attackers + 4 pinned endpoints > 10 nodes
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("not enough honest nodes for traffic") {
    s.auto_attack.count = 9;
    s.traffic.flow_count = 4;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
  SUBCASE("trust weights must sum to one") {
    s.protocol_config.trust_weights = {0.5, 0.3, 0.3};
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  }
}

TEST_CASE("sweep axes expand into named variants") {
  Scenario s = testers::base_scenario(10, 500.0, 20.0);
  s.name = "grid";
  s.sweep_nodes = {20, 30};
  s.sweep_speeds = {0.0, 2.5};
  REQUIRE(s.is_sweep());

  const std::vector<Scenario> vars = expand_variants(s);
  REQUIRE(vars.size() == 4);
  CHECK(vars[0].name == "grid_n20_v0");
  CHECK(vars[1].name == "grid_n20_v2.5");
  CHECK(vars[2].name == "grid_n30_v0");
  CHECK(vars[3].name == "grid_n30_v2.5");
  for (const Scenario& v : vars) {
    CHECK_FALSE(v.is_sweep());
    CHECK_NOTHROW(validate_scenario(v));
  }
  CHECK(vars[0].nodes == 20);
  CHECK(vars[0].speed.max_mps == 0.0);
  CHECK(vars[3].nodes == 30);
  CHECK(vars[3].speed.max_mps == 2.5);

  SUBCASE("one axis swept alone keeps the other fixed") {
    Scenario one = s;
    one.sweep_speeds.clear();
    const std::vector<Scenario> vs = expand_variants(one);
    REQUIRE(vs.size() == 2);
    CHECK(vs[0].speed.max_mps == one.speed.max_mps);
  }
  SUBCASE("non-sweep expands to itself") {
    const Scenario plain = testers::base_scenario(5, 100.0, 10.0);
    const std::vector<Scenario> vs = expand_variants(plain);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].name == plain.name);
  }
}

TEST_CASE("serialization reaches a fixed point after one round trip") {
  Scenario s = testers::base_scenario(12, 600.0, 30.0);
  s.traffic.flow_count = 3;
  s.traffic.flows.push_back({0, 5, 256, 4.0});
  adversary::AttackProfile p;
  p.kind = adversary::AttackKind::sinkhole;
  p.drop_fraction = 0.25;
  s.attacks.push_back({7, p});
  s.jam_regions.push_back({{50.0, 60.0}, 30.0});
  s.protocol_config.max_paths = 4;

  const std::string text1 = serialize_scenario(s);
  const Scenario s2 = parse_scenario(text1, "other");
  CHECK(s2.name == s.name);
  CHECK(s2.nodes == s.nodes);
  CHECK(s2.attacks.size() == 1);
  CHECK(s2.attacks[0].profile.drop_fraction == 0.25);
  CHECK(s2.protocol_config.max_paths == 4);
  const std::string text2 = serialize_scenario(s2);
  CHECK(text1 == text2);
}

TEST_CASE("loading a file uses the stem as the fallback name") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "manetsim_scn_test";
  fs::create_directories(dir);
  const fs::path path = dir / "lakebed.scn";
  {
    std::ofstream out(path);
    out << R"({"nodes": 6, "traffic": {"flows": 0}, "auto_attack": {"count": 1}})";
  }
  const Scenario s = load_scenario(path.string());
  CHECK(s.name == "lakebed");
  CHECK(s.nodes == 6);

  CHECK_THROWS_AS(load_scenario((dir / "missing.scn").string()), ParseError);

  {
    std::ofstream out(path);
    out << R"({"nodes": 1})";
  }
  CHECK_THROWS_AS(load_scenario(path.string()), ValidationError);
  fs::remove_all(dir);
}

TEST_SUITE_END();
