#include "manetsim/scenario/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"
#include "manetsim/error.hpp"

namespace manet::scenario {

namespace {

using nlohmann::json;

[[noreturn]] void fail_parse(const std::string& where, const std::string& msg) {
  throw ParseError(where + ": " + msg);
}

[[noreturn]] void fail_valid(const std::string& msg) { throw ValidationError(msg); }

/// One JSON object with a closed key set. Every accessor type-checks and
/// reports the field path on mismatch; construction rejects unknown keys
/// so typos never pass silently.
class Fields {
 public:
  Fields(const json& j, std::string where, std::initializer_list<const char*> allowed)
      : j_(j), where_(std::move(where)) {
    if (!j.is_object()) fail_parse(where_, "expected an object");
    for (const auto& item : j.items()) {
      bool known = false;
      for (const char* k : allowed)
        if (item.key() == k) {
          known = true;
          break;
        }
      if (!known) fail_parse(where_, "unknown key '" + item.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) const { return j_.at(key); }

  double f64(const char* key, double def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) fail_parse(field(key), "expected a number");
    return v.get<double>();
  }

  std::uint64_t u64(const char* key, std::uint64_t def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail_parse(field(key), "expected a non-negative integer");
  }

  std::uint32_t u32(const char* key, std::uint32_t def) const {
    const std::uint64_t v = u64(key, def);
    if (v > 0xFFFFFFFFull) fail_parse(field(key), "value does not fit in 32 bits");
    return static_cast<std::uint32_t>(v);
  }

  bool boolean(const char* key, bool def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail_parse(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::string str(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) fail_parse(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::string field(const char* key) const { return where_ + "." + key; }

 private:
  const json& j_;
  std::string where_;
};

sim::SimTime seconds(double s) { return sim::SimTime::seconds(s); }

adversary::AttackKind parse_kind(const std::string& where, const std::string& s) {
  if (s == "blackhole") return adversary::AttackKind::blackhole;
  if (s == "flooder") return adversary::AttackKind::flooder;
  if (s == "sinkhole") return adversary::AttackKind::sinkhole;
  if (s == "jammer") return adversary::AttackKind::jammer;
  fail_parse(where, "unknown attack kind '" + s + "'");
}

/// Shared profile fields for both explicit attacks and the auto rule.
adversary::AttackProfile parse_profile(const Fields& f) {
  adversary::AttackProfile p;
  p.kind = parse_kind(f.field("kind"), f.str("kind", "blackhole"));
  p.seq_inflation = f.u32("seq_inflation", p.seq_inflation);
  p.drop_fraction = f.f64("drop_fraction", p.drop_fraction);
  p.flood_rate_per_s = f.f64("rate_pps", p.flood_rate_per_s);
  p.jam_region = f.u32("region", 0);
  if (f.has("target")) {
    const json& t = f.raw("target");
    if (t.is_string()) {
      if (t.get<std::string>() != "phantom")
        fail_parse(f.field("target"), "expected a node id or \"phantom\"");
      p.flood_target = kPhantomDest;
    } else {
      p.flood_target = f.u32("target", kPhantomDest);
    }
  }
  if (f.has("masquerade_as")) p.masquerade_as = f.u32("masquerade_as", 0);
  if (f.has("from_s")) p.active_from = seconds(f.f64("from_s", 0.0));
  if (f.has("until_s")) p.active_until = seconds(f.f64("until_s", 0.0));
  if (p.kind == adversary::AttackKind::flooder && !f.has("rate_pps"))
    p.flood_rate_per_s = 20.0;
  return p;
}

AttackSpec parse_attack(const json& j, const std::string& where) {
  Fields f(j, where,
           {"node", "kind", "seq_inflation", "drop_fraction", "rate_pps", "target",
            "masquerade_as", "region", "from_s", "until_s"});
  AttackSpec a;
  if (!f.has("node")) fail_parse(where, "missing key 'node'");
  a.node = f.u32("node", kNoNode);
  a.profile = parse_profile(f);
  return a;
}

AutoAttack parse_auto_attack(const json& j, const std::string& where) {
  Fields f(j, where,
           {"count", "kind", "seq_inflation", "drop_fraction", "rate_pps", "target",
            "region", "from_s", "until_s"});
  AutoAttack a;
  a.count = f.u32("count", a.count);
  a.profile = parse_profile(f);
  return a;
}

FlowSpec parse_flow(const json& j, const std::string& where, const TrafficSpec& ts) {
  Fields f(j, where, {"src", "dst", "packet_bytes", "rate_pps"});
  FlowSpec fl;
  if (!f.has("src") || !f.has("dst")) fail_parse(where, "flow needs 'src' and 'dst'");
  fl.src = f.u32("src", kNoNode);
  fl.dst = f.u32("dst", kNoNode);
  fl.packet_bytes = f.u32("packet_bytes", ts.packet_bytes);
  fl.rate_pps = f.f64("rate_pps", ts.data_rate_pps);
  return fl;
}

TrafficSpec parse_traffic(const json& j, const std::string& where) {
  Fields f(j, where, {"flows", "packet_bytes", "data_rate_pps", "explicit"});
  TrafficSpec t;
  t.flow_count = f.u32("flows", t.flow_count);
  t.packet_bytes = f.u32("packet_bytes", t.packet_bytes);
  t.data_rate_pps = f.f64("data_rate_pps", t.data_rate_pps);
  if (f.has("explicit")) {
    const json& arr = f.raw("explicit");
    if (!arr.is_array()) fail_parse(f.field("explicit"), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      t.flows.push_back(
          parse_flow(arr[i], f.field("explicit") + "[" + std::to_string(i) + "]", t));
  }
  return t;
}

void parse_channel(const json& j, const std::string& where, Scenario& s) {
  Fields f(j, where,
           {"range_m", "loss_probability", "base_delay_ms", "jitter_ms", "jam_regions"});
  s.channel.range_m = f.f64("range_m", s.channel.range_m);
  s.channel.loss_probability = f.f64("loss_probability", s.channel.loss_probability);
  s.channel.base_delay = seconds(f.f64("base_delay_ms", 2.0) * 1e-3);
  s.channel.jitter_bound = seconds(f.f64("jitter_ms", 1.0) * 1e-3);
  if (f.has("jam_regions")) {
    const json& arr = f.raw("jam_regions");
    if (!arr.is_array()) fail_parse(f.field("jam_regions"), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string rw = f.field("jam_regions") + "[" + std::to_string(i) + "]";
      Fields rf(arr[i], rw, {"x_m", "y_m", "radius_m"});
      mobility::JamRegion r;
      r.center.x = rf.f64("x_m", 0.0);
      r.center.y = rf.f64("y_m", 0.0);
      r.radius = rf.f64("radius_m", 0.0);
      s.jam_regions.push_back(r);
    }
  }
}

void parse_overrides(const json& j, const std::string& where, routing::ProtocolConfig& c) {
  Fields f(j, where,
           {"rreq_ttl",
            "rreq_retries",
            "rreq_retry_base_s",
            "active_route_lifetime_s",
            "seen_cache_retention_s",
            "buffer_capacity",
            "data_ttl",
            "hello_interval_s",
            "hello_loss_limit",
            "max_paths",
            "update_interval_s",
            "signatures_enabled",
            "allow_insecure_fallback",
            "seq_jump_max",
            "flood_bucket_capacity",
            "flood_refill_per_s",
            "watchdog_deadline_s",
            "trust_w_engagement",
            "trust_w_reputation",
            "trust_w_recommendation",
            "report_window",
            "bypass_threshold",
            "bypass_window_s",
            "recommendation_interval_s",
            "gossip_per_hello"});
  c.rreq_ttl = f.u32("rreq_ttl", c.rreq_ttl);
  c.rreq_retries = f.u32("rreq_retries", c.rreq_retries);
  if (f.has("rreq_retry_base_s")) c.rreq_retry_base = seconds(f.f64("rreq_retry_base_s", 0));
  if (f.has("active_route_lifetime_s"))
    c.active_route_lifetime = seconds(f.f64("active_route_lifetime_s", 0));
  if (f.has("seen_cache_retention_s"))
    c.seen_cache_retention = seconds(f.f64("seen_cache_retention_s", 0));
  c.buffer_capacity = f.u32("buffer_capacity", c.buffer_capacity);
  c.data_ttl = f.u32("data_ttl", c.data_ttl);
  if (f.has("hello_interval_s")) c.hello_interval = seconds(f.f64("hello_interval_s", 0));
  c.hello_loss_limit = f.u32("hello_loss_limit", c.hello_loss_limit);
  c.max_paths = f.u32("max_paths", c.max_paths);
  if (f.has("update_interval_s")) c.update_interval = seconds(f.f64("update_interval_s", 0));
  c.signatures_enabled = f.boolean("signatures_enabled", c.signatures_enabled);
  c.allow_insecure_fallback =
      f.boolean("allow_insecure_fallback", c.allow_insecure_fallback);
  c.seq_jump_max = f.u32("seq_jump_max", c.seq_jump_max);
  c.flood_bucket_capacity = f.f64("flood_bucket_capacity", c.flood_bucket_capacity);
  c.flood_refill_per_s = f.f64("flood_refill_per_s", c.flood_refill_per_s);
  if (f.has("watchdog_deadline_s"))
    c.watchdog_deadline = seconds(f.f64("watchdog_deadline_s", 0));
  c.trust_weights.engagement = f.f64("trust_w_engagement", c.trust_weights.engagement);
  c.trust_weights.reputation = f.f64("trust_w_reputation", c.trust_weights.reputation);
  c.trust_weights.recommendation =
      f.f64("trust_w_recommendation", c.trust_weights.recommendation);
  c.report_window = f.u32("report_window", c.report_window);
  c.bypass_threshold = f.u32("bypass_threshold", c.bypass_threshold);
  if (f.has("bypass_window_s")) c.bypass_window = seconds(f.f64("bypass_window_s", 0));
  if (f.has("recommendation_interval_s"))
    c.recommendation_interval = seconds(f.f64("recommendation_interval_s", 0));
  c.gossip_per_hello = f.u32("gossip_per_hello", c.gossip_per_hello);
}

bool name_ok(const std::string& name) {
  if (name.empty() || name.size() > 120) return false;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    c == '-' || c == '.' || c == '@';
    if (!ok) return false;
  }
  return true;
}

std::string speed_token(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void check_profile(const Scenario& s, const adversary::AttackProfile& p,
                   const std::string& who) {
  using adversary::AttackKind;
  if (p.drop_fraction < 0.0 || p.drop_fraction > 1.0)
    fail_valid(who + ": drop_fraction must be within [0,1]");
  if (p.kind == AttackKind::flooder && !(p.flood_rate_per_s > 0.0))
    fail_valid(who + ": flooder rate_pps must be positive");
  if (p.kind == AttackKind::jammer && p.jam_region >= s.jam_regions.size())
    fail_valid(who + ": jam region index " + std::to_string(p.jam_region) +
               " has no region in channel.jam_regions");
  if (p.active_until < p.active_from) fail_valid(who + ": until_s precedes from_s");
}

json profile_json(const adversary::AttackProfile& p) {
  using adversary::AttackKind;
  json j;
  j["kind"] = adversary::attack_kind_name(p.kind);
  switch (p.kind) {
    case AttackKind::blackhole:
      j["seq_inflation"] = p.seq_inflation;
      if (p.masquerade_as) j["masquerade_as"] = *p.masquerade_as;
      break;
    case AttackKind::flooder:
      j["rate_pps"] = p.flood_rate_per_s;
      if (p.flood_target == kPhantomDest)
        j["target"] = "phantom";
      else
        j["target"] = p.flood_target;
      break;
    case AttackKind::sinkhole:
      j["drop_fraction"] = p.drop_fraction;
      break;
    case AttackKind::jammer:
      j["region"] = p.jam_region;
      break;
  }
  if (p.active_from.us != 0) j["from_s"] = p.active_from.as_seconds();
  if (p.active_until.us != 0xFFFFFFFFFFFFFFFFull)
    j["until_s"] = p.active_until.as_seconds();
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& fallback_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }

  Fields f(root, "scenario",
           {"name", "nodes", "area", "speed_range", "pause_s", "duration_s",
            "master_seed", "protocol", "traffic", "attacks", "auto_attack", "channel",
            "protocol_overrides", "sweep"});

  Scenario s;
  s.name = f.str("name", fallback_name);
  s.nodes = f.u32("nodes", s.nodes);
  if (f.has("area")) {
    Fields af(f.raw("area"), "scenario.area", {"width_m", "height_m"});
    s.area.width = af.f64("width_m", s.area.width);
    s.area.height = af.f64("height_m", s.area.height);
  }
  if (f.has("speed_range")) {
    Fields sf(f.raw("speed_range"), "scenario.speed_range", {"min_mps", "max_mps"});
    s.speed.min_mps = sf.f64("min_mps", s.speed.min_mps);
    s.speed.max_mps = sf.f64("max_mps", s.speed.max_mps);
  }
  s.pause_s = f.f64("pause_s", s.pause_s);
  s.duration_s = f.f64("duration_s", s.duration_s);
  s.master_seed = f.u64("master_seed", s.master_seed);
  const std::string proto = f.str("protocol", "aodv");
  if (proto == "aodv")
    s.protocol = Protocol::aodv;
  else if (proto == "hsrp")
    s.protocol = Protocol::hsrp;
  else
    fail_parse("scenario.protocol", "expected \"aodv\" or \"hsrp\"");

  if (f.has("traffic")) s.traffic = parse_traffic(f.raw("traffic"), "scenario.traffic");
  if (f.has("attacks")) {
    const json& arr = f.raw("attacks");
    if (!arr.is_array()) fail_parse("scenario.attacks", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      s.attacks.push_back(
          parse_attack(arr[i], "scenario.attacks[" + std::to_string(i) + "]"));
  }
  if (f.has("auto_attack"))
    s.auto_attack = parse_auto_attack(f.raw("auto_attack"), "scenario.auto_attack");
  if (f.has("channel")) parse_channel(f.raw("channel"), "scenario.channel", s);
  if (f.has("protocol_overrides"))
    parse_overrides(f.raw("protocol_overrides"), "scenario.protocol_overrides",
                    s.protocol_config);
  if (f.has("sweep")) {
    Fields sw(f.raw("sweep"), "scenario.sweep", {"nodes", "max_speed_mps"});
    if (sw.has("nodes")) {
      const json& arr = sw.raw("nodes");
      if (!arr.is_array()) fail_parse("scenario.sweep.nodes", "expected an array");
      for (const auto& v : arr) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
          fail_parse("scenario.sweep.nodes", "expected integers");
        s.sweep_nodes.push_back(v.get<std::uint32_t>());
      }
    }
    if (sw.has("max_speed_mps")) {
      const json& arr = sw.raw("max_speed_mps");
      if (!arr.is_array()) fail_parse("scenario.sweep.max_speed_mps", "expected an array");
      for (const auto& v : arr) {
        if (!v.is_number()) fail_parse("scenario.sweep.max_speed_mps", "expected numbers");
        s.sweep_speeds.push_back(v.get<double>());
      }
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();

  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0)
    stem = stem.substr(0, dot);

  Scenario s = parse_scenario(buf.str(), stem);
  for (const Scenario& v : expand_variants(s)) validate_scenario(v);
  return s;
}

void validate_scenario(const Scenario& s) {
  if (!name_ok(s.name))
    fail_valid("scenario name must be 1-120 chars of [A-Za-z0-9_.@-]: '" + s.name + "'");
  if (s.nodes < 2 || s.nodes > 2000)
    fail_valid("nodes must be within [2, 2000], got " + std::to_string(s.nodes));
  if (!(s.area.width > 0.0) || !(s.area.height > 0.0) || s.area.width > 1e6 ||
      s.area.height > 1e6)
    fail_valid("area sides must be within (0, 1e6] meters");
  if (s.speed.min_mps < 0.0 || s.speed.max_mps < s.speed.min_mps ||
      s.speed.max_mps > 1e4)
    fail_valid("speed_range requires 0 <= min <= max <= 1e4 m/s");
  if (s.pause_s < 0.0) fail_valid("pause_s must be >= 0");
  if (!(s.duration_s > 0.0) || s.duration_s > 86400.0)
    fail_valid("duration_s must be within (0, 86400]");

  if (s.traffic.flow_count > 10000) fail_valid("traffic.flows must be <= 10000");
  if (s.traffic.packet_bytes < 1 || s.traffic.packet_bytes > 65500)
    fail_valid("traffic.packet_bytes must be within [1, 65500]");
  if (!(s.traffic.data_rate_pps > 0.0) || s.traffic.data_rate_pps > 1e6)
    fail_valid("traffic.data_rate_pps must be within (0, 1e6]");

  std::set<NodeId> attacker_ids;
  for (const AttackSpec& a : s.attacks) {
    const std::string who = "attack on node " + std::to_string(a.node);
    if (a.node >= s.nodes)
      fail_valid(who + ": node id must be < nodes (" + std::to_string(s.nodes) + ")");
    if (!attacker_ids.insert(a.node).second)
      fail_valid(who + ": a node carries at most one attack profile");
    if (a.profile.masquerade_as) {
      if (*a.profile.masquerade_as >= s.nodes)
        fail_valid(who + ": masquerade_as must be < nodes");
      if (*a.profile.masquerade_as == a.node)
        fail_valid(who + ": masquerade_as must name a different node");
    }
    check_profile(s, a.profile, who);
  }
  if (s.attacks.empty()) {
    if (s.auto_attack.count >= s.nodes)
      fail_valid("auto_attack.count must be < nodes");
    check_profile(s, s.auto_attack.profile, "auto_attack");
    // Auto attackers are drawn from nodes not already pinned down as
    // explicit flow endpoints; the pool has to be big enough.
    std::set<NodeId> pinned;
    for (const FlowSpec& fl : s.traffic.flows) {
      pinned.insert(fl.src);
      pinned.insert(fl.dst);
    }
    if (s.auto_attack.count + pinned.size() > s.nodes)
      fail_valid("auto_attack.count plus explicit flow endpoints exceeds nodes");
  }

  const std::size_t attacker_count =
      s.attacks.empty() ? s.auto_attack.count : s.attacks.size();
  const bool wants_traffic = !s.traffic.flows.empty() || s.traffic.flow_count > 0;
  if (wants_traffic && s.nodes < attacker_count + 2)
    fail_valid("scenario needs at least two honest nodes to carry traffic");

  for (std::size_t i = 0; i < s.traffic.flows.size(); ++i) {
    const FlowSpec& fl = s.traffic.flows[i];
    const std::string who = "traffic.explicit[" + std::to_string(i) + "]";
    if (fl.src >= s.nodes || fl.dst >= s.nodes)
      fail_valid(who + ": endpoints must be < nodes");
    if (fl.src == fl.dst) fail_valid(who + ": src and dst must differ");
    if (attacker_ids.count(fl.src) || attacker_ids.count(fl.dst))
      fail_valid(who + ": flow endpoints must be honest nodes");
    if (fl.packet_bytes < 1 || fl.packet_bytes > 65500)
      fail_valid(who + ": packet_bytes must be within [1, 65500]");
    if (!(fl.rate_pps > 0.0) || fl.rate_pps > 1e6)
      fail_valid(who + ": rate_pps must be within (0, 1e6]");
  }

  if (!(s.channel.range_m > 0.0) || s.channel.range_m > 1e5)
    fail_valid("channel.range_m must be within (0, 1e5]");
  if (s.channel.loss_probability < 0.0 || s.channel.loss_probability >= 1.0)
    fail_valid("channel.loss_probability must be within [0, 1)");
  for (std::size_t i = 0; i < s.jam_regions.size(); ++i) {
    const mobility::JamRegion& r = s.jam_regions[i];
    const std::string who = "channel.jam_regions[" + std::to_string(i) + "]";
    if (!(r.radius > 0.0)) fail_valid(who + ": radius_m must be positive");
    if (!s.area.contains(r.center)) fail_valid(who + ": center lies outside the area");
  }

  const routing::ProtocolConfig& c = s.protocol_config;
  if (c.rreq_ttl < 1) fail_valid("protocol_overrides.rreq_ttl must be >= 1");
  if (c.max_paths < 1) fail_valid("protocol_overrides.max_paths must be >= 1");
  if (c.hello_interval.us == 0)
    fail_valid("protocol_overrides.hello_interval_s must be positive");
  if (c.update_interval.us == 0)
    fail_valid("protocol_overrides.update_interval_s must be positive");
  const auto& w = c.trust_weights;
  if (w.engagement < 0.0 || w.reputation < 0.0 || w.recommendation < 0.0 ||
      std::fabs(w.engagement + w.reputation + w.recommendation - 1.0) > 1e-9)
    fail_valid("trust weights must be non-negative and sum to 1");
  if (!(c.flood_bucket_capacity >= 0.0) || !(c.flood_refill_per_s > 0.0))
    fail_valid("flood limiter needs capacity >= 0 and refill > 0");

  for (std::uint32_t n : s.sweep_nodes)
    if (n < 2 || n > 2000) fail_valid("sweep.nodes values must be within [2, 2000]");
  for (double v : s.sweep_speeds)
    if (v < s.speed.min_mps || v > 1e4)
      fail_valid("sweep.max_speed_mps values must be within [min_mps, 1e4]");
}

std::vector<Scenario> expand_variants(const Scenario& s) {
  std::vector<Scenario> out;
  if (!s.is_sweep()) {
    out.push_back(s);
    return out;
  }
  const std::vector<std::uint32_t> ns =
      s.sweep_nodes.empty() ? std::vector<std::uint32_t>{s.nodes} : s.sweep_nodes;
  const std::vector<double> vs =
      s.sweep_speeds.empty() ? std::vector<double>{s.speed.max_mps} : s.sweep_speeds;
  for (std::uint32_t n : ns) {
    for (double v : vs) {
      Scenario var = s;
      var.sweep_nodes.clear();
      var.sweep_speeds.clear();
      var.nodes = n;
      var.speed.max_mps = v;
      var.name = s.name + "_n" + std::to_string(n) + "_v" + speed_token(v);
      out.push_back(std::move(var));
    }
  }
  return out;
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["nodes"] = s.nodes;
  j["area"] = {{"width_m", s.area.width}, {"height_m", s.area.height}};
  j["speed_range"] = {{"min_mps", s.speed.min_mps}, {"max_mps", s.speed.max_mps}};
  j["pause_s"] = s.pause_s;
  j["duration_s"] = s.duration_s;
  j["master_seed"] = s.master_seed;
  j["protocol"] = protocol_name(s.protocol);

  json traffic;
  traffic["flows"] = s.traffic.flow_count;
  traffic["packet_bytes"] = s.traffic.packet_bytes;
  traffic["data_rate_pps"] = s.traffic.data_rate_pps;
  if (!s.traffic.flows.empty()) {
    json arr = json::array();
    for (const FlowSpec& fl : s.traffic.flows)
      arr.push_back({{"src", fl.src},
                     {"dst", fl.dst},
                     {"packet_bytes", fl.packet_bytes},
                     {"rate_pps", fl.rate_pps}});
    traffic["explicit"] = std::move(arr);
  }
  j["traffic"] = std::move(traffic);

  if (!s.attacks.empty()) {
    json arr = json::array();
    for (const AttackSpec& a : s.attacks) {
      json aj = profile_json(a.profile);
      aj["node"] = a.node;
      arr.push_back(std::move(aj));
    }
    j["attacks"] = std::move(arr);
  } else {
    json aj = profile_json(s.auto_attack.profile);
    aj["count"] = s.auto_attack.count;
    aj.erase("masquerade_as");
    j["auto_attack"] = std::move(aj);
  }

  json ch;
  ch["range_m"] = s.channel.range_m;
  ch["loss_probability"] = s.channel.loss_probability;
  ch["base_delay_ms"] = s.channel.base_delay.as_seconds() * 1e3;
  ch["jitter_ms"] = s.channel.jitter_bound.as_seconds() * 1e3;
  if (!s.jam_regions.empty()) {
    json arr = json::array();
    for (const mobility::JamRegion& r : s.jam_regions)
      arr.push_back(
          {{"x_m", r.center.x}, {"y_m", r.center.y}, {"radius_m", r.radius}});
    ch["jam_regions"] = std::move(arr);
  }
  j["channel"] = std::move(ch);

  const routing::ProtocolConfig& c = s.protocol_config;
  json po;
  po["rreq_ttl"] = c.rreq_ttl;
  po["rreq_retries"] = c.rreq_retries;
  po["rreq_retry_base_s"] = c.rreq_retry_base.as_seconds();
  po["active_route_lifetime_s"] = c.active_route_lifetime.as_seconds();
  po["seen_cache_retention_s"] = c.seen_cache_retention.as_seconds();
  po["buffer_capacity"] = c.buffer_capacity;
  po["data_ttl"] = c.data_ttl;
  po["hello_interval_s"] = c.hello_interval.as_seconds();
  po["hello_loss_limit"] = c.hello_loss_limit;
  po["max_paths"] = c.max_paths;
  po["update_interval_s"] = c.update_interval.as_seconds();
  po["signatures_enabled"] = c.signatures_enabled;
  po["allow_insecure_fallback"] = c.allow_insecure_fallback;
  po["seq_jump_max"] = c.seq_jump_max;
  po["flood_bucket_capacity"] = c.flood_bucket_capacity;
  po["flood_refill_per_s"] = c.flood_refill_per_s;
  po["watchdog_deadline_s"] = c.watchdog_deadline.as_seconds();
  po["trust_w_engagement"] = c.trust_weights.engagement;
  po["trust_w_reputation"] = c.trust_weights.reputation;
  po["trust_w_recommendation"] = c.trust_weights.recommendation;
  po["report_window"] = c.report_window;
  po["bypass_threshold"] = c.bypass_threshold;
  po["bypass_window_s"] = c.bypass_window.as_seconds();
  po["recommendation_interval_s"] = c.recommendation_interval.as_seconds();
  po["gossip_per_hello"] = c.gossip_per_hello;
  j["protocol_overrides"] = std::move(po);

  if (s.is_sweep()) {
    json sw;
    if (!s.sweep_nodes.empty()) sw["nodes"] = s.sweep_nodes;
    if (!s.sweep_speeds.empty()) sw["max_speed_mps"] = s.sweep_speeds;
    j["sweep"] = std::move(sw);
  }

  return j.dump(2) + "\n";
}

}  // namespace manet::scenario
