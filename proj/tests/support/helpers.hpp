#pragma once

// Shared scaffolding for the unit and acceptance suites: programmatic
// scenario construction, trace parsing, and topology probes.

#include <charconv>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "manetsim/mobility/mobility.hpp"
#include "manetsim/scenario/scenario.hpp"
#include "manetsim/scenario/simulation.hpp"

#include "oracles.hpp"

namespace testers {

// A minimal well-formed scenario: static nodes, lossless channel, no
// jitter, no traffic, no attackers. Tests adjust what they care about.
inline manet::scenario::Scenario base_scenario(std::uint32_t nodes, double side_m,
                                               double duration_s) {
  manet::scenario::Scenario s;
  s.name = "testbed";
  s.nodes = nodes;
  s.area = {side_m, side_m};
  s.speed = {0.0, 0.0};
  s.pause_s = 0.0;
  s.duration_s = duration_s;
  s.master_seed = 1;
  s.traffic.flow_count = 0;
  s.auto_attack.count = 0;
  s.channel.loss_probability = 0.0;
  s.channel.jitter_bound = manet::sim::SimTime::micros(0);
  return s;
}

inline std::vector<oracle::Pt> to_pts(const std::vector<manet::mobility::Position>& v) {
  std::vector<oracle::Pt> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back({p.x, p.y});
  return out;
}

// --- Trace parsing --------------------------------------------------------

struct TraceLine {
  std::uint64_t t = 0;
  std::string ev;
  std::map<std::string, std::string> kv;

  bool has(const std::string& k) const { return kv.count(k) != 0; }
  std::uint64_t u64(const std::string& k) const {
    std::uint64_t v = 0;
    const std::string& s = kv.at(k);
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
  }
  double f64(const std::string& k) const { return std::stod(kv.at(k)); }
};

inline std::vector<TraceLine> parse_trace(std::string_view text) {
  std::vector<TraceLine> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;

    TraceLine tl;
    std::size_t p = 0;
    while (p < line.size()) {
      std::size_t sp = line.find(' ', p);
      if (sp == std::string_view::npos) sp = line.size();
      std::string_view tok = line.substr(p, sp - p);
      p = sp + 1;
      const std::size_t eq = tok.find('=');
      if (eq == std::string_view::npos) continue;
      std::string key(tok.substr(0, eq));
      std::string val(tok.substr(eq + 1));
      if (key == "t")
        std::from_chars(val.data(), val.data() + val.size(), tl.t);
      else if (key == "ev")
        tl.ev = val;
      else
        tl.kv.emplace(std::move(key), std::move(val));
    }
    out.push_back(std::move(tl));
  }
  return out;
}

}  // namespace testers
