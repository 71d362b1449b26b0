#include "manetsim/scenario/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "manetsim/error.hpp"

namespace manet::scenario {

namespace {

constexpr std::size_t kMaxProblems = 50;

struct Line {
  std::uint64_t t = 0;
  std::string_view ev;
  std::vector<std::pair<std::string_view, std::string_view>> kv;

  std::string_view get(std::string_view key) const {
    for (const auto& [k, v] : kv)
      if (k == key) return v;
    return {};
  }
  bool has(std::string_view key) const {
    for (const auto& [k, v] : kv) {
      (void)v;
      if (k == key) return true;
    }
    return false;
  }
};

std::uint64_t to_u64(std::string_view v) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ParseError("bad integer in trace: '" + std::string(v) + "'");
  return out;
}

double to_f64(std::string_view v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ParseError("bad number in trace: '" + std::string(v) + "'");
  return out;
}

bool parse_line(std::string_view raw, Line& out) {
  out.kv.clear();
  std::size_t pos = 0;
  bool first = true, second = false;
  while (pos < raw.size()) {
    const std::size_t sp = raw.find(' ', pos);
    const std::string_view tok =
        raw.substr(pos, sp == std::string_view::npos ? raw.size() - pos : sp - pos);
    pos = sp == std::string_view::npos ? raw.size() : sp + 1;
    if (tok.empty()) continue;
    const std::size_t eq = tok.find('=');
    if (eq == std::string_view::npos) return false;
    const std::string_view k = tok.substr(0, eq);
    const std::string_view v = tok.substr(eq + 1);
    if (first) {
      if (k != "t") return false;
      out.t = to_u64(v);
      first = false;
      second = true;
    } else if (second) {
      if (k != "ev") return false;
      out.ev = v;
      second = false;
    } else {
      out.kv.emplace_back(k, v);
    }
  }
  return !first && !second;
}

struct Path {
  std::uint32_t nh = 0;
  std::uint32_t hops = 0;
  std::uint32_t seq = 0;
};

bool near(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-9 * scale;
}

class Checker {
 public:
  VerifyResult run(std::istream& in) {
    std::string raw;
    Line line;
    std::uint64_t last_t = 0;
    while (std::getline(in, raw)) {
      ++result_.lines;
      if (raw.empty()) continue;
      if (!parse_line(raw, line)) {
        problem("line %llu does not parse: %s",
                static_cast<unsigned long long>(result_.lines), raw.c_str());
        continue;
      }
      if (line.t < last_t)
        problem("line %llu: time goes backwards (%llu after %llu)",
                static_cast<unsigned long long>(result_.lines),
                static_cast<unsigned long long>(line.t),
                static_cast<unsigned long long>(last_t));
      last_t = line.t;
      try {
        handle(line);
      } catch (const SimError& e) {
        problem("line %llu: %s", static_cast<unsigned long long>(result_.lines),
                e.what());
      }
    }
    finish();
    result_.ok = result_.problems.empty() && problem_count_ == 0;
    return std::move(result_);
  }

 private:
  void problem(const char* fmt, ...) {
    ++problem_count_;
    if (result_.problems.size() >= kMaxProblems) return;
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    result_.problems.emplace_back(buf);
  }

  void handle(const Line& l) {
    if (l.ev == "meta") {
      saw_meta_ = true;
      duration_s_ = to_f64(l.get("duration_s"));
      fcap_ = to_f64(l.get("fcap"));
      frate_ = to_f64(l.get("frate"));
      hsrp_ = l.get("protocol") == std::string_view("hsrp");
    } else if (l.ev == "attacker") {
      attackers_.insert(static_cast<std::uint32_t>(to_u64(l.get("node"))));
    } else if (l.ev == "flow") {
      const auto id = static_cast<std::uint32_t>(to_u64(l.get("id")));
      flow_src_[id] = static_cast<std::uint32_t>(to_u64(l.get("src")));
      flow_dst_[id] = static_cast<std::uint32_t>(to_u64(l.get("dst")));
    } else if (l.ev == "orig") {
      on_orig(l);
    } else if (l.ev == "deliver") {
      on_deliver(l);
    } else if (l.ev == "dup") {
      const std::uint64_t uid = to_u64(l.get("uid"));
      if (!outstanding_.count(uid) && !settled_.count(uid))
        problem("t=%llu dup of a uid that was never originated: %llu",
                static_cast<unsigned long long>(l.t),
                static_cast<unsigned long long>(uid));
    } else if (l.ev == "drop") {
      on_drop(l);
    } else if (l.ev == "tx") {
      on_tx(l);
    } else if (l.ev == "rxq") {
      on_sight(l, rreq_seen_, "rxq", l.get("origin"));
    } else if (l.ev == "rxu") {
      on_sight(l, update_seen_, "rxu", l.get("issuer"));
    } else if (l.ev == "route") {
      on_route(l);
    } else if (l.ev == "sigfail") {
      sig_rejected_.insert({static_cast<std::uint32_t>(to_u64(l.get("node"))),
                            to_u64(l.get("uid"))});
    } else if (l.ev == "select") {
      if (l.get("cls") == std::string_view("bad"))
        problem("t=%llu node %s selected a next hop it classifies bad",
                static_cast<unsigned long long>(l.t),
                std::string(l.get("node")).c_str());
    } else if (l.ev == "summary") {
      on_summary(l);
    }
    // watch/trust/attack lines carry no checked invariants
  }

  void on_orig(const Line& l) {
    const std::uint64_t uid = to_u64(l.get("uid"));
    ++originated_;
    if (!outstanding_.emplace(uid, OriginInfo{
                                       static_cast<std::uint32_t>(to_u64(l.get("flow"))),
                                       static_cast<std::uint32_t>(to_u64(l.get("bytes"))),
                                   })
             .second)
      problem("t=%llu uid originated twice: %llu",
              static_cast<unsigned long long>(l.t),
              static_cast<unsigned long long>(uid));
    const auto flow = static_cast<std::uint32_t>(to_u64(l.get("flow")));
    const auto node = static_cast<std::uint32_t>(to_u64(l.get("node")));
    const auto it = flow_src_.find(flow);
    if (it != flow_src_.end() && it->second != node)
      problem("t=%llu flow %u originated at node %u, expected %u",
              static_cast<unsigned long long>(l.t), flow, node, it->second);
  }

  void on_deliver(const Line& l) {
    const std::uint64_t uid = to_u64(l.get("uid"));
    const auto it = outstanding_.find(uid);
    if (it == outstanding_.end()) {
      problem("t=%llu deliver of uid %llu that is not outstanding",
              static_cast<unsigned long long>(l.t),
              static_cast<unsigned long long>(uid));
      return;
    }
    const auto flow = static_cast<std::uint32_t>(to_u64(l.get("flow")));
    const auto node = static_cast<std::uint32_t>(to_u64(l.get("node")));
    const auto fd = flow_dst_.find(flow);
    if (fd != flow_dst_.end() && fd->second != node)
      problem("t=%llu flow %u delivered at node %u, expected %u",
              static_cast<unsigned long long>(l.t), flow, node, fd->second);
    ++delivered_;
    delivered_bits_ += std::uint64_t{it->second.bytes} * 8;
    delays_by_flow_[it->second.flow].push_back(
        static_cast<double>(to_u64(l.get("delay_us"))) * 1e-6);
    settled_.insert(uid);
    outstanding_.erase(it);
  }

  void on_drop(const Line& l) {
    if (l.get("kind") != std::string_view("data")) return;  // control drops carry no uid accounting
    const std::uint64_t uid = to_u64(l.get("uid"));
    const auto it = outstanding_.find(uid);
    if (it == outstanding_.end()) {
      if (!settled_.count(uid))
        problem("t=%llu drop of uid %llu that was never originated",
                static_cast<unsigned long long>(l.t),
                static_cast<unsigned long long>(uid));
      return;  // an already settled uid may still be dropped on a side path
    }
    ++drops_[std::string(l.get("reason"))];
    settled_.insert(uid);
    outstanding_.erase(it);
  }

  void on_tx(const Line& l) {
    const auto node = static_cast<std::uint32_t>(to_u64(l.get("node")));
    const std::uint64_t uid = to_u64(l.get("uid"));
    const std::string_view kind = l.get("kind");
    if (sig_rejected_.count({node, uid}))
      problem("t=%llu node %u forwards uid %llu after rejecting its signature",
              static_cast<unsigned long long>(l.t), node,
              static_cast<unsigned long long>(uid));
    if (kind == std::string_view("rreq")) {
      ++tx_rreq_;
      const auto origin = static_cast<std::uint32_t>(to_u64(l.get("origin")));
      if (hsrp_ && origin != node && !attackers_.count(node))
        ++rreq_forwards_[(std::uint64_t{node} << 32) | origin];
    } else if (kind == std::string_view("rrep")) {
      ++tx_rrep_;
    } else if (kind == std::string_view("rerr")) {
      ++tx_rerr_;
    } else if (kind == std::string_view("hello")) {
      ++tx_hello_;
    } else if (kind == std::string_view("update")) {
      ++tx_update_;
    }
  }

  void on_sight(const Line& l, std::map<std::uint32_t, std::set<std::uint64_t>>& seen,
                const char* what, std::string_view src_field) {
    const auto node = static_cast<std::uint32_t>(to_u64(l.get("node")));
    const std::uint64_t key = (to_u64(src_field) << 32) | to_u64(l.get("ctr"));
    const bool fresh = seen[node].insert(key).second;
    const bool claimed = to_u64(l.get("new")) != 0;
    if (fresh != claimed)
      problem("t=%llu %s at node %u: new=%d but replay says %d",
              static_cast<unsigned long long>(l.t), what, node, claimed ? 1 : 0,
              fresh ? 1 : 0);
    if (fresh) ++hf_;
  }

  const Path* chosen(std::uint32_t node, std::uint32_t dest) const {
    const auto it = routes_.find((std::uint64_t{node} << 32) | dest);
    if (it == routes_.end() || it->second.empty()) return nullptr;
    const Path* best = &it->second.front();
    for (const Path& p : it->second)
      if (p.hops < best->hops || (p.hops == best->hops && p.nh < best->nh)) best = &p;
    return best;
  }

  void on_route(const Line& l) {
    const auto node = static_cast<std::uint32_t>(to_u64(l.get("node")));
    const auto dest = static_cast<std::uint32_t>(to_u64(l.get("dest")));
    const auto nh = static_cast<std::uint32_t>(to_u64(l.get("nh")));
    const std::string_view op = l.get("op");
    auto& paths = routes_[(std::uint64_t{node} << 32) | dest];
    if (op == std::string_view("inval")) {
      paths.erase(std::remove_if(paths.begin(), paths.end(),
                                 [nh](const Path& p) { return p.nh == nh; }),
                  paths.end());
    } else {
      const Path p{nh, static_cast<std::uint32_t>(to_u64(l.get("hops"))),
                   static_cast<std::uint32_t>(to_u64(l.get("seq")))};
      if (op == std::string_view("set")) {
        paths.assign(1, p);
      } else {  // add
        paths.erase(std::remove_if(paths.begin(), paths.end(),
                                   [nh](const Path& q) { return q.nh == nh; }),
                    paths.end());
        paths.push_back(p);
      }
    }
    scan_for_loop(l.t, node, dest);
  }

  // A new forwarding cycle must pass through the node whose entry just
  // changed, so one walk from that node is enough. Cycles are legal while
  // their members disagree on the destination sequence number; agreement
  // is what the protocol's monotone-sequence rule forbids.
  void scan_for_loop(std::uint64_t t, std::uint32_t node, std::uint32_t dest) {
    std::vector<std::uint32_t> chain{node};
    std::uint32_t cur = node;
    while (chain.size() < 4096) {
      const Path* p = chosen(cur, dest);
      if (p == nullptr || p->nh == dest) return;
      if (p->nh == node) {
        std::uint32_t seq = 0;
        bool same = true, first = true;
        for (std::uint32_t m : chain) {
          const Path* mp = chosen(m, dest);
          if (mp == nullptr) return;
          if (first) {
            seq = mp->seq;
            first = false;
          } else if (mp->seq != seq) {
            same = false;
            break;
          }
        }
        if (same)
          problem("t=%llu routing loop toward %u through %zu nodes at seq %u",
                  static_cast<unsigned long long>(t), dest, chain.size(), seq);
        return;
      }
      if (std::find(chain.begin(), chain.end(), p->nh) != chain.end()) return;
      chain.push_back(p->nh);
      cur = p->nh;
    }
  }

  void check_u64(const Line& l, const char* key, std::uint64_t expect) {
    const std::string_view v = l.get(key);
    if (v.empty()) {
      problem("summary is missing %s", key);
      return;
    }
    const std::uint64_t got = to_u64(v);
    if (got != expect)
      problem("summary %s=%llu but replay computed %llu", key,
              static_cast<unsigned long long>(got),
              static_cast<unsigned long long>(expect));
  }

  void check_f64(const Line& l, const char* key, double expect) {
    const std::string_view v = l.get(key);
    if (v.empty()) {
      problem("summary is missing %s", key);
      return;
    }
    const double got = to_f64(v);
    if (!near(got, expect))
      problem("summary %s=%.17g but replay computed %.17g", key, got, expect);
  }

  void on_summary(const Line& l) {
    saw_summary_ = true;
    // Whatever never settled is charged to the end of the run, exactly as
    // the live accounting does at finalize time.
    drops_["end_of_run"] += outstanding_.size();
    for (const auto& [uid, info] : outstanding_) {
      (void)info;
      settled_.insert(uid);
    }
    outstanding_.clear();

    check_u64(l, "originated", originated_);
    check_u64(l, "delivered", delivered_);
    check_u64(l, "hf", hf_);
    check_u64(l, "rreq", tx_rreq_);
    check_u64(l, "rrep", tx_rrep_);
    check_u64(l, "rerr", tx_rerr_);
    check_u64(l, "update", tx_update_);
    check_u64(l, "hello", tx_hello_);
    check_u64(l, "inconsistencies", 0);

    std::uint64_t md = 0;
    static const char* kReasons[] = {"buffer_evict",   "no_route",  "discovery_fail",
                                     "ttl_expired",    "channel_loss", "attack_swallow",
                                     "sink_drop",      "end_of_run"};
    for (const char* r : kReasons) {
      const auto it = drops_.find(r);
      const std::uint64_t n = it == drops_.end() ? 0 : it->second;
      md += n;
      check_u64(l, (std::string("drop_") + r).c_str(), n);
    }
    check_u64(l, "md", md);

    check_f64(l, "pdr",
              originated_ == 0 ? 0.0
                               : static_cast<double>(delivered_) /
                                     static_cast<double>(originated_));
    check_f64(l, "throughput_bps",
              duration_s_ > 0.0 ? static_cast<double>(delivered_bits_) / duration_s_
                                : 0.0);

    std::uint64_t delay_n = 0;
    double delay_sum = 0.0, jitter_sum = 0.0;
    std::uint64_t jitter_flows = 0;
    for (const auto& [flow, delays] : delays_by_flow_) {
      (void)flow;
      for (double d : delays) {
        delay_sum += d;
        ++delay_n;
      }
      if (delays.size() >= 2) {
        double acc = 0.0;
        for (std::size_t i = 1; i < delays.size(); ++i)
          acc += std::fabs(delays[i] - delays[i - 1]);
        jitter_sum += acc / static_cast<double>(delays.size() - 1);
        ++jitter_flows;
      }
    }
    check_f64(l, "avg_delay_s",
              delay_n > 0 ? delay_sum / static_cast<double>(delay_n) : 0.0);
    check_f64(l, "jitter_s",
              jitter_flows > 0 ? jitter_sum / static_cast<double>(jitter_flows) : 0.0);
    const std::uint64_t ctrl = tx_rreq_ + tx_rrep_ + tx_rerr_ + tx_hello_ + tx_update_;
    check_f64(l, "overhead",
              static_cast<double>(ctrl) /
                  static_cast<double>(delivered_ == 0 ? 1 : delivered_));
  }

  void finish() {
    if (!saw_meta_) problem("trace has no meta line");
    if (!saw_summary_) problem("trace has no summary line");
    if (hsrp_ && frate_ > 0.0) {
      const double envelope = fcap_ + frate_ * duration_s_ + 1e-9;
      for (const auto& [key, n] : rreq_forwards_) {
        if (static_cast<double>(n) > envelope)
          problem("node %u forwarded %llu route requests from origin %u, over the "
                  "flood envelope %.3f",
                  static_cast<std::uint32_t>(key >> 32),
                  static_cast<unsigned long long>(n),
                  static_cast<std::uint32_t>(key & 0xFFFFFFFFu), envelope);
      }
    }
  }

  struct OriginInfo {
    std::uint32_t flow = 0;
    std::uint32_t bytes = 0;
  };

  VerifyResult result_;
  std::size_t problem_count_ = 0;

  bool saw_meta_ = false;
  bool saw_summary_ = false;
  bool hsrp_ = false;
  double duration_s_ = 0.0;
  double fcap_ = 0.0;
  double frate_ = 0.0;
  std::set<std::uint32_t> attackers_;
  std::map<std::uint32_t, std::uint32_t> flow_src_;
  std::map<std::uint32_t, std::uint32_t> flow_dst_;

  std::uint64_t originated_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t delivered_bits_ = 0;
  std::uint64_t hf_ = 0;
  std::uint64_t tx_rreq_ = 0, tx_rrep_ = 0, tx_rerr_ = 0, tx_hello_ = 0,
                tx_update_ = 0;
  std::unordered_map<std::uint64_t, OriginInfo> outstanding_;
  std::unordered_set<std::uint64_t> settled_;
  std::map<std::string, std::uint64_t> drops_;
  std::map<std::uint32_t, std::vector<double>> delays_by_flow_;
  std::map<std::uint32_t, std::set<std::uint64_t>> rreq_seen_;
  std::map<std::uint32_t, std::set<std::uint64_t>> update_seen_;
  std::map<std::uint64_t, std::vector<Path>> routes_;
  std::set<std::pair<std::uint32_t, std::uint64_t>> sig_rejected_;
  std::map<std::uint64_t, std::uint64_t> rreq_forwards_;
};

}  // namespace

VerifyResult verify_trace_text(const std::string& text) {
  std::istringstream in(text);
  return Checker().run(in);
}

VerifyResult verify_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file: " + path);
  return Checker().run(in);
}

}  // namespace manet::scenario
