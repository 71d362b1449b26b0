#include "manetsim/trust/trust.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "manetsim/error.hpp"

namespace manet::trust {

const char* trust_class_name(TrustClass c) {
  switch (c) {
    case TrustClass::bad: return "bad";
    case TrustClass::neutral: return "neutral";
    case TrustClass::good: return "good";
  }
  return "?";
}

TrustClass classify(double fused) {
  if (fused < 0.5) return TrustClass::bad;
  if (fused < 0.8) return TrustClass::neutral;
  return TrustClass::good;
}

LinkLabel label_link(std::uint32_t bypasses, std::uint32_t threshold) {
  if (bypasses == 0) return LinkLabel::strong;
  if (bypasses >= threshold) return LinkLabel::weak;
  return LinkLabel::normal;
}

TrustTable::TrustTable(NodeId owner, TrustWeights weights, std::uint32_t report_window)
    : owner_(owner), weights_(weights), report_window_(report_window) {
  if (weights.engagement < 0.0 || weights.reputation < 0.0 ||
      weights.recommendation < 0.0 ||
      std::fabs(weights.engagement + weights.reputation + weights.recommendation - 1.0) >
          1e-9) {
    throw BadWeights("trust weights must be non-negative and sum to 1");
  }
}

double TrustTable::record_interaction(NodeId peer, Outcome outcome) {
  if (peer == owner_) throw SelfTrust("node " + std::to_string(owner_) + " rating itself");
  TrustRecord& rec = records_[peer];
  if (outcome == Outcome::success)
    ++rec.engagement.successes;
  else
    ++rec.engagement.failures;
  refuse(peer, rec, weights_);
  return rec.fused;
}

void TrustTable::ingest_report(ReportKind kind, NodeId reporter, NodeId peer,
                               double score, sim::SimTime at) {
  if (score < 0.0 || score > 1.0)
    throw ScoreOutOfRange("report score " + std::to_string(score) + " outside [0,1]");
  if (reporter == peer)
    throw SelfReport("node " + std::to_string(reporter) + " reporting about itself");
  if (peer == owner_) return;  // no record of self

  TrustRecord& rec = records_[peer];
  auto& list = kind == ReportKind::reputation ? rec.reputation : rec.recommendation;

  // Retain only the newest report_window entries per reporter: list order
  // is arrival order, so the first match from this reporter is its oldest.
  std::uint32_t held = 0;
  for (const auto& r : list)
    if (r.reporter == reporter) ++held;
  if (held >= report_window_) {
    auto oldest = std::find_if(list.begin(), list.end(),
                               [&](const Report& r) { return r.reporter == reporter; });
    list.erase(oldest);
  }
  list.push_back(Report{reporter, score, at});
  refuse(peer, rec, weights_);
}

std::optional<double> TrustTable::mean_reports(const std::vector<Report>& reports) const {
  double sum = 0.0;
  std::uint32_t n = 0;
  for (const auto& r : reports) {
    // Second-hand evidence from a peer currently classified Bad is
    // ignored rather than deleted; it comes back if the reporter
    // rehabilitates.
    auto it = records_.find(r.reporter);
    if (it != records_.end() && it->second.cls == TrustClass::bad) continue;
    sum += r.score;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

void TrustTable::refuse(NodeId peer, TrustRecord& rec, const TrustWeights& weights) {
  (void)peer;
  const double e = rec.engagement.score();
  const double r = mean_reports(rec.reputation).value_or(0.5);
  const double c = mean_reports(rec.recommendation).value_or(0.5);
  rec.fused = weights.engagement * e + weights.reputation * r + weights.recommendation * c;
  rec.cls = classify(rec.fused);
}

double TrustTable::fuse(NodeId peer, const TrustWeights& weights) {
  if (weights.engagement < 0.0 || weights.reputation < 0.0 ||
      weights.recommendation < 0.0 ||
      std::fabs(weights.engagement + weights.reputation + weights.recommendation - 1.0) >
          1e-9) {
    throw BadWeights("trust weights must be non-negative and sum to 1");
  }
  auto it = records_.find(peer);
  if (it == records_.end()) return 0.5;
  refuse(peer, it->second, weights);
  return it->second.fused;
}

double TrustTable::fused(NodeId peer) const {
  auto it = records_.find(peer);
  return it == records_.end() ? 0.5 : it->second.fused;
}

TrustClass TrustTable::cls(NodeId peer) const {
  auto it = records_.find(peer);
  return it == records_.end() ? TrustClass::neutral : it->second.cls;
}

const TrustRecord* TrustTable::find(NodeId peer) const {
  auto it = records_.find(peer);
  return it == records_.end() ? nullptr : &it->second;
}

void LinkQuality::expire(sim::SimTime now) {
  const sim::SimTime cutoff = now - window_;
  while (!events_.empty() && events_.front() < cutoff) events_.pop_front();
}

void LinkQuality::record_bypass(sim::SimTime now) {
  expire(now);
  events_.push_back(now);
}

std::uint32_t LinkQuality::count(sim::SimTime now) const {
  const_cast<LinkQuality*>(this)->expire(now);
  return static_cast<std::uint32_t>(events_.size());
}

}  // namespace manet::trust
