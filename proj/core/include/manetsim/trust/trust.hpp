#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "manetsim/sim/time.hpp"
#include "manetsim/types.hpp"

namespace manet::trust {

enum class TrustClass : std::uint8_t { bad, neutral, good };

const char* trust_class_name(TrustClass c);

/// Band mapping: bad [0, 0.5), neutral [0.5, 0.8), good [0.8, 1].
TrustClass classify(double fused);

enum class Outcome : std::uint8_t { success, failure };

enum class ReportKind : std::uint8_t { reputation, recommendation };

enum class LinkLabel : std::uint8_t { strong, normal, weak };

/// Link quality from watchdog bypass counts within a sliding window:
/// strong = 0 bypasses, weak = count >= threshold, normal in between.
LinkLabel label_link(std::uint32_t bypasses, std::uint32_t threshold);

/// Direct interaction evidence. The score is Laplace-smoothed so fresh
/// peers start at 0.5 and single events cannot saturate the estimate:
/// (successes + 1) / (successes + failures + 2).
struct EngagementStats {
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;

  double score() const {
    return static_cast<double>(successes + 1) /
           static_cast<double>(successes + failures + 2);
  }
};

struct Report {
  NodeId reporter = kNoNode;
  double score = 0.0;
  sim::SimTime at{};
};

struct TrustWeights {
  double engagement = 0.5;
  double reputation = 0.3;
  double recommendation = 0.2;
};

struct TrustRecord {
  EngagementStats engagement;
  std::vector<Report> reputation;
  std::vector<Report> recommendation;
  double fused = 0.5;
  TrustClass cls = TrustClass::neutral;
};

/// Per-node trust state over its peers. Fusion combines the three
/// evidence sources with fixed weights; a missing source contributes its
/// neutral default 0.5. Reports from peers this table itself classifies
/// Bad are excluded at fusion time, so a liar cannot vote its way back.
class TrustTable {
 public:
  /// Weights must be non-negative and sum to 1 (tolerance 1e-9), else
  /// BadWeights.
  TrustTable(NodeId owner, TrustWeights weights, std::uint32_t report_window = 20);

  NodeId owner() const { return owner_; }

  /// Records a direct interaction and re-fuses. Throws SelfTrust when
  /// peer is the owner. Returns the new fused score.
  double record_interaction(NodeId peer, Outcome outcome);

  /// Ingests a second-hand report and re-fuses. Throws ScoreOutOfRange
  /// unless score is in [0,1], SelfReport when reporter == peer; reports
  /// about the owner are ignored (a node keeps no record of itself).
  /// Keeps the most recent `report_window` reports per (kind, reporter).
  void ingest_report(ReportKind kind, NodeId reporter, NodeId peer, double score,
                     sim::SimTime at);

  /// Recomputes the fused score for a peer with explicit weights.
  /// Idempotent. Creates no record for unknown peers.
  double fuse(NodeId peer, const TrustWeights& weights);

  /// Fused score, 0.5 for unknown peers.
  double fused(NodeId peer) const;
  /// Classification, neutral for unknown peers.
  TrustClass cls(NodeId peer) const;

  const TrustRecord* find(NodeId peer) const;
  const std::map<NodeId, TrustRecord>& records() const { return records_; }

 private:
  void refuse(NodeId peer, TrustRecord& rec, const TrustWeights& weights);
  std::optional<double> mean_reports(const std::vector<Report>& reports) const;

  NodeId owner_;
  TrustWeights weights_;
  std::uint32_t report_window_;
  std::map<NodeId, TrustRecord> records_;
};

/// Sliding-window bypass counter backing link labels.
class LinkQuality {
 public:
  LinkQuality(std::uint32_t threshold, sim::SimTime window)
      : threshold_(threshold), window_(window) {}

  void record_bypass(sim::SimTime now);
  std::uint32_t count(sim::SimTime now) const;
  LinkLabel label(sim::SimTime now) const { return label_link(count(now), threshold_); }
  void clear() { events_.clear(); }

 private:
  void expire(sim::SimTime now);

  std::uint32_t threshold_;
  sim::SimTime window_;
  mutable std::deque<sim::SimTime> events_;
};

}  // namespace manet::trust
