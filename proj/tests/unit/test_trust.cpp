#include <cmath>

#include "doctest.h"
#include "manetsim/error.hpp"
#include "manetsim/trust/trust.hpp"

using namespace manet;
using namespace manet::trust;
using manet::sim::SimTime;

TEST_SUITE_BEGIN("trust");

TEST_CASE("classification bands") {
  CHECK(classify(0.0) == TrustClass::bad);
  CHECK(classify(0.25) == TrustClass::bad);
  CHECK(classify(0.4999999) == TrustClass::bad);
  CHECK(classify(0.5) == TrustClass::neutral);
  CHECK(classify(0.65) == TrustClass::neutral);
  CHECK(classify(0.7999999) == TrustClass::neutral);
  CHECK(classify(0.8) == TrustClass::good);
  CHECK(classify(0.9) == TrustClass::good);
  CHECK(classify(1.0) == TrustClass::good);
}

TEST_CASE("engagement score is Laplace smoothed") {
  EngagementStats s;
  CHECK(s.score() == 0.5);
  s.successes = 1;
  CHECK(s.score() == doctest::Approx(2.0 / 3.0));
  s.failures = 1;
  CHECK(s.score() == 0.5);
  s.successes = 98;
  CHECK(s.score() == doctest::Approx(99.0 / 101.0));
}

TEST_CASE("fresh peers fuse to exactly 0.5 and classify neutral") {
  TrustTable t(0, TrustWeights{});
  CHECK(t.fused(7) == 0.5);
  CHECK(t.cls(7) == TrustClass::neutral);
  CHECK(t.find(7) == nullptr);
}

TEST_CASE("direct interactions move the fused score") {
  TrustTable t(0, TrustWeights{});
  const double after_one = t.record_interaction(5, Outcome::success);
  // E = 2/3, missing report sources contribute the neutral 0.5 default.
  CHECK(after_one == doctest::Approx(0.5 * (2.0 / 3.0) + 0.3 * 0.5 + 0.2 * 0.5));
  double prev = after_one;
  for (int i = 0; i < 30; ++i) {
    const double now = t.record_interaction(5, Outcome::success);
    CHECK(now >= prev);
    prev = now;
  }
  CHECK(t.cls(5) == TrustClass::good);

  for (int i = 0; i < 80; ++i) t.record_interaction(5, Outcome::failure);
  CHECK(t.cls(5) == TrustClass::bad);
}

TEST_CASE("self trust and self reports are rejected") {
  TrustTable t(3, TrustWeights{});
  CHECK_THROWS_AS(t.record_interaction(3, Outcome::success), SelfTrust);
  CHECK_THROWS_AS(t.ingest_report(ReportKind::reputation, 5, 5, 0.8, SimTime{}),
                  SelfReport);
  CHECK_THROWS_AS(t.ingest_report(ReportKind::reputation, 5, 6, 1.5, SimTime{}),
                  ScoreOutOfRange);
  CHECK_THROWS_AS(t.ingest_report(ReportKind::reputation, 5, 6, -0.1, SimTime{}),
                  ScoreOutOfRange);
  // Reports about the owner are dropped silently.
  t.ingest_report(ReportKind::reputation, 5, 3, 0.1, SimTime{});
  CHECK(t.find(3) == nullptr);
}

TEST_CASE("weights must be a distribution") {
  CHECK_THROWS_AS(TrustTable(0, TrustWeights{0.5, 0.3, 0.1}), BadWeights);
  CHECK_THROWS_AS(TrustTable(0, TrustWeights{-0.2, 0.6, 0.6}), BadWeights);
  TrustTable ok(0, TrustWeights{1.0, 0.0, 0.0});
  CHECK(ok.fused(1) == 0.5);
}

TEST_CASE("reports blend in at their weight") {
  TrustTable t(0, TrustWeights{});
  t.ingest_report(ReportKind::reputation, 2, 9, 1.0, SimTime{});
  // E missing -> 0.5, reputation mean 1.0, recommendation missing -> 0.5.
  CHECK(t.fused(9) == doctest::Approx(0.5 * 0.5 + 0.3 * 1.0 + 0.2 * 0.5));
  t.ingest_report(ReportKind::recommendation, 3, 9, 0.0, SimTime{});
  CHECK(t.fused(9) == doctest::Approx(0.5 * 0.5 + 0.3 * 1.0 + 0.2 * 0.0));
}

TEST_CASE("reports from peers classified bad are excluded at fusion") {
  TrustTable t(0, TrustWeights{});
  // Make node 4 bad in 0's eyes.
  for (int i = 0; i < 50; ++i) t.record_interaction(4, Outcome::failure);
  REQUIRE(t.cls(4) == TrustClass::bad);

  const double before = t.fused(9);
  t.ingest_report(ReportKind::reputation, 4, 9, 1.0, SimTime{});
  CHECK(t.fused(9) == doctest::Approx(before));  // liar's vote does not count

  t.ingest_report(ReportKind::reputation, 5, 9, 1.0, SimTime{});
  CHECK(t.fused(9) > before);  // a neutral reporter's vote does
}

TEST_CASE("report window keeps the most recent per reporter and kind") {
  TrustTable t(0, TrustWeights{}, 4);
  for (int i = 0; i < 10; ++i)
    t.ingest_report(ReportKind::reputation, 2, 9, i < 6 ? 0.0 : 1.0,
                    SimTime::seconds(i));
  // Only the last 4 reports (all 1.0) should remain.
  CHECK(t.fused(9) == doctest::Approx(0.5 * 0.5 + 0.3 * 1.0 + 0.2 * 0.5));
}

TEST_CASE("fuse with explicit weights is idempotent") {
  TrustTable t(0, TrustWeights{});
  t.record_interaction(5, Outcome::success);
  t.ingest_report(ReportKind::reputation, 2, 5, 0.9, SimTime{});
  const double a = t.fuse(5, TrustWeights{});
  const double b = t.fuse(5, TrustWeights{});
  CHECK(a == b);
  CHECK(t.fused(5) == a);
  // Unknown peers are not materialized by fuse.
  t.fuse(77, TrustWeights{});
  CHECK(t.find(77) == nullptr);
}

TEST_CASE("link labels from bypass counts") {
  CHECK(label_link(0, 5) == LinkLabel::strong);
  CHECK(label_link(1, 5) == LinkLabel::normal);
  CHECK(label_link(4, 5) == LinkLabel::normal);
  CHECK(label_link(5, 5) == LinkLabel::weak);
  CHECK(label_link(11, 5) == LinkLabel::weak);
}

TEST_CASE("link quality window expires old bypasses") {
  LinkQuality lq(3, SimTime::seconds(10.0));
  CHECK(lq.label(SimTime{}) == LinkLabel::strong);
  lq.record_bypass(SimTime::seconds(1.0));
  lq.record_bypass(SimTime::seconds(2.0));
  lq.record_bypass(SimTime::seconds(3.0));
  CHECK(lq.count(SimTime::seconds(3.0)) == 3);
  CHECK(lq.label(SimTime::seconds(3.0)) == LinkLabel::weak);
  // At t=12.5 the bypasses at 1.0 and 2.0 have aged out of the window.
  CHECK(lq.count(SimTime::seconds(12.5)) == 1);
  CHECK(lq.label(SimTime::seconds(12.5)) == LinkLabel::normal);
  lq.clear();
  CHECK(lq.count(SimTime::seconds(12.5)) == 0);
}

TEST_SUITE_END();
