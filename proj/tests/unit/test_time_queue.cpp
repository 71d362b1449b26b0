#include <vector>

#include "doctest.h"
#include "manetsim/error.hpp"
#include "manetsim/sim/event_queue.hpp"
#include "manetsim/sim/time.hpp"

using namespace manet;
using sim::EventQueue;
using sim::SimTime;

TEST_SUITE_BEGIN("time_queue");

TEST_CASE("simtime constructors and conversions") {
  CHECK(SimTime::micros(1500).us == 1500);
  CHECK(SimTime::millis(3).us == 3000);
  CHECK(SimTime::seconds(2.5).us == 2'500'000);
  CHECK(SimTime::seconds(0.0000005).us == 1);  // rounds, not truncates
  CHECK(SimTime::micros(1'000'000).as_seconds() == doctest::Approx(1.0));
  // as_seconds is us * 1e-6 exactly; integer microsecond counts up to 2^53
  // round-trip through double without loss.
  CHECK(SimTime::micros(123456789).as_seconds() == 123456789 * 1e-6);
}

TEST_CASE("simtime arithmetic saturates at zero") {
  const SimTime a = SimTime::micros(100);
  const SimTime b = SimTime::micros(250);
  CHECK((b - a).us == 150);
  CHECK((a - b).us == 0);
  CHECK((a + b).us == 350);
  SimTime c = a;
  c += b;
  CHECK(c.us == 350);
}

TEST_CASE("simtime ordering") {
  CHECK(SimTime::micros(1) < SimTime::micros(2));
  CHECK(SimTime::micros(2) == SimTime::micros(2));
  CHECK(sim::kTimeZero <= SimTime::micros(0));
}

TEST_CASE("events fire in time order, ties in insertion order") {
  EventQueue q;
  std::vector<int> fired;
  q.schedule(SimTime::micros(30), [&] { fired.push_back(3); });
  q.schedule(SimTime::micros(10), [&] { fired.push_back(1); });
  q.schedule(SimTime::micros(20), [&] { fired.push_back(20); });
  q.schedule(SimTime::micros(20), [&] { fired.push_back(21); });
  q.schedule(SimTime::micros(20), [&] { fired.push_back(22); });
  const std::uint64_t n = q.run_until(SimTime::micros(100));
  CHECK(n == 5);
  CHECK(fired == std::vector<int>{1, 20, 21, 22, 3});
  CHECK(q.now() == SimTime::micros(100));
}

TEST_CASE("run_until boundary is inclusive") {
  EventQueue q;
  int hits = 0;
  q.schedule(SimTime::micros(50), [&] { ++hits; });
  q.schedule(SimTime::micros(51), [&] { ++hits; });
  CHECK(q.run_until(SimTime::micros(50)) == 1);
  CHECK(hits == 1);
  CHECK(q.pending_count() == 1);
  CHECK(q.run_until(SimTime::micros(51)) == 1);
  CHECK(hits == 2);
  CHECK(q.empty());
}

TEST_CASE("events scheduled while running fire in the same pass when due") {
  EventQueue q;
  std::vector<int> fired;
  q.schedule(SimTime::micros(10), [&] {
    fired.push_back(1);
    q.schedule_in(SimTime::micros(5), [&] { fired.push_back(2); });
    q.schedule_in(SimTime::micros(500), [&] { fired.push_back(9); });
  });
  q.run_until(SimTime::micros(100));
  CHECK(fired == std::vector<int>{1, 2});
  CHECK(q.pending_count() == 1);
}

TEST_CASE("scheduling at the current instant is allowed, in the past is not") {
  EventQueue q;
  q.schedule(SimTime::micros(10), [] {});
  q.run_until(SimTime::micros(10));
  int hits = 0;
  q.schedule(SimTime::micros(10), [&] { ++hits; });  // exactly now: fine
  CHECK_THROWS_AS(q.schedule(SimTime::micros(9), [] {}), SchedulingInPast);
  q.run_until(SimTime::micros(10));
  CHECK(hits == 1);
}

TEST_CASE("cancel prevents firing; bad handles throw") {
  EventQueue q;
  int hits = 0;
  const sim::EventHandle h = q.schedule(SimTime::micros(10), [&] { ++hits; });
  q.cancel(h);
  q.run_until(SimTime::micros(20));
  CHECK(hits == 0);
  CHECK_THROWS_AS(q.cancel(h), CancelError);          // already cancelled
  CHECK_THROWS_AS(q.cancel(999999), CancelError);     // never existed

  const sim::EventHandle h2 = q.schedule(SimTime::micros(30), [&] { ++hits; });
  q.run_until(SimTime::micros(30));
  CHECK(hits == 1);
  CHECK_THROWS_AS(q.cancel(h2), CancelError);         // already fired
}

TEST_CASE("run_until returns the number of executed events, not cancelled ones") {
  EventQueue q;
  const auto h = q.schedule(SimTime::micros(5), [] {});
  q.schedule(SimTime::micros(6), [] {});
  q.schedule(SimTime::micros(7), [] {});
  q.cancel(h);
  CHECK(q.run_until(SimTime::micros(10)) == 2);
}

TEST_SUITE_END();
