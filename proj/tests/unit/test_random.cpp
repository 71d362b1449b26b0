#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "manetsim/sim/random.hpp"
#include "oracles.hpp"

using manet::sim::RandomStream;
using manet::sim::fork_stream;
using manet::sim::stream_key;

TEST_SUITE_BEGIN("random");

TEST_CASE("output i is the documented counter hash") {
  RandomStream rs(0x1234'5678'9ABC'DEF0ull);
  for (std::uint64_t i = 0; i < 64; ++i)
    CHECK(rs.next_u64() == oracle::stream_out(0x1234'5678'9ABC'DEF0ull, i));
  CHECK(rs.draws() == 64);
}

TEST_CASE("stream key derivation matches the documented formula") {
  CHECK(stream_key(42, "layout") == oracle::stream_key(42, "layout"));
  CHECK(stream_key(42, "channel") == oracle::stream_key(42, "channel"));
  CHECK(stream_key(0, "") == oracle::stream_key(0, ""));
  CHECK(stream_key(7, "node/13") == oracle::stream_key(7, "node/13"));
}

TEST_CASE("streams are pure functions of seed and label") {
  RandomStream a = fork_stream(99, "traffic");
  RandomStream b = fork_stream(99, "traffic");
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  // Consuming from one stream does not affect a sibling forked later.
  RandomStream parentish = fork_stream(99, "layout");
  for (int i = 0; i < 100; ++i) parentish.next_u64();
  RandomStream c = fork_stream(99, "traffic");
  RandomStream d = fork_stream(99, "traffic");
  for (int i = 0; i < 16; ++i) CHECK(c.next_u64() == d.next_u64());
}

TEST_CASE("labels separate streams") {
  std::set<std::uint64_t> keys;
  const char* labels[] = {"layout",  "channel", "traffic", "attackers",
                          "keys",    "node/0",  "node/1",  "mob/0",
                          "mob/1",   "node/10"};
  for (const char* l : labels) keys.insert(stream_key(42, l));
  CHECK(keys.size() == 10);
  CHECK(stream_key(42, "layout") != stream_key(43, "layout"));
}

TEST_CASE("uniform stays inside its interval") {
  RandomStream rs(7);
  for (int i = 0; i < 10000; ++i) {
    const double x = rs.uniform(-3.0, 5.0);
    CHECK(x >= -3.0);
    CHECK(x < 5.0);
  }
  CHECK(rs.uniform(2.0, 2.0) == 2.0);  // degenerate interval
}

TEST_CASE("below is bounded and roughly uniform") {
  RandomStream rs(11);
  std::vector<int> hist(10, 0);
  const int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const std::uint64_t v = rs.below(10);
    REQUIRE(v < 10);
    ++hist[v];
  }
  for (int c : hist) {
    CHECK(c > kDraws / 10 - 600);
    CHECK(c < kDraws / 10 + 600);
  }
  CHECK(rs.below(1) == 0);
}

TEST_CASE("exponential has the right mean") {
  RandomStream rs(13);
  const double rate = 2.5;
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rs.exponential(rate);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  CHECK(sum / n == doctest::Approx(1.0 / rate).epsilon(0.02));
}

TEST_CASE("next_double is in [0,1) with 53-bit resolution") {
  RandomStream rs(17);
  for (int i = 0; i < 10000; ++i) {
    const double x = rs.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("draw counting is exact for plain draws") {
  RandomStream rs(19);
  rs.next_u64();
  rs.next_double();
  rs.uniform(0.0, 1.0);
  rs.exponential(1.0);
  CHECK(rs.draws() == 4);  // below() may reject and redraw, so not counted here
}

TEST_SUITE_END();
