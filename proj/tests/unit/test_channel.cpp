#include <vector>

#include "doctest.h"
#include "manetsim/mobility/channel.hpp"
#include "manetsim/sim/random.hpp"

using namespace manet;
using namespace manet::mobility;
using manet::sim::RandomStream;
using manet::sim::SimTime;

TEST_SUITE_BEGIN("channel");

namespace {

ChannelConfig lossless() {
  ChannelConfig cfg;
  cfg.range_m = 100.0;
  cfg.loss_probability = 0.0;
  cfg.base_delay = SimTime::millis(2);
  cfg.jitter_bound = SimTime::micros(0);
  return cfg;
}

}  // namespace

TEST_CASE("range gates delivery, boundary inclusive") {
  RandomStream rng(1);
  const std::vector<Candidate> cands{
      {1, {100.0, 0.0}},   // exactly at range
      {2, {100.001, 0.0}}, // just outside
      {3, {50.0, 0.0}},
  };
  const auto dels = transmit(lossless(), {}, SimTime{0}, {0.0, 0.0}, cands, rng);
  REQUIRE(dels.size() == 3);
  CHECK(dels[0].delivered);
  CHECK(dels[0].receiver == 1);
  CHECK_FALSE(dels[1].delivered);
  CHECK(dels[1].loss == LossReason::out_of_range);
  CHECK(dels[2].delivered);
  CHECK(rng.draws() == 0);  // lossless + zero jitter: no randomness touched
}

TEST_CASE("deliveries arrive after the base delay plus bounded jitter") {
  ChannelConfig cfg = lossless();
  cfg.jitter_bound = SimTime::millis(1);
  RandomStream rng(2);
  const SimTime now = SimTime::seconds(5.0);
  const std::vector<Candidate> cands{{1, {10.0, 0.0}}, {2, {20.0, 0.0}}};
  const auto dels = transmit(cfg, {}, now, {0.0, 0.0}, cands, rng);
  for (const auto& d : dels) {
    REQUIRE(d.delivered);
    CHECK(d.arrive_at >= now + cfg.base_delay);
    CHECK(d.arrive_at < now + cfg.base_delay + cfg.jitter_bound);
  }
  CHECK(rng.draws() == 2);  // one jitter draw per delivered reception
}

TEST_CASE("loss probability one loses everything with one draw each") {
  ChannelConfig cfg = lossless();
  cfg.loss_probability = 0.999999999;
  RandomStream rng(3);
  const std::vector<Candidate> cands{{1, {10.0, 0.0}}, {2, {20.0, 0.0}}};
  const auto dels = transmit(cfg, {}, SimTime{0}, {0.0, 0.0}, cands, rng);
  CHECK_FALSE(dels[0].delivered);
  CHECK(dels[0].loss == LossReason::random_loss);
  CHECK_FALSE(dels[1].delivered);
  CHECK(rng.draws() == 2);
}

TEST_CASE("jammed receivers consume no randomness") {
  ChannelConfig cfg = lossless();
  cfg.loss_probability = 0.5;
  cfg.jitter_bound = SimTime::millis(1);
  RandomStream rng(4);
  const std::vector<JamRegion> jams{{{50.0, 0.0}, 10.0}};
  const std::vector<Candidate> cands{
      {1, {50.0, 0.0}},   // inside the jam
      {2, {55.0, 0.0}},   // still inside (radius 10)
      {3, {200.0, 0.0}},  // out of range
  };
  const auto dels = transmit(cfg, jams, SimTime{0}, {0.0, 0.0}, cands, rng);
  CHECK(dels[0].loss == LossReason::jammed);
  CHECK(dels[1].loss == LossReason::jammed);
  CHECK(dels[2].loss == LossReason::out_of_range);
  CHECK(rng.draws() == 0);
}

TEST_CASE("results come back in candidate order") {
  RandomStream rng(5);
  const std::vector<Candidate> cands{{9, {1.0, 0.0}}, {4, {2.0, 0.0}}, {7, {3.0, 0.0}}};
  const auto dels = transmit(lossless(), {}, SimTime{0}, {0.0, 0.0}, cands, rng);
  REQUIRE(dels.size() == 3);
  CHECK(dels[0].receiver == 9);
  CHECK(dels[1].receiver == 4);
  CHECK(dels[2].receiver == 7);
}

TEST_CASE("identical inputs replay identically") {
  ChannelConfig cfg = lossless();
  cfg.loss_probability = 0.3;
  cfg.jitter_bound = SimTime::millis(1);
  const std::vector<Candidate> cands{
      {1, {10.0, 0.0}}, {2, {30.0, 0.0}}, {3, {60.0, 0.0}}, {4, {90.0, 0.0}}};
  RandomStream r1(77), r2(77);
  const auto a = transmit(cfg, {}, SimTime{0}, {0.0, 0.0}, cands, r1);
  const auto b = transmit(cfg, {}, SimTime{0}, {0.0, 0.0}, cands, r2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].delivered == b[i].delivered);
    CHECK(a[i].arrive_at == b[i].arrive_at);
    CHECK(a[i].loss == b[i].loss);
  }
}

TEST_CASE("sender inside a jam region can still transmit to nodes outside it") {
  // Jamming is modeled at the receiver: only receivers inside an active
  // region lose the packet.
  RandomStream rng(6);
  const std::vector<JamRegion> jams{{{0.0, 0.0}, 5.0}};
  const std::vector<Candidate> cands{{1, {50.0, 0.0}}};
  const auto dels = transmit(lossless(), jams, SimTime{0}, {0.0, 0.0}, cands, rng);
  CHECK(dels[0].delivered);
}

TEST_SUITE_END();
