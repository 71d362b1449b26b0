#include <benchmark/benchmark.h>

#include "manetsim/crypto/sha256.hpp"
#include "manetsim/crypto/tea.hpp"
#include "manetsim/mobility/mobility.hpp"
#include "manetsim/scenario/simulation.hpp"
#include "manetsim/sim/event_queue.hpp"
#include "manetsim/sim/random.hpp"

using namespace manet;

namespace {

void BM_EventQueueChurn(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    sim::EventQueue q;
    std::uint64_t fired = 0;
    sim::RandomStream rng(7);
    for (std::uint64_t i = 0; i < n; ++i)
      q.schedule(sim::SimTime{rng.below(1000000)}, [&fired] { ++fired; });
    q.run_until(sim::SimTime::seconds(1.0));
    benchmark::DoNotOptimize(fired);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n) * state.iterations());
}
BENCHMARK(BM_EventQueueChurn)->Arg(1000)->Arg(100000);

void BM_TeaBlock(benchmark::State& state) {
  crypto::TeaKey key{0x01234567u, 0x89ABCDEFu, 0xFEDCBA98u, 0x76543210u};
  crypto::Block64 b{0xDEADBEEFu, 0x0BADF00Du};
  for (auto _ : state) {
    b = crypto::tea_encrypt(b, key);
    benchmark::DoNotOptimize(b);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TeaBlock);

void BM_Sha256_1K(benchmark::State& state) {
  Bytes msg(1024, 0xA5);
  for (auto _ : state) {
    auto digest = crypto::sha256(msg);
    benchmark::DoNotOptimize(digest);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(msg.size()) * state.iterations());
}
BENCHMARK(BM_Sha256_1K);

void BM_Adjacency(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  sim::RandomStream rng(11);
  mobility::Area area{1000.0, 1000.0};
  const auto pos = mobility::init_positions(n, area, rng);
  for (auto _ : state) {
    auto adj = mobility::adjacency(pos, 250.0);
    benchmark::DoNotOptimize(adj);
  }
}
BENCHMARK(BM_Adjacency)->Arg(50)->Arg(500);

void BM_SmallRun(benchmark::State& state) {
  scenario::Scenario s;
  s.name = "bench";
  s.nodes = 20;
  s.area = {500.0, 500.0};
  s.speed = {0.0, 5.0};
  s.duration_s = 10.0;
  s.traffic.flow_count = 4;
  s.traffic.data_rate_pps = 2.0;
  for (auto _ : state) {
    scenario::RunSpec spec;
    spec.scenario = s;
    spec.protocol = state.range(0) == 0 ? Protocol::aodv : Protocol::hsrp;
    spec.attacks_enabled = false;
    spec.seed = 5;
    auto out = scenario::run_one(spec);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_SmallRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
