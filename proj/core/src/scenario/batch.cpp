#include "manetsim/scenario/batch.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include "manetsim/metrics/metrics.hpp"

namespace manet::scenario {

std::vector<BatchJob> plan_batch(const std::vector<Scenario>& scenarios,
                                 const std::vector<std::uint64_t>& seeds) {
  std::vector<BatchJob> jobs;
  for (const Scenario& base : scenarios) {
    for (const Scenario& variant : expand_variants(base)) {
      for (Protocol proto : {Protocol::aodv, Protocol::hsrp}) {
        for (bool attack : {false, true}) {
          for (std::uint64_t seed : seeds) {
            BatchJob j;
            j.scenario = variant;
            j.protocol = proto;
            j.attack = attack;
            j.seed = seed;
            jobs.push_back(std::move(j));
          }
        }
      }
    }
  }
  return jobs;
}

namespace {

struct CellKey {
  std::string scenario;
  Protocol protocol;
  bool attack;
  bool operator<(const CellKey& o) const {
    if (scenario != o.scenario) return scenario < o.scenario;
    if (protocol != o.protocol) return protocol < o.protocol;
    return attack < o.attack;
  }
};

struct Accum {
  std::vector<double> pdr, thr, delay, ovh;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

BatchResult run_batch(const std::vector<BatchJob>& jobs, unsigned workers) {
  BatchResult result;
  result.rows.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      BatchRow& row = result.rows[i];
      row.job = jobs[i];
      try {
        RunSpec spec;
        spec.scenario = jobs[i].scenario;
        spec.protocol = jobs[i].protocol;
        spec.attacks_enabled = jobs[i].attack;
        spec.seed = jobs[i].seed;
        row.output = run_one(spec);
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };

  const unsigned n =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  result.csv = metrics::csv_header() + "\n";
  std::map<CellKey, Accum> cells;
  std::vector<CellKey> order;
  for (const BatchRow& row : result.rows) {
    if (!row.ok) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s %s attack=%s seed=%llu: ",
                    row.job.scenario.name.c_str(), protocol_name(row.job.protocol),
                    row.job.attack ? "on" : "off",
                    static_cast<unsigned long long>(row.job.seed));
      result.failures.push_back(buf + row.error);
      continue;
    }
    result.csv += metrics::csv_row(row.output.meta, row.output.report) + "\n";
    const CellKey key{row.job.scenario.name, row.job.protocol, row.job.attack};
    auto [it, fresh] = cells.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.pdr.push_back(row.output.report.pdr);
    it->second.thr.push_back(row.output.report.throughput_bps);
    it->second.delay.push_back(row.output.report.avg_delay_s);
    it->second.ovh.push_back(row.output.report.overhead_ratio);
  }

  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %-5s %-6s %4s %16s %14s %12s %12s\n",
                "scenario", "proto", "attack", "runs", "pdr(mean+/-sd)",
                "thr_bps(mean)", "delay_s", "overhead");
  result.summary_table = line;
  for (const CellKey& key : order) {
    const Accum& a = cells.at(key);
    std::snprintf(line, sizeof(line),
                  "%-28s %-5s %-6s %4zu %8.4f+/-%.4f %14.1f %12.6f %12.4f\n",
                  key.scenario.c_str(), protocol_name(key.protocol),
                  key.attack ? "on" : "off", a.pdr.size(), mean_of(a.pdr),
                  stddev_of(a.pdr), mean_of(a.thr), mean_of(a.delay), mean_of(a.ovh));
    result.summary_table += line;
  }
  return result;
}

}  // namespace manet::scenario
