#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manetsim/scenario/simulation.hpp"

namespace manet::scenario {

/// One run in a batch: a fully expanded variant plus the run knobs.
struct BatchJob {
  Scenario scenario;
  Protocol protocol = Protocol::aodv;
  bool attack = false;
  std::uint64_t seed = 1;
};

struct BatchRow {
  BatchJob job;
  bool ok = false;
  std::string error;
  RunOutput output;  // valid only when ok
};

struct BatchResult {
  std::vector<BatchRow> rows;          // job order, independent of worker count
  std::string csv;                     // header + one line per successful run
  std::string summary_table;           // per-cell mean/stddev over seeds
  std::vector<std::string> failures;   // one message per failed row
};

/// Expands every scenario (sweeps included) into variants and crosses them
/// with both protocols, attack off/on, and every seed. Job order is fixed:
/// scenario order, then variant order, then aodv before hsrp, off before
/// on, seeds as given. Rows land in preallocated slots, so results do not
/// depend on how many workers run them.
std::vector<BatchJob> plan_batch(const std::vector<Scenario>& scenarios,
                                 const std::vector<std::uint64_t>& seeds);

/// Runs the jobs on up to `workers` threads. A failing run is recorded and
/// the batch keeps going.
BatchResult run_batch(const std::vector<BatchJob>& jobs, unsigned workers);

}  // namespace manet::scenario
