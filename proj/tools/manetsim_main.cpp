#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "manetsim/error.hpp"
#include "manetsim/metrics/metrics.hpp"
#include "manetsim/scenario/batch.hpp"
#include "manetsim/scenario/scenario.hpp"
#include "manetsim/scenario/simulation.hpp"
#include "manetsim/scenario/verify.hpp"

#ifndef MANETSIM_VERSION
#define MANETSIM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace manet;

namespace {

// Exit discipline: 0 success, 2 bad input (arguments, scenario files,
// missing paths), 3 a run or verification that went wrong.
constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitRunFailed = 3;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (text.find(',') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = text.find(',', pos);
      const std::string tok =
          text.substr(pos, comma == std::string::npos ? text.size() - pos : comma - pos);
      pos = comma == std::string::npos ? text.size() + 1 : comma + 1;
      if (tok.empty()) continue;
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(tok, &used);
      if (used != tok.size()) throw ValidationError("bad seed: '" + tok + "'");
      seeds.push_back(v);
    }
    if (seeds.empty()) throw ValidationError("--seeds lists no seeds");
  } else {
    std::size_t used = 0;
    const std::uint64_t n = std::stoull(text, &used);
    if (used != text.size() || n == 0)
      throw ValidationError("--seeds wants a count >= 1 or a comma list");
    for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
  }
  return seeds;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimError("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw SimError("short write to " + path.string());
}

int do_run(const std::string& scenario_path, std::uint64_t seed,
           const std::string& protocol_s, const std::string& attack_s,
           const std::string& out_dir) {
  const scenario::Scenario base = scenario::load_scenario(scenario_path);
  const Protocol proto = protocol_s.empty()
                             ? base.protocol
                             : (protocol_s == "hsrp" ? Protocol::hsrp : Protocol::aodv);
  // With no explicit flag the file's own intent decides: scenarios that
  // name attackers run them, everything else runs clean.
  const bool attack = attack_s.empty() ? !base.attacks.empty() : attack_s == "on";

  fs::create_directories(out_dir);
  std::string csv = metrics::csv_header() + "\n";
  for (const scenario::Scenario& variant : scenario::expand_variants(base)) {
    scenario::RunSpec spec;
    spec.scenario = variant;
    spec.protocol = proto;
    spec.attacks_enabled = attack;
    spec.seed = seed;
    char tail[64];
    std::snprintf(tail, sizeof(tail), "_%s_%s_s%llu.trace", protocol_name(proto),
                  attack ? "on" : "off", static_cast<unsigned long long>(seed));
    const fs::path trace_path = fs::path(out_dir) / (variant.name + tail);
    const scenario::RunOutput out = scenario::run_one(spec, trace_path.string());
    const std::string row = metrics::csv_row(out.meta, out.report);
    csv += row + "\n";
    std::printf("%s\n", row.c_str());
  }
  write_file(fs::path(out_dir) / "results.csv", csv);
  return kExitOk;
}

int do_batch(const std::string& dir, const std::string& seeds_s, unsigned jobs,
             const std::string& out_dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) throw ValidationError("not a directory: " + dir);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".scn")
      files.push_back(entry.path());
  if (files.empty()) throw ValidationError("no .scn files under " + dir);
  std::sort(files.begin(), files.end());

  std::vector<scenario::Scenario> scenarios;
  scenarios.reserve(files.size());
  for (const fs::path& f : files) scenarios.push_back(scenario::load_scenario(f.string()));

  const std::vector<std::uint64_t> seeds = parse_seeds(seeds_s);
  const auto jobs_list = scenario::plan_batch(scenarios, seeds);
  std::fprintf(stderr, "batch: %zu runs on %u workers\n", jobs_list.size(), jobs);
  const scenario::BatchResult result = scenario::run_batch(jobs_list, jobs);

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "results.csv", result.csv);
  write_file(fs::path(out_dir) / "summary.txt", result.summary_table);
  std::printf("%s", result.summary_table.c_str());
  for (const std::string& f : result.failures)
    std::fprintf(stderr, "failed: %s\n", f.c_str());
  return result.failures.empty() ? kExitOk : kExitRunFailed;
}

int do_verify(const std::string& trace_path) {
  const scenario::VerifyResult r = scenario::verify_trace_file(trace_path);
  for (const std::string& p : r.problems) std::fprintf(stderr, "%s\n", p.c_str());
  if (r.ok) {
    std::printf("trace ok: %llu lines\n", static_cast<unsigned long long>(r.lines));
    return kExitOk;
  }
  std::fprintf(stderr, "trace FAILED: %zu problem(s) in %llu lines\n",
               r.problems.size(), static_cast<unsigned long long>(r.lines));
  return kExitRunFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic ad hoc network simulator"};
  app.set_version_flag("--version", std::string("manetsim ") + MANETSIM_VERSION);
  app.require_subcommand(1);

  std::string run_scenario, run_protocol, run_attack, run_out;
  std::uint64_t run_seed = 1;
  CLI::App* run = app.add_subcommand("run", "run one scenario, write csv and trace");
  run->add_option("--scenario", run_scenario, "scenario file (.scn)")->required();
  run->add_option("--seed", run_seed, "master seed")->required();
  run->add_option("--protocol", run_protocol, "override the scenario's protocol")
      ->check(CLI::IsMember({"aodv", "hsrp"}));
  run->add_option("--attack", run_attack, "force attacker activation on or off")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--out", run_out, "output directory")->required();

  std::string batch_dir, batch_seeds, batch_out;
  unsigned batch_jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* batch =
      app.add_subcommand("batch", "sweep a scenario directory across seeds");
  batch->add_option("--scenarios", batch_dir, "directory of .scn files")->required();
  batch
      ->add_option("--seeds", batch_seeds,
                   "seed count n (runs 1..n) or a comma-separated list")
      ->required();
  batch->add_option("--jobs", batch_jobs, "worker threads");
  batch->add_option("--out", batch_out, "output directory")->required();

  std::string verify_path;
  CLI::App* verify =
      app.add_subcommand("verify-trace", "replay a trace and check its invariants");
  verify->add_option("trace", verify_path, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (run->parsed())
      return do_run(run_scenario, run_seed, run_protocol, run_attack, run_out);
    if (batch->parsed()) return do_batch(batch_dir, batch_seeds, batch_jobs, batch_out);
    if (verify->parsed()) return do_verify(verify_path);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return kExitRunFailed;
  }
  return kExitBadInput;
}
