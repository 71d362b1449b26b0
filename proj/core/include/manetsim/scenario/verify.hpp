#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace manet::scenario {

/// Outcome of replaying a trace against the rules the simulator claims to
/// uphold. `problems` holds one line per violation, capped so a broken
/// trace cannot flood the caller.
struct VerifyResult {
  bool ok = false;
  std::uint64_t lines = 0;
  std::vector<std::string> problems;
};

/// Independently re-derives the run's accounting from a trace and checks
/// it line by line:
///  - timestamps never go backwards, every line parses, a summary exists
///  - data conservation: each originated uid settles exactly once
///    (delivered or dropped); the summary's counters and derived metrics
///    match the recomputation
///  - first-sight flags on rreq/update lines agree with an independent
///    seen-set
///  - no routing loop among entries that share a destination sequence
///    number
///  - a node that rejected a packet's signature never forwards that uid
///  - trust-gated selection never picks a next hop it classified bad
///  - forwarded route requests per (node, originator) stay within the
///    flood limiter's token envelope
VerifyResult verify_trace_text(const std::string& text);
VerifyResult verify_trace_file(const std::string& path);

}  // namespace manet::scenario
