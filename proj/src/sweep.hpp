#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"

namespace rism {

/// `key=v1,v2,...`
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Throws ConfigError on a malformed spec.
SweepAxis parse_axis(std::string_view spec);

struct RunSpec {
  std::uint64_t run_id = 0;
  std::uint64_t seed = 0;
  ScenarioConfig config;
};

/// Cross product of the axes (first axis outermost) times the seeds
/// (innermost). Seed i of a point is master_seed + i, so points that differ
/// only in protocol share their scenario.
std::vector<RunSpec> expand_sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes,
                                  std::uint32_t seeds, std::uint64_t master_seed);

struct RunResult {
  RunInfo info;
  MetricsReport report;
};

/// A run that threw; carries the offending seed and config.
class RunFailure : public std::runtime_error {
 public:
  RunFailure(const RunSpec& spec, const std::string& what);
  std::uint64_t run_id() const { return run_id_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t run_id_;
  std::uint64_t seed_;
};

RunResult run_one(const RunSpec& spec, std::ostream* trace = nullptr);

/// Runs every spec on up to `threads` workers; results come back in spec
/// order. When trace_prefix is non-empty each run writes `<prefix>` (single
/// run) or `<prefix>.<run_id>`.
std::vector<RunResult> run_all(const std::vector<RunSpec>& specs, unsigned threads,
                               const std::string& trace_prefix = {});

void write_csv(std::ostream& out, const std::vector<RunResult>& results);

}  // namespace rism
