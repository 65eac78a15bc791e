#include "sweep.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "simulation.hpp"

namespace rism {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

SweepAxis parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError(0, "sweep axis needs key=v1,v2,...: " + std::string(text));
  SweepAxis axis;
  axis.key = trim(text.substr(0, eq));
  if (axis.key.empty()) throw ConfigError(0, "sweep axis has no key");
  std::string_view rest = text.substr(eq + 1);
  while (true) {
    const auto comma = rest.find(',');
    std::string v = trim(rest.substr(0, comma));
    if (v.empty()) throw ConfigError(0, "empty value in sweep axis " + axis.key);
    axis.values.push_back(std::move(v));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  // fail early on bad values rather than halfway through a sweep
  ScenarioConfig probe;
  for (const auto& v : axis.values) probe.set(axis.key, v);
  return axis;
}

std::vector<RunSpec> expand_sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes,
                                  std::uint32_t seeds, std::uint64_t master_seed) {
  if (seeds == 0) throw ConfigError(0, "seeds must be >= 1");
  std::vector<ScenarioConfig> points{base};
  for (const auto& axis : axes) {
    std::vector<ScenarioConfig> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        ScenarioConfig c = p;
        c.set(axis.key, v);
        next.push_back(std::move(c));
      }
    }
    points = std::move(next);
  }
  std::vector<RunSpec> specs;
  specs.reserve(points.size() * seeds);
  for (const auto& p : points) {
    p.validate();
    for (std::uint32_t i = 0; i < seeds; ++i) specs.push_back({specs.size(), master_seed + i, p});
  }
  return specs;
}

RunFailure::RunFailure(const RunSpec& spec, const std::string& what)
    : std::runtime_error("run " + std::to_string(spec.run_id) + " (seed " + std::to_string(spec.seed) +
                         ") failed: " + what + "\n" + spec.config.to_text()),
      run_id_(spec.run_id),
      seed_(spec.seed) {}

RunResult run_one(const RunSpec& spec, std::ostream* trace) {
  RunResult r;
  r.info.run_id = spec.run_id;
  r.info.seed = spec.seed;
  r.info.protocol = to_string(spec.config.protocol);
  r.info.nodes = spec.config.nodes;
  r.info.malicious_fraction = spec.config.malicious_fraction;
  r.info.pause_time = spec.config.pause_time;
  r.info.connections = spec.config.effective_connections();
  try {
    Simulation sim(spec.config, spec.seed, {}, trace);
    r.report = sim.run();
  } catch (const std::exception& e) {
    throw RunFailure(spec, e.what());
  }
  return r;
}

std::vector<RunResult> run_all(const std::vector<RunSpec>& specs, unsigned threads, const std::string& trace_prefix) {
  std::vector<RunResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::size_t first_error_index = specs.size();
  std::mutex error_mu;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      try {
        if (trace_prefix.empty()) {
          results[i] = run_one(specs[i]);
        } else {
          const std::string path =
              specs.size() == 1 ? trace_prefix : trace_prefix + "." + std::to_string(specs[i].run_id);
          std::ofstream out(path);
          if (!out) throw RunFailure(specs[i], "cannot open trace file " + path);
          results[i] = run_one(specs[i], &out);
        }
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  if (threads == 0) threads = 1;
  if (threads > specs.size()) threads = static_cast<unsigned>(specs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

void write_csv(std::ostream& out, const std::vector<RunResult>& results) {
  out << csv_header() << '\n';
  for (const auto& r : results) out << csv_row(r.info, r.report) << '\n';
}

}  // namespace rism
