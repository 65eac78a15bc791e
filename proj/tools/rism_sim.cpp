// Command-line runner: single runs or sweeps, CSV to a file or stdout.

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "rism/rism.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRun = 2;

int exit_code(rism_status s) { return s == RISM_ERR_RUN || s == RISM_ERR_IO ? kExitRun : kExitConfig; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MANET simulator: DSR with and without the RISM reputation IDS"};
  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::string> sweeps;
  unsigned seeds = 1;
  std::uint64_t master_seed = 1;
  std::string out_path;
  std::string trace_path;
  unsigned threads = 0;
  bool quiet = false;

  app.add_option("--config", config_path, "config file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "override, key=value (repeatable)");
  app.add_option("--sweep", sweeps, "sweep axis, key=v1,v2,... (repeatable)");
  app.add_option("--seeds", seeds, "runs per sweep point")->check(CLI::PositiveNumber);
  app.add_option("--master-seed", master_seed, "seed of the first run at each point");
  app.add_option("--out", out_path, "CSV output (default stdout)");
  app.add_option("--trace", trace_path, "event trace; sweeps append .<run_id>");
  app.add_option("--threads", threads, "worker threads, 0 = all cores");
  app.add_flag("--quiet", quiet, "no progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  rism_config* cfg = nullptr;
  rism_config_new(&cfg);
  auto bail = [&](rism_status s) {
    std::fprintf(stderr, "rism-sim: %s\n", rism_last_error());
    rism_config_free(cfg);
    return exit_code(s);
  };

  if (!config_path.empty()) {
    if (rism_status s = rism_config_load(cfg, config_path.c_str()); s != RISM_OK) return bail(s == RISM_ERR_IO ? RISM_ERR_CONFIG : s);
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "rism-sim: --set expects key=value, got '%s'\n", kv.c_str());
      rism_config_free(cfg);
      return kExitConfig;
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (rism_status s = rism_config_set(cfg, key.c_str(), value.c_str()); s != RISM_OK) return bail(s);
  }

  std::vector<const char*> axes;
  for (const auto& s : sweeps) axes.push_back(s.c_str());
  std::size_t rows = 0;
  const rism_status s = rism_sweep(cfg, axes.data(), axes.size(), seeds, master_seed, threads,
                                   trace_path.empty() ? nullptr : trace_path.c_str(),
                                   out_path.empty() ? nullptr : out_path.c_str(), &rows);
  if (s != RISM_OK) return bail(s);
  if (!quiet && !out_path.empty()) std::fprintf(stderr, "rism-sim: %zu runs written to %s\n", rows, out_path.c_str());
  rism_config_free(cfg);
  return 0;
}
