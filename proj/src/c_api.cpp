#include "rism/rism.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>

#include "simulation.hpp"
#include "sweep.hpp"

struct rism_config {
  rism::ScenarioConfig cfg;
};

struct rism_sim {
  std::unique_ptr<std::ofstream> trace;
  std::unique_ptr<rism::Simulation> sim;
};

namespace {

thread_local std::string g_last_error;

rism_status fail(rism_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

rism_status ok() {
  g_last_error.clear();
  return RISM_OK;
}

// Maps exceptions thrown by the core onto status codes.
template <class F>
rism_status guarded(F&& f) {
  try {
    return f();
  } catch (const rism::ConfigError& e) {
    return fail(RISM_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RISM_ERR_CONFIG, e.what());
  } catch (const rism::RunFailure& e) {
    return fail(RISM_ERR_RUN, e.what());
  } catch (const std::exception& e) {
    return fail(RISM_ERR_RUN, e.what());
  } catch (...) {
    return fail(RISM_ERR_RUN, "unknown error");
  }
}

void fill(const rism::MetricsReport& r, rism_metrics* out) {
  out->data_sent = r.data_sent;
  out->data_received = r.data_received;
  out->control_generated = r.control_generated;
  out->warning_count = r.warning_count;
  out->drops_behavior = r.drops_behavior;
  out->drops_queue = r.drops_queue;
  out->drops_noroute = r.drops_noroute;
  out->drops_linkloss = r.drops_linkloss;
  out->in_flight = r.in_flight;
  out->pdr = r.pdr;
  out->overhead_ratio = r.overhead_ratio;
  out->overhead_ratio_with_ids = r.overhead_ratio_with_ids;
}

}  // namespace

extern "C" {

const char* rism_last_error(void) { return g_last_error.c_str(); }

const char* rism_csv_header(void) { return rism::csv_header(); }

rism_status rism_config_new(rism_config** out) {
  if (!out) return fail(RISM_ERR_ARG, "null output pointer");
  *out = new rism_config{};
  return ok();
}

void rism_config_free(rism_config* cfg) { delete cfg; }

rism_status rism_config_parse(rism_config* cfg, const char* text) {
  if (!cfg || !text) return fail(RISM_ERR_ARG, "null argument");
  return guarded([&] {
    rism::ScenarioConfig tmp = cfg->cfg;
    rism::parse_config_into(tmp, text);
    cfg->cfg = std::move(tmp);
    return ok();
  });
}

rism_status rism_config_load(rism_config* cfg, const char* path) {
  if (!cfg || !path) return fail(RISM_ERR_ARG, "null argument");
  std::ifstream in(path);
  if (!in) return fail(RISM_ERR_IO, std::string("cannot read ") + path);
  std::ostringstream text;
  text << in.rdbuf();
  const rism_status s = rism_config_parse(cfg, text.str().c_str());
  if (s != RISM_OK) g_last_error = std::string(path) + ": " + g_last_error;
  return s;
}

rism_status rism_config_set(rism_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(RISM_ERR_ARG, "null argument");
  return guarded([&] {
    rism::ScenarioConfig tmp = cfg->cfg;
    tmp.set(key, value);
    tmp.validate();
    cfg->cfg = std::move(tmp);
    return ok();
  });
}

rism_status rism_config_to_text(const rism_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return fail(RISM_ERR_ARG, "null config");
  const std::string text = cfg->cfg.to_text();
  if (needed) *needed = text.size() + 1;
  if (!buf) return ok();
  if (cap < text.size() + 1) return fail(RISM_ERR_ARG, "buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return ok();
}

rism_status rism_sim_new(const rism_config* cfg, uint64_t seed, const char* trace_path, rism_sim** out) {
  if (!cfg || !out) return fail(RISM_ERR_ARG, "null argument");
  *out = nullptr;
  auto handle = std::make_unique<rism_sim>();
  if (trace_path) {
    handle->trace = std::make_unique<std::ofstream>(trace_path);
    if (!*handle->trace) return fail(RISM_ERR_IO, std::string("cannot write ") + trace_path);
  }
  return guarded([&] {
    handle->sim = std::make_unique<rism::Simulation>(cfg->cfg, seed, rism::ScenarioOverrides{}, handle->trace.get());
    *out = handle.release();
    return ok();
  });
}

void rism_sim_free(rism_sim* sim) { delete sim; }

rism_status rism_sim_run_until(rism_sim* sim, double t) {
  if (!sim) return fail(RISM_ERR_ARG, "null simulation");
  return guarded([&] {
    sim->sim->run_until(t);
    return ok();
  });
}

double rism_sim_now(const rism_sim* sim) { return sim ? sim->sim->now() : 0.0; }

rism_status rism_sim_metrics(const rism_sim* sim, rism_metrics* out) {
  if (!sim || !out) return fail(RISM_ERR_ARG, "null argument");
  fill(sim->sim->report(), out);
  return ok();
}

rism_status rism_run(const rism_config* cfg, uint64_t seed, const char* trace_path, rism_metrics* out) {
  if (!cfg || !out) return fail(RISM_ERR_ARG, "null argument");
  rism_sim* sim = nullptr;
  rism_status s = rism_sim_new(cfg, seed, trace_path, &sim);
  if (s != RISM_OK) return s;
  s = rism_sim_run_until(sim, cfg->cfg.duration);
  if (s == RISM_OK) s = rism_sim_metrics(sim, out);
  rism_sim_free(sim);
  return s;
}

rism_status rism_sweep(const rism_config* cfg, const char* const* axes, size_t n_axes, uint32_t seeds,
                       uint64_t master_seed, unsigned threads, const char* trace_prefix, const char* out_csv,
                       size_t* rows_written) {
  if (!cfg || (n_axes > 0 && !axes)) return fail(RISM_ERR_ARG, "null argument");
  std::vector<rism::RunSpec> specs;
  rism_status s = guarded([&] {
    std::vector<rism::SweepAxis> parsed;
    for (size_t i = 0; i < n_axes; ++i) {
      if (!axes[i]) throw std::invalid_argument("null sweep axis");
      parsed.push_back(rism::parse_axis(axes[i]));
    }
    specs = rism::expand_sweep(cfg->cfg, parsed, seeds, master_seed);
    return ok();
  });
  if (s != RISM_OK) return s;

  std::unique_ptr<std::ofstream> file;
  if (out_csv) {
    file = std::make_unique<std::ofstream>(out_csv);
    if (!*file) return fail(RISM_ERR_IO, std::string("cannot write ") + out_csv);
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return guarded([&] {
    const auto results = rism::run_all(specs, threads, trace_prefix ? trace_prefix : "");
    std::ostream& out = file ? static_cast<std::ostream&>(*file) : std::cout;
    rism::write_csv(out, results);
    out.flush();
    if (!out) return fail(RISM_ERR_IO, "failed writing CSV");
    if (rows_written) *rows_written = results.size();
    return ok();
  });
}

}  // extern "C"
