#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rism/rism.h"

namespace {

struct Config {
  rism_config* cfg = nullptr;
  Config() { REQUIRE(rism_config_new(&cfg) == RISM_OK); }
  ~Config() { rism_config_free(cfg); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config errors map to status codes") {
  Config c;
  CHECK(rism_config_set(c.cfg, "nodes", "20") == RISM_OK);
  CHECK(rism_config_set(c.cfg, "nodez", "20") == RISM_ERR_CONFIG);
  CHECK(std::string(rism_last_error()).find("unknown key") != std::string::npos);
  CHECK(rism_config_set(c.cfg, "malicious_fraction", "1.5") == RISM_ERR_CONFIG);
  CHECK(rism_config_parse(c.cfg, "pause_time = 100\nprotocol = olsr\n") == RISM_ERR_CONFIG);
  CHECK(std::string(rism_last_error()).find("line 2") != std::string::npos);
  CHECK(rism_config_set(nullptr, "nodes", "1") == RISM_ERR_ARG);
  CHECK(rism_config_load(c.cfg, "/nonexistent/x.cfg") == RISM_ERR_IO);
}

TEST_CASE("config text round trip through the buffer protocol") {
  Config c;
  REQUIRE(rism_config_set(c.cfg, "nodes", "20") == RISM_OK);
  std::size_t needed = 0;
  REQUIRE(rism_config_to_text(c.cfg, nullptr, 0, &needed) == RISM_OK);
  std::string buf(needed, '\0');
  REQUIRE(rism_config_to_text(c.cfg, buf.data(), buf.size(), &needed) == RISM_OK);
  CHECK(buf.find("nodes = 20") != std::string::npos);
  CHECK(rism_config_to_text(c.cfg, buf.data(), 4, &needed) == RISM_ERR_ARG);
}

TEST_CASE("stepwise run matches a one-shot run") {
  Config c;
  REQUIRE(rism_config_set(c.cfg, "duration", "60") == RISM_OK);
  rism_sim* sim = nullptr;
  REQUIRE(rism_sim_new(c.cfg, 5, nullptr, &sim) == RISM_OK);
  CHECK(rism_sim_run_until(sim, 30.0) == RISM_OK);
  CHECK(rism_sim_now(sim) == doctest::Approx(30.0));
  CHECK(rism_sim_run_until(sim, 60.0) == RISM_OK);
  rism_metrics stepped{};
  CHECK(rism_sim_metrics(sim, &stepped) == RISM_OK);
  rism_sim_free(sim);

  rism_metrics once{};
  REQUIRE(rism_run(c.cfg, 5, nullptr, &once) == RISM_OK);
  CHECK(stepped.data_sent == once.data_sent);
  CHECK(stepped.data_received == once.data_received);
  CHECK(stepped.control_generated == once.control_generated);
  CHECK(once.data_sent > 0);
  CHECK(once.data_sent == once.data_received + once.drops_behavior + once.drops_queue + once.drops_noroute +
                              once.drops_linkloss + once.in_flight);
  CHECK(rism_sim_metrics(nullptr, &once) == RISM_ERR_ARG);
}

TEST_CASE("sweep writes header plus one row per run") {
  Config c;
  REQUIRE(rism_config_set(c.cfg, "duration", "30") == RISM_OK);
  const char* axes[] = {"protocol=dsr,rism", "pause_time=0,900"};
  const std::string path = "c_api_sweep.csv";
  std::size_t rows = 0;
  REQUIRE(rism_sweep(c.cfg, axes, 2, 2, 9, 2, nullptr, path.c_str(), &rows) == RISM_OK);
  CHECK(rows == 8);
  const std::string text = slurp(path);
  CHECK(text.rfind(std::string(rism_csv_header()) + "\n", 0) == 0);
  std::istringstream in(text);
  std::string line;
  int n = -1;
  while (std::getline(in, line)) ++n;
  CHECK(n == 8);
  std::remove(path.c_str());

  const char* bad[] = {"protocol=dsr,aodv"};
  CHECK(rism_sweep(c.cfg, bad, 1, 1, 1, 1, nullptr, path.c_str(), &rows) == RISM_ERR_CONFIG);
  CHECK(rism_sweep(c.cfg, axes, 2, 0, 1, 1, nullptr, path.c_str(), &rows) == RISM_ERR_CONFIG);
}

TEST_CASE("trace file is written") {
  Config c;
  REQUIRE(rism_config_set(c.cfg, "duration", "5") == RISM_OK);
  const std::string path = "c_api_trace.txt";
  rism_metrics m{};
  REQUIRE(rism_run(c.cfg, 1, path.c_str(), &m) == RISM_OK);
  const std::string text = slurp(path);
  CHECK(text.find(",data-send,") != std::string::npos);
  std::remove(path.c_str());
  CHECK(rism_run(c.cfg, 1, "/nonexistent/dir/t.txt", &m) == RISM_ERR_IO);
}
