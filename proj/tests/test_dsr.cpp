#include <doctest.h>

#include <sstream>

#include "dsr.hpp"
#include "scenarios.hpp"

using namespace rism;
using namespace rism::fixtures;

TEST_CASE("cache accepts owner-rooted loop-free paths only") {
  RouteCache c(0, 8);
  CHECK(c.add({0, 1, 2}, 0.0));
  CHECK_FALSE(c.add({1, 2, 3}, 0.0));
  CHECK_FALSE(c.add({0, 1, 0, 2}, 0.0));
  CHECK_FALSE(c.add({0}, 0.0));
  CHECK(c.size() == 1);
  CHECK(c.add({0, 1, 2}, 1.0));  // refresh, not a duplicate
  CHECK(c.size() == 1);
  CHECK(c.entries()[0].learned_at == 1.0);
}

TEST_CASE("prefixes of cached paths are routes") {
  RouteCache c(0, 8);
  c.add({0, 1, 2, 3}, 0.0);
  CHECK(c.best_route(2) == Path{0, 1, 2});
  CHECK(c.best_route(3) == Path{0, 1, 2, 3});
  CHECK_FALSE(c.best_route(4));
}

TEST_CASE("shorter routes win among clean ones") {
  RouteCache c(0, 8);
  c.add({0, 1, 2, 3}, 0.0);
  c.add({0, 4, 3}, 0.0);
  CHECK(c.best_route(3) == Path{0, 4, 3});
  ReputationTable t;
  CHECK(c.best_route(3, &t) == Path{0, 4, 3});
}

TEST_CASE("clean route preferred over one with a suspicious relay") {
  RouteCache c(0, 8);
  ReputationTable t;
  for (int i = 0; i < 5; ++i) t.apply_evidence(7, Evidence::Warning, 0.0);
  REQUIRE(t.category(7) == Category::Suspicious);
  c.add({0, 7, 3}, 0.0, &t);
  c.add({0, 1, 2, 3}, 0.0, &t);
  CHECK(c.best_route(3, &t) == Path{0, 1, 2, 3});
}

TEST_CASE("paths through convicted nodes are refused") {
  RouteCache c(0, 8);
  ReputationTable t;
  t.mark_malicious(5, 0.0);
  CHECK_FALSE(c.add({0, 5, 3}, 0.0, &t));
  CHECK(c.add({0, 1, 3}, 0.0, &t));
  c.add({0, 6, 3}, 0.0);
  t.mark_malicious(6, 1.0);
  CHECK(c.best_route(3, &t) == Path{0, 1, 3});
}

TEST_CASE("link pruning removes only paths using the link") {
  RouteCache c(0, 8);
  c.add({0, 1, 2, 3}, 0.0);
  c.add({0, 1, 4}, 0.0);
  CHECK(c.prune_link(1, 2) == 1);
  REQUIRE(c.size() == 1);
  CHECK(c.entries()[0].path == Path{0, 1, 4});
  c.add({0, 5, 6}, 0.0);
  CHECK(c.prune_link(6, 5) == 1);  // either direction
}

TEST_CASE("purge removes every path through a node") {
  RouteCache c(0, 8);
  c.add({0, 9, 3}, 0.0);
  c.add({0, 1, 3}, 0.0);
  c.add({0, 1, 9}, 0.0);
  CHECK(c.purge_node(9) == 2);
  CHECK(c.entries()[0].path == Path{0, 1, 3});
  CHECK_FALSE(c.contains_node(9));
}

TEST_CASE("oldest entry is evicted when full") {
  RouteCache c(0, 2);
  c.add({0, 1}, 0.0);
  c.add({0, 2}, 1.0);
  c.add({0, 3}, 2.0);
  CHECK(c.size() == 2);
  CHECK_FALSE(c.best_route(1));
}

TEST_CASE("witnesses are neighbors of the suspect on cached paths") {
  RouteCache c(0, 8);
  c.add({0, 5, 6, 7}, 0.0);
  c.add({0, 8, 5}, 0.0);
  const auto w = c.witnesses_for(5);
  CHECK(w == std::vector<NodeId>{6, 8});
}

TEST_CASE("loop detection") {
  CHECK(loop_free({1, 2, 3}));
  CHECK_FALSE(loop_free({1, 2, 1}));
}

namespace {

bool has(const std::vector<TraceLine>& lines, const std::string& node, const std::string& kind,
         const std::string& detail_part) {
  for (const auto& t : lines)
    if (t.node == node && t.kind == kind && t.detail.find(detail_part) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("destination replies along the reversed route record") {
  Micro m = static_scenario({{0, 0}, {200, 0}, {400, 0}, {600, 0}}, 5.0);
  m.cfg.protocol = Protocol::Dsr;
  std::ostringstream trace;
  Simulation sim(m.cfg, 1, m.overrides, &trace);
  sim.originate_data(0, 3);
  sim.run_until(1.0);
  const auto lines = parse_trace(trace.str());
  CHECK(has(lines, "3", "rrep", "0-1-2-3"));
  CHECK(has(lines, "3", "data-recv", "0:0"));
  bool cached = false;
  for (const auto& e : sim.route_cache(0).entries()) cached |= e.path == Path{0, 1, 2, 3};
  CHECK(cached);
  // relays learn both directions, the destination the reverse
  bool reverse = false;
  for (const auto& e : sim.route_cache(3).entries()) reverse |= e.path == Path{3, 2, 1, 0};
  CHECK(reverse);
  const auto r = sim.report();
  CHECK(r.control_generated == 2);  // one request, one reply; forwards do not count
}

TEST_CASE("requests carry the origin's malicious list and listed nodes drop them") {
  // after the chain dropper is convicted, node 0 asks again with B listed
  Micro m = chain_with_dropper(15.0);
  std::ostringstream trace;
  Simulation sim(m.cfg, 1, m.overrides, &trace);
  sim.run_until(15.0);
  const auto lines = parse_trace(trace.str());
  bool empty_before = false, listed_after = false;
  for (const auto& t : lines) {
    if (t.node != "0" || t.kind != "rreq") continue;
    if (t.time < 8.0) empty_before |= t.detail.ends_with("avoid=");
    if (t.time > 8.0) listed_after |= t.detail.ends_with("avoid=1");
  }
  CHECK(empty_before);
  CHECK(listed_after);
  CHECK(has(lines, "1", "rreq-drop", "listed in avoid list"));
  // no reply can come back through B
  for (const auto& t : lines)
    if (t.kind == "rrep") CHECK(t.time < 8.0);
}

TEST_CASE("relays merge their own malicious list into the avoid list") {
  // 4 --- 0 --- 1 --- 2 --- 3 ; 2 drops the flow 1 -> 3, so 1 convicts 2
  Micro m = static_scenario({{0, 0}, {200, 0}, {400, 0}, {600, 0}, {-200, 0}}, 20.0);
  make_dropper(m, 2, 1.0);
  add_flow(m, 1, 3, 0.0);
  std::ostringstream trace;
  Simulation sim(m.cfg, 1, m.overrides, &trace);
  sim.run_until(10.0);
  REQUIRE(sim.reputation(1).is_malicious(2));
  const std::size_t mark = trace.str().size();
  sim.originate_data(4, 3);
  sim.run_until(12.0);
  const auto lines = parse_trace(trace.str().substr(mark));
  CHECK(has(lines, "4", "rreq", "avoid="));
  // node 2 only hears the copy node 1 rebroadcast, which now lists it
  CHECK(has(lines, "2", "rreq-drop", "listed in avoid list"));
  CHECK_FALSE(has(lines, "3", "rrep", "4-"));
}

TEST_CASE("data originated by a convicted node is discarded") {
  // 3 --- 0 --- 1 --- 2 ; 0 drops the flow 1 -> 3, so 1 convicts 0
  Micro m = static_scenario({{0, 0}, {200, 0}, {400, 0}, {-200, 0}}, 20.0);
  make_dropper(m, 0, 1.0);
  add_flow(m, 1, 3, 0.0);
  std::ostringstream trace;
  Simulation sim(m.cfg, 1, m.overrides, &trace);
  sim.run_until(10.0);
  REQUIRE(sim.reputation(1).is_malicious(0));
  sim.seed_route(0, {0, 1, 2});
  const auto before = sim.report();
  sim.originate_data(0, 2);
  sim.run_until(11.0);
  const auto after = sim.report();
  CHECK(after.data_received == before.data_received);
  CHECK(after.drops_noroute == before.drops_noroute + 1);
  CHECK(has(parse_trace(trace.str()), "1", "data-drop(noroute)", "sender convicted"));
}

TEST_CASE("broken link sends an error back and the origin rediscovers") {
  Micro m = static_scenario({{0, 0}, {200, 0}, {900, 900}, {400, 0}}, 5.0);
  m.cfg.protocol = Protocol::Dsr;
  std::ostringstream trace;
  Simulation sim(m.cfg, 1, m.overrides, &trace);
  sim.seed_route(0, {0, 1, 2, 3});  // 1-2 does not exist
  sim.originate_data(0, 3);
  sim.originate_data(0, 3);
  sim.run_until(1.0);
  // both packets died at node 1; the next one finds no cached route
  sim.originate_data(0, 3);
  sim.run_until(2.0);
  const auto lines = parse_trace(trace.str());
  double rerr_at = -1, rreq_at = -1;
  for (const auto& t : lines) {
    if (t.node == "1" && t.kind == "rerr" && t.detail == "1-2 to 0") rerr_at = t.time;
    if (t.node == "0" && t.kind == "rreq" && rreq_at < 0) rreq_at = t.time;
  }
  REQUIRE(rerr_at > 0);
  CHECK(rreq_at > rerr_at);
  for (const auto& e : sim.route_cache(0).entries()) CHECK_FALSE(e.path == Path{0, 1, 2, 3});
  const auto r = sim.report();
  CHECK(r.drops_linkloss == 2);
  CHECK(r.conserved());
}

TEST_CASE("defenseless mode has no reputation machinery") {
  ScenarioConfig cfg;
  cfg.nodes = 20;
  cfg.malicious_fraction = 0.3;
  cfg.duration = 120.0;
  cfg.protocol = Protocol::Dsr;
  std::ostringstream trace;
  Simulation sim(cfg, 3, {}, &trace);
  sim.run();
  CHECK(sim.ids_stats().total() == 0);
  for (const auto& t : parse_trace(trace.str())) {
    CHECK(t.kind != "window-close");
    CHECK(t.kind != "warning-tx");
    CHECK(t.kind != "knock");
    CHECK(t.kind != "category-change");
    if (t.kind == "rreq") CHECK(t.detail.ends_with("avoid="));
  }
}
