#pragma once

// Hand-built micro-scenarios shared by the unit tests and the acceptance run.

#include <sstream>
#include <string>
#include <vector>

#include "simulation.hpp"

namespace rism::fixtures {

struct TraceLine {
  double time = 0.0;
  std::string node;
  std::string kind;
  std::string detail;
};

inline std::vector<TraceLine> parse_trace(const std::string& text) {
  std::vector<TraceLine> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    TraceLine t;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    const auto c = line.find(',', b + 1);
    t.time = std::stod(line.substr(0, a));
    t.node = line.substr(a + 1, b - a - 1);
    t.kind = line.substr(b + 1, c - b - 1);
    t.detail = line.substr(c + 1);
    out.push_back(std::move(t));
  }
  return out;
}

inline bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

struct Micro {
  ScenarioConfig cfg;
  ScenarioOverrides overrides;
};

inline Micro static_scenario(std::vector<Vec2> positions, double duration) {
  Micro m;
  m.cfg.nodes = positions.size();
  m.cfg.connections = 0;
  m.cfg.duration = duration;
  m.cfg.protocol = Protocol::Rism;
  m.overrides.positions = std::move(positions);
  m.overrides.connections = std::vector<CbrConnection>{};
  std::vector<BehaviorProfile> b(m.cfg.nodes);
  for (NodeId i = 0; i < b.size(); ++i) b[i].node = i;
  m.overrides.behaviors = b;
  return m;
}

inline void make_dropper(Micro& m, NodeId node, double p) {
  auto& b = (*m.overrides.behaviors)[node];
  b.kind = BehaviorKind::Malicious;
  b.data_drop_probability = p;
}

inline void add_flow(Micro& m, NodeId src, NodeId dst, double start) {
  CbrConnection c;
  c.src = src;
  c.dst = dst;
  c.rate = m.cfg.cbr_rate;
  c.payload = m.cfg.packet_size;
  c.start_time = start;
  m.overrides.connections->push_back(c);
  m.cfg.connections = m.overrides.connections->size();
}

// A(0) - B(1) - C(2), 200 m apart: A and C only meet through B.
// B drops every data packet; one CBR flow A -> C from t = 0.
inline Micro chain_with_dropper(double duration) {
  Micro m = static_scenario({{0, 0}, {200, 0}, {400, 0}}, duration);
  make_dropper(m, 1, 1.0);
  add_flow(m, 0, 2, 0.0);
  return m;
}

// A(0), B(1), C(2) all within range of each other; no traffic.
inline Micro triangle(bool b_drops, double duration) {
  Micro m = static_scenario({{0, 0}, {200, 0}, {100, 150}}, duration);
  if (b_drops) make_dropper(m, 1, 1.0);
  return m;
}

}  // namespace rism::fixtures
