#include "mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace rism {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<Vec2> uniform_placement(std::size_t n, FieldSpec field, RngStream& rng) {
  std::vector<Vec2> out(n);
  for (auto& p : out) {
    p.x = rng.uniform(0.0, field.width);
    p.y = rng.uniform(0.0, field.height);
  }
  return out;
}

Mobility::Mobility(std::vector<Vec2> initial, FieldSpec field, double max_speed, double pause_time,
                   double duration, double radio_range, RngStream& rng)
    : range_(radio_range) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  legs_.resize(initial.size());
  // Nodes are advanced in lockstep (leg by leg, lowest departure first) so
  // the draw order does not depend on how many legs each node ends up with.
  for (NodeId id = 0; id < initial.size(); ++id) {
    MobilityState first;
    first.node = id;
    first.origin = initial[id];
    first.destination = initial[id];
    first.pause_start = 0.0;
    first.depart_time = pause_time;
    first.arrive_time = kInf;
    legs_[id].push_back(first);
  }
  for (;;) {
    NodeId next = kNoNode;
    double earliest = kInf;
    for (NodeId id = 0; id < legs_.size(); ++id) {
      const auto& leg = legs_[id].back();
      if (leg.arrive_time == kInf && leg.speed == 0.0 && leg.depart_time < duration &&
          leg.depart_time < earliest) {
        // a leg whose movement has not been drawn yet
        earliest = leg.depart_time;
        next = id;
      }
    }
    if (next == kNoNode) break;
    auto& leg = legs_[next].back();
    leg.destination = {rng.uniform(0.0, field.width), rng.uniform(0.0, field.height)};
    leg.speed = rng.uniform(0.0, max_speed);
    if (leg.speed <= 0.0) {
      // zero speed: the node never leaves this waypoint
      leg.destination = leg.origin;
      leg.speed = 0.0;
      leg.arrive_time = kInf;
      leg.depart_time = kInf;
      continue;
    }
    leg.arrive_time = leg.depart_time + distance(leg.origin, leg.destination) / leg.speed;
    if (leg.arrive_time >= duration) continue;
    MobilityState follow;
    follow.node = next;
    follow.origin = leg.destination;
    follow.destination = leg.destination;
    follow.pause_start = leg.arrive_time;
    follow.depart_time = leg.arrive_time + pause_time;
    follow.arrive_time = kInf;
    legs_[next].push_back(follow);
  }
}

Mobility Mobility::fixed(std::vector<Vec2> positions, double radio_range) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Mobility m;
  m.range_ = radio_range;
  m.legs_.resize(positions.size());
  for (NodeId id = 0; id < positions.size(); ++id) {
    MobilityState s;
    s.node = id;
    s.origin = s.destination = positions[id];
    s.depart_time = kInf;
    s.arrive_time = kInf;
    m.legs_[id].push_back(s);
  }
  return m;
}

const std::vector<MobilityState>& Mobility::legs(NodeId node) const {
  if (node >= legs_.size()) throw UnknownNode("unknown node " + std::to_string(node));
  return legs_[node];
}

Vec2 Mobility::position_at(NodeId node, double t) const {
  const auto& legs = this->legs(node);
  auto it = std::upper_bound(legs.begin(), legs.end(), t,
                             [](double time, const MobilityState& s) { return time < s.pause_start; });
  const MobilityState& leg = it == legs.begin() ? legs.front() : *std::prev(it);
  if (t <= leg.depart_time || leg.speed == 0.0) return leg.origin;
  if (t >= leg.arrive_time) return leg.destination;
  const double f = (t - leg.depart_time) / (leg.arrive_time - leg.depart_time);
  return {leg.origin.x + f * (leg.destination.x - leg.origin.x),
          leg.origin.y + f * (leg.destination.y - leg.origin.y)};
}

bool Mobility::in_range(NodeId a, NodeId b, double t) const {
  if (a == b) return false;
  return distance(position_at(a, t), position_at(b, t)) <= range_;
}

std::vector<NodeId> Mobility::neighbors(NodeId node, double t) const {
  const Vec2 self = position_at(node, t);
  std::vector<NodeId> out;
  for (NodeId other = 0; other < legs_.size(); ++other) {
    if (other == node) continue;
    if (distance(self, position_at(other, t)) <= range_) out.push_back(other);
  }
  return out;
}

void Mobility::dump(std::ostream& out) const {
  char line[160];
  for (const auto& legs : legs_) {
    for (const auto& leg : legs) {
      if (leg.speed == 0.0) continue;
      std::snprintf(line, sizeof line, "%.6f %u %.6f %.6f %.6f\n", leg.depart_time, leg.node, leg.destination.x,
                    leg.destination.y, leg.speed);
      out << line;
    }
  }
}

}  // namespace rism
