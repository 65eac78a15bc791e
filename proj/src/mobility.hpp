#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "sim_core.hpp"

namespace rism {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Vec2 a, Vec2 b);

struct FieldSpec {
  double width = 1000.0;
  double height = 1000.0;
};

class UnknownNode : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// One movement leg of a node: pause at `origin` until `depart_time`, then
/// move in a straight line at `speed` to `destination`, arriving at
/// `arrive_time`.
struct MobilityState {
  NodeId node = 0;
  Vec2 origin;
  Vec2 destination;
  double speed = 0.0;
  double pause_start = 0.0;
  double depart_time = 0.0;
  double arrive_time = 0.0;
};

/// Random waypoint mobility. Trajectories are drawn up front from the
/// mobility stream, so position queries are closed-form and side-effect free.
class Mobility {
 public:
  Mobility(std::vector<Vec2> initial, FieldSpec field, double max_speed, double pause_time, double duration,
           double radio_range, RngStream& rng);

  /// Static nodes (no movement for the whole run).
  static Mobility fixed(std::vector<Vec2> positions, double radio_range);

  std::size_t size() const { return legs_.size(); }
  double radio_range() const { return range_; }

  Vec2 position_at(NodeId node, double t) const;
  std::vector<NodeId> neighbors(NodeId node, double t) const;
  bool in_range(NodeId a, NodeId b, double t) const;

  const std::vector<MobilityState>& legs(NodeId node) const;

  /// Writes `time node x y speed` lines, one per waypoint departure.
  void dump(std::ostream& out) const;

 private:
  Mobility() = default;

  std::vector<std::vector<MobilityState>> legs_;
  double range_ = 250.0;
};

/// Uniform placement over the field.
std::vector<Vec2> uniform_placement(std::size_t n, FieldSpec field, RngStream& rng);

}  // namespace rism
