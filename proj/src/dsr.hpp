#pragma once

#include <optional>
#include <vector>

#include "ids.hpp"
#include "packet.hpp"

namespace rism {

struct RouteCacheEntry {
  Path path;  // starts at the cache owner
  double priority = 0.0;
  double learned_at = 0.0;
};

/// Returns true when `path` has no repeated node.
bool loop_free(const Path& path);

/// Path cache of one node. Every stored path starts at the owner; any prefix
/// of a stored path is a usable route. When a reputation table is supplied,
/// paths through convicted nodes are rejected and routes are ranked by
/// (clean first, path_priority, most recently learned).
class RouteCache {
 public:
  RouteCache(NodeId owner = kNoNode, std::size_t capacity = 64) : owner_(owner), capacity_(capacity) {}

  NodeId owner() const { return owner_; }

  /// Stores `path` (must start at the owner). Returns false if rejected.
  bool add(const Path& path, double now, const ReputationTable* table = nullptr);

  std::optional<Path> best_route(NodeId dst, const ReputationTable* table = nullptr);

  /// Shortest known route regardless of reputation.
  std::optional<Path> shortest_route(NodeId dst) const;

  /// Removes every path using the link a-b in either direction.
  std::size_t prune_link(NodeId a, NodeId b);
  /// Removes every path containing `node` past the owner.
  std::size_t purge_node(NodeId node);

  /// Nodes seen adjacent to `suspect` in cached paths, owner excluded.
  std::vector<NodeId> witnesses_for(NodeId suspect) const;

  bool contains_node(NodeId node) const;
  const std::vector<RouteCacheEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  NodeId owner_;
  std::size_t capacity_;
  std::vector<RouteCacheEntry> entries_;
};

}  // namespace rism
