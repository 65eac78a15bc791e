#include "dsr.hpp"

#include <algorithm>
#include <set>

namespace rism {

bool loop_free(const Path& path) {
  std::set<NodeId> seen;
  for (NodeId n : path)
    if (!seen.insert(n).second) return false;
  return true;
}

bool RouteCache::add(const Path& path, double now, const ReputationTable* table) {
  if (path.size() < 2 || path.front() != owner_ || !loop_free(path)) return false;
  if (table) {
    for (std::size_t i = 1; i < path.size(); ++i)
      if (table->is_malicious(path[i])) return false;
  }
  const double priority = table ? path_priority(path, *table) : 1.0 / static_cast<double>(path.size() - 1);
  for (auto& e : entries_) {
    if (e.path == path) {
      e.learned_at = now;
      e.priority = priority;
      return true;
    }
  }
  if (entries_.size() >= capacity_) {
    auto oldest = std::min_element(entries_.begin(), entries_.end(),
                                   [](const auto& a, const auto& b) { return a.learned_at < b.learned_at; });
    entries_.erase(oldest);
  }
  entries_.push_back({path, priority, now});
  return true;
}

std::optional<Path> RouteCache::best_route(NodeId dst, const ReputationTable* table) {
  std::optional<Path> best;
  bool best_clean = false;
  double best_priority = -1.0;
  double best_time = -1.0;
  for (auto& e : entries_) {
    auto it = std::find(e.path.begin() + 1, e.path.end(), dst);
    if (it == e.path.end()) continue;
    Path route(e.path.begin(), it + 1);
    double priority;
    bool clean = true;
    if (table) {
      priority = path_priority(route, *table);
      if (priority <= 0.0) continue;
      clean = path_is_clean(route, *table);
      if (route.size() == e.path.size()) e.priority = priority;
    } else {
      priority = 1.0 / static_cast<double>(route.size() - 1);
    }
    const bool better = !best || (clean && !best_clean) ||
                        (clean == best_clean && (priority > best_priority ||
                                                 (priority == best_priority && e.learned_at > best_time)));
    if (better) {
      best = std::move(route);
      best_clean = clean;
      best_priority = priority;
      best_time = e.learned_at;
    }
  }
  return best;
}

std::optional<Path> RouteCache::shortest_route(NodeId dst) const {
  std::optional<Path> best;
  for (const auto& e : entries_) {
    auto it = std::find(e.path.begin() + 1, e.path.end(), dst);
    if (it == e.path.end()) continue;
    const auto len = static_cast<std::size_t>(it - e.path.begin()) + 1;
    if (!best || len < best->size()) best = Path(e.path.begin(), it + 1);
  }
  return best;
}

std::size_t RouteCache::prune_link(NodeId a, NodeId b) {
  const auto before = entries_.size();
  std::erase_if(entries_, [&](const RouteCacheEntry& e) {
    for (std::size_t i = 0; i + 1 < e.path.size(); ++i) {
      if ((e.path[i] == a && e.path[i + 1] == b) || (e.path[i] == b && e.path[i + 1] == a)) return true;
    }
    return false;
  });
  return before - entries_.size();
}

std::size_t RouteCache::purge_node(NodeId node) {
  const auto before = entries_.size();
  std::erase_if(entries_, [&](const RouteCacheEntry& e) {
    return std::find(e.path.begin() + 1, e.path.end(), node) != e.path.end();
  });
  return before - entries_.size();
}

std::vector<NodeId> RouteCache::witnesses_for(NodeId suspect) const {
  std::vector<NodeId> out;
  auto push = [&](NodeId n) {
    if (n != owner_ && n != suspect && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (const auto& e : entries_) {
    for (std::size_t i = 1; i < e.path.size(); ++i) {
      if (e.path[i] != suspect) continue;
      if (i + 1 < e.path.size()) push(e.path[i + 1]);
      push(e.path[i - 1]);
    }
  }
  return out;
}

bool RouteCache::contains_node(NodeId node) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const RouteCacheEntry& e) {
    return std::find(e.path.begin() + 1, e.path.end(), node) != e.path.end();
  });
}

}  // namespace rism
