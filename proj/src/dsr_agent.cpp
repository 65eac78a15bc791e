// DSR message handling of Simulation: discovery, replies, source-routed
// forwarding and route errors, with the avoid-list extension when the IDS is
// enabled.

#include <algorithm>

#include "simulation.hpp"

namespace rism {

namespace {

std::string path_str(const Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(p[i]);
  }
  return s;
}

bool intersects(const Path& path, const std::vector<NodeId>& set, NodeId except) {
  for (NodeId n : path)
    if (n != except && std::find(set.begin(), set.end(), n) != set.end()) return true;
  return false;
}

}  // namespace

const ReputationTable* Simulation::table_of(NodeId node) const {
  return ids_enabled() ? &nodes_[node].reputation : nullptr;
}

void Simulation::send_frame(NodeId node, NodeId link_dest, Packet pkt) {
  Frame f;
  f.transmitter = node;
  f.link_dest = link_dest;
  f.packet = std::move(pkt);
  if (link_->enqueue(node, std::move(f)) == EnqueueResult::DroppedOverflow && tracing())
    trace(node, "control-drop", "queue overflow");
}

void Simulation::seed_route(NodeId node, const Path& path) {
  nodes_.at(node).cache.add(path, now(), table_of(node));
}

void Simulation::learn_route(NodeId node, const Path& path) {
  if (path.size() < 2) return;
  nodes_[node].cache.add(path, now(), table_of(node));
}

void Simulation::send_from_origin(NodeId node, Packet pkt) {
  auto& st = nodes_[node];
  auto route = st.cache.best_route(pkt.final_dest, table_of(node));
  if (!route) {
    const NodeId dst = pkt.final_dest;
    buffer_packet(node, std::move(pkt));
    start_discovery(node, dst);
    return;
  }
  pkt.source_route = std::move(*route);
  pkt.hop = 0;
  transmit_data(node, std::move(pkt));
}

void Simulation::buffer_packet(NodeId node, Packet pkt) {
  auto& q = nodes_[node].send_buffer[pkt.final_dest];
  if (q.size() >= cfg_.dsr.send_buffer) {
    drop_data(node, q.front(), DropCause::NoRoute, "send buffer full");
    q.pop_front();
  }
  q.push_back(std::move(pkt));
}

void Simulation::transmit_data(NodeId node, Packet pkt) {
  auto& st = nodes_[node];
  const std::size_t index = pkt.hop;
  const NodeId next = pkt.source_route[index + 1];
  if (ids_enabled() && st.reputation.is_malicious(next)) {
    drop_data(node, pkt, DropCause::NoRoute, "next hop convicted");
    st.cache.purge_node(next);
    if (index > 0) send_rerr(node, next, pkt.source_route, index);
    return;
  }
  const Fingerprint fp{pkt.origin, pkt.seq, next};
  const bool knock = pkt.knock;
  const bool watch = ids_enabled() && next != pkt.final_dest;
  const Packet copy_for_drop = pkt;
  pkt.hop = static_cast<std::uint32_t>(index + 1);
  Frame f;
  f.transmitter = node;
  f.link_dest = next;
  f.packet = std::move(pkt);
  if (link_->enqueue(node, std::move(f)) == EnqueueResult::DroppedOverflow) {
    drop_data(node, copy_for_drop, DropCause::QueueOverflow, "queue");
    return;
  }
  if (index > 0 && tracing())
    trace(node, "data-fwd", std::to_string(fp.origin) + ":" + std::to_string(fp.seq) + " ->" + std::to_string(next));
  if (watch) st.monitor.register_sent(fp, now(), knock);
}

void Simulation::handle_data(NodeId node, const Frame& frame) {
  Packet pkt = frame.packet;
  if (pkt.hop >= pkt.source_route.size() || pkt.source_route[pkt.hop] != node) return;
  if (node == pkt.final_dest) {
    metrics_.record(MetricEvent::DataReceived, pkt);
    if (tracing())
      trace(node, "data-recv", std::to_string(pkt.origin) + ":" + std::to_string(pkt.seq) + (pkt.knock ? " knock" : ""));
    return;
  }
  if (ids_enabled()) {
    const auto& table = nodes_[node].reputation;
    if (table.is_malicious(frame.transmitter) || table.is_malicious(pkt.origin)) {
      drop_data(node, pkt, DropCause::NoRoute, "sender convicted");
      return;
    }
  }
  if (behavior_decide(behaviors_[node], pkt, adversary_rng_) == Decision::Drop) {
    drop_data(node, pkt, DropCause::Behavior, "misbehavior");
    return;
  }
  transmit_data(node, std::move(pkt));
}

void Simulation::start_discovery(NodeId src, NodeId dst) {
  auto& st = nodes_.at(src);
  if (st.discovery.count(dst)) {
    if (tracing()) trace(src, "rreq-suppressed", std::to_string(dst));
    return;
  }
  Discovery d;
  d.backoff = cfg_.dsr.rreq_backoff_initial;
  originate_rreq(src, dst);
  d.retry = scheduler_.schedule_in(d.backoff, EventKind::RreqRetry, src, [this, src, dst] { rreq_retry(src, dst); });
  st.discovery[dst] = d;
}

void Simulation::rreq_retry(NodeId src, NodeId dst) {
  auto& st = nodes_[src];
  auto it = st.discovery.find(dst);
  if (it == st.discovery.end()) return;
  auto buf = st.send_buffer.find(dst);
  if (buf == st.send_buffer.end() || buf->second.empty()) {
    st.discovery.erase(it);
    return;
  }
  if (st.cache.best_route(dst, table_of(src))) {
    st.discovery.erase(it);
    route_learned(src, dst);
    return;
  }
  it->second.backoff = std::min(it->second.backoff * 2.0, cfg_.dsr.rreq_backoff_max);
  originate_rreq(src, dst);
  it->second.retry =
      scheduler_.schedule_in(it->second.backoff, EventKind::RreqRetry, src, [this, src, dst] { rreq_retry(src, dst); });
}

void Simulation::originate_rreq(NodeId src, NodeId dst) {
  auto& st = nodes_[src];
  Packet p;
  p.kind = PacketKind::Rreq;
  p.origin = src;
  p.final_dest = dst;
  p.seq = st.next_rreq_id++;
  p.route_record = {src};
  if (ids_enabled()) p.avoid_list = st.reputation.malicious_list();
  st.seen_rreq.insert({src, p.seq});
  metrics_.record(MetricEvent::ControlOriginated, p);
  if (tracing()) trace(src, "rreq", std::to_string(src) + ":" + std::to_string(p.seq) + " ->" + std::to_string(dst) +
                                        " avoid=" + path_str(p.avoid_list));
  send_frame(src, kBroadcast, std::move(p));
}

void Simulation::route_learned(NodeId node, NodeId dst) {
  auto& st = nodes_[node];
  if (auto d = st.discovery.find(dst); d != st.discovery.end()) {
    if (d->second.retry) scheduler_.cancel(*d->second.retry);
    st.discovery.erase(d);
  }
  auto buf = st.send_buffer.find(dst);
  if (buf == st.send_buffer.end()) return;
  std::deque<Packet> pending = std::move(buf->second);
  st.send_buffer.erase(buf);
  for (auto& p : pending) send_from_origin(node, std::move(p));
}

void Simulation::handle_rreq(NodeId node, const Frame& frame) {
  auto& st = nodes_[node];
  const Packet& rreq = frame.packet;
  const bool ids = ids_enabled();

  if (rreq.origin == node) return;
  if (ids) {
    if (st.reputation.is_malicious(frame.transmitter) || st.reputation.is_malicious(rreq.origin)) {
      if (tracing()) trace(node, "rreq-drop", "from convicted " + std::to_string(frame.transmitter));
      return;
    }
  }
  const bool duplicate = st.seen_rreq.count({rreq.origin, rreq.seq}) != 0;
  if (ids && !duplicate) {
    for (NodeId accused : rreq.avoid_list) {
      if (accused == node) continue;
      ++ids_stats_.avoid_sightings;
      apply_evidence(node, accused, Evidence::AvoidList);
    }
  }
  if (contains(rreq.route_record, node)) return;

  if (node == rreq.final_dest) {
    Path route = rreq.route_record;
    route.push_back(node);
    st.seen_rreq.insert({rreq.origin, rreq.seq});
    if (ids && (intersects(route, rreq.avoid_list, node) || intersects(route, st.reputation.malicious_list(), node))) {
      if (tracing()) trace(node, "rrep-suppressed", path_str(route));
      return;
    }
    Path back(route.rbegin(), route.rend());
    learn_route(node, back);
    send_rrep(node, route, route.size() - 1, rreq);
    return;
  }

  st.seen_rreq.insert({rreq.origin, rreq.seq});
  if (st.forwarded_rreq.count({rreq.origin, rreq.seq})) return;

  if (ids) {
    if (contains(rreq.avoid_list, node)) {
      if (tracing()) trace(node, "rreq-drop", "listed in avoid list");
      return;
    }
    // a copy that already went through a refused node can only end in a
    // suppressed reply; dropping it keeps the slot free for a clean copy
    if (intersects(rreq.route_record, rreq.avoid_list, kNoNode) ||
        intersects(rreq.route_record, st.reputation.malicious_list(), kNoNode)) {
      if (tracing()) trace(node, "rreq-drop", "record crosses avoid list");
      return;
    }
  }
  st.forwarded_rreq.insert({rreq.origin, rreq.seq});

  const bool misbehaves = behaviors_[node].malicious();
  if (misbehaves) {
    // Misbehaving relays answer from their cache whenever they can, to stay
    // on as many routes as possible.
    if (auto cached = st.cache.shortest_route(rreq.final_dest)) {
      Path route = rreq.route_record;
      route.push_back(node);
      route.insert(route.end(), cached->begin() + 1, cached->end());
      if (loop_free(route) && route.size() <= cfg_.dsr.max_route_length) {
        send_rrep(node, route, rreq.route_record.size(), rreq);
        return;
      }
    }
  }

  if (rreq.route_record.size() + 1 >= cfg_.dsr.max_route_length) return;
  Packet fwd = rreq;
  fwd.route_record.push_back(node);
  if (ids) merge_unique(fwd.avoid_list, st.reputation.malicious_list());
  metrics_.record(MetricEvent::ControlForwarded, fwd);
  send_frame(node, kBroadcast, std::move(fwd));
}

void Simulation::send_rrep(NodeId node, Path route, std::size_t index, const Packet& rreq) {
  Packet p;
  p.kind = PacketKind::Rrep;
  p.origin = node;
  p.final_dest = route.front();
  p.seq = rreq.seq;
  p.avoid_list = rreq.avoid_list;
  p.hop = static_cast<std::uint32_t>(index);
  p.source_route = std::move(route);
  metrics_.record(MetricEvent::ControlOriginated, p);
  if (tracing()) trace(node, "rrep", path_str(p.source_route));
  const NodeId next = p.source_route[index - 1];
  p.hop = static_cast<std::uint32_t>(index - 1);
  send_frame(node, next, std::move(p));
}

void Simulation::handle_rrep(NodeId node, const Frame& frame) {
  auto& st = nodes_[node];
  const Packet& rrep = frame.packet;
  const Path& route = rrep.source_route;
  const std::size_t index = rrep.hop;
  if (index >= route.size() || route[index] != node) return;

  if (ids_enabled()) {
    if (st.reputation.is_malicious(frame.transmitter)) {
      if (tracing()) trace(node, "rrep-drop", "from convicted " + std::to_string(frame.transmitter));
      return;
    }
    if (intersects(route, rrep.avoid_list, node) || intersects(route, st.reputation.malicious_list(), node)) {
      if (tracing()) trace(node, "rrep-suppressed", path_str(route));
      return;
    }
  }

  learn_route(node, Path(route.begin() + static_cast<std::ptrdiff_t>(index), route.end()));
  if (index == 0) {
    route_learned(node, route.back());
    return;
  }
  learn_route(node, Path(route.rend() - static_cast<std::ptrdiff_t>(index) - 1, route.rend()));
  Packet fwd = rrep;
  fwd.hop = static_cast<std::uint32_t>(index - 1);
  metrics_.record(MetricEvent::ControlForwarded, fwd);
  send_frame(node, route[index - 1], std::move(fwd));
}

void Simulation::send_rerr(NodeId detector, NodeId broken_to, const Path& data_route, std::size_t detector_index) {
  Packet p;
  p.kind = PacketKind::Rerr;
  p.origin = detector;
  p.final_dest = data_route.front();
  p.broken_link = {detector, broken_to};
  p.source_route.assign(data_route.rend() - static_cast<std::ptrdiff_t>(detector_index) - 1, data_route.rend());
  p.hop = 1;
  metrics_.record(MetricEvent::ControlOriginated, p);
  if (tracing())
    trace(detector, "rerr", std::to_string(detector) + "-" + std::to_string(broken_to) + " to " +
                                std::to_string(p.final_dest));
  const NodeId next = p.source_route[1];
  send_frame(detector, next, std::move(p));
}

void Simulation::handle_rerr(NodeId node, const Frame& frame, Reception kind) {
  auto& st = nodes_[node];
  const Packet& rerr = frame.packet;
  st.cache.prune_link(rerr.broken_link.first, rerr.broken_link.second);
  if (ids_enabled() && frame.transmitter == rerr.origin) {
    // the generator's drops this window are accounted for by its error
    st.monitor.clear_neighbor(rerr.origin);
  }
  if (kind != Reception::Addressed) return;
  const std::size_t index = rerr.hop;
  if (index >= rerr.source_route.size() || rerr.source_route[index] != node) return;
  if (index + 1 == rerr.source_route.size()) {
    // data origin: rediscover for anything still waiting
    for (auto& [dst, q] : st.send_buffer)
      if (!q.empty() && !st.cache.best_route(dst, table_of(node))) start_discovery(node, dst);
    return;
  }
  Packet fwd = rerr;
  fwd.hop = static_cast<std::uint32_t>(index + 1);
  metrics_.record(MetricEvent::ControlForwarded, fwd);
  send_frame(node, rerr.source_route[index + 1], std::move(fwd));
}

}  // namespace rism
