#include "simulation.hpp"

#include <cstdio>

namespace rism {

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, ScenarioOverrides overrides,
                       std::ostream* trace_out)
    : cfg_(cfg),
      seed_(seed),
      trace_(trace_out),
      scheduler_(&trace_),
      scenario_rng_(seed, "scenario"),
      mobility_rng_(seed, "mobility"),
      traffic_rng_(seed, "traffic"),
      adversary_rng_(seed, "adversary"),
      metrics_(cfg.count_forwards) {
  cfg_.validate();
  const std::size_t n = cfg_.nodes;

  // Scenario draws happen in a fixed order so that they never depend on the
  // protocol: placement, malicious identities, then waypoints and traffic on
  // their own streams.
  std::vector<Vec2> placement = uniform_placement(n, cfg_.field, scenario_rng_);
  behaviors_ = assign_behaviors(n, cfg_.malicious_count(), cfg_.drop_probability, scenario_rng_);
  if (overrides.positions) {
    if (overrides.positions->size() != n) throw std::invalid_argument("position override size != nodes");
    mobility_ = std::make_unique<Mobility>(Mobility::fixed(*overrides.positions, cfg_.radio_range));
  } else {
    mobility_ = std::make_unique<Mobility>(placement, cfg_.field, cfg_.max_speed, cfg_.pause_time, cfg_.duration,
                                           cfg_.radio_range, mobility_rng_);
  }
  connections_ = generate_connections(n, cfg_.effective_connections(), cfg_.cbr_rate, cfg_.packet_size,
                                      cfg_.cbr_start_spread, traffic_rng_);
  if (overrides.connections) connections_ = *overrides.connections;
  if (overrides.behaviors) {
    if (overrides.behaviors->size() != n) throw std::invalid_argument("behavior override size != nodes");
    behaviors_ = *overrides.behaviors;
  }

  link_ = std::make_unique<LinkLayer>(scheduler_, *mobility_, cfg_.link(), &trace_);
  link_->set_listener(this);

  nodes_.reserve(n);
  for (NodeId id = 0; id < n; ++id) {
    NodeState s{RouteCache(id, cfg_.dsr.route_cache_size), {}, {}, {}, {}, 0, 0, ReputationTable(cfg_.ids), {}, {}, {}};
    nodes_.push_back(std::move(s));
  }

  if (tracing()) {
    for (NodeId id = 0; id < n; ++id) {
      if (!behaviors_[id].malicious()) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "malicious p=%g", behaviors_[id].data_drop_probability);
      trace(id, "behavior", buf);
    }
    for (const auto& c : connections_) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%u %u %.6f %g", c.src, c.dst, c.start_time, c.rate);
      trace(c.src, "connection", buf);
    }
  }

  for (std::size_t i = 0; i < connections_.size(); ++i) schedule_cbr(i, 0);
  if (ids_enabled()) {
    for (NodeId id = 0; id < n; ++id) {
      if (cfg_.ids.timing_window <= cfg_.duration)
        scheduler_.schedule(cfg_.ids.timing_window, EventKind::WindowClose, id, [this, id] { close_window(id); });
    }
  }
  scheduler_.schedule(cfg_.duration, EventKind::SimEnd, kNoNode, [] {});
}

Simulation::~Simulation() = default;

MetricsReport Simulation::run() {
  run_until(cfg_.duration);
  return report();
}

RunSummary Simulation::run_until(double t) { return scheduler_.run_until(t); }

MetricsReport Simulation::report() const { return metrics_.finalize(data_in_flight()); }

std::uint64_t Simulation::data_in_flight() const {
  auto counted = [](const Packet& p) { return p.kind == PacketKind::Data && !p.knock; };
  std::uint64_t n = 0;
  for (const auto& s : nodes_)
    for (const auto& [dst, q] : s.send_buffer)
      for (const auto& p : q)
        if (counted(p)) ++n;
  n += link_->count_queued([&](const Frame& f) { return counted(f.packet); });
  n += link_->count_airborne([&](const Frame& f) { return counted(f.packet); });
  return n;
}

std::size_t Simulation::send_buffer_size(NodeId node) const {
  std::size_t n = 0;
  for (const auto& [dst, q] : nodes_.at(node).send_buffer) n += q.size();
  return n;
}

bool Simulation::knock_outstanding(NodeId observer, NodeId suspect) const {
  return nodes_.at(observer).knocks.count(suspect) != 0;
}

void Simulation::trace(NodeId node, std::string_view kind, const std::string& detail) {
  trace_.record(scheduler_.now(), node, kind, detail);
}

void Simulation::schedule_cbr(std::size_t conn_index, std::uint64_t k) {
  const double t = connections_[conn_index].send_time(k);
  if (t >= cfg_.duration) return;
  scheduler_.schedule(t, EventKind::CbrSend, connections_[conn_index].src,
                      [this, conn_index] { cbr_tick(conn_index); });
}

void Simulation::cbr_tick(std::size_t conn_index) {
  CbrConnection& c = connections_[conn_index];
  originate_data(c.src, c.dst);
  ++c.sent;
  schedule_cbr(conn_index, c.sent);
}

void Simulation::originate_data(NodeId src, NodeId dst) {
  Packet p;
  p.kind = PacketKind::Data;
  p.origin = src;
  p.final_dest = dst;
  p.seq = nodes_.at(src).next_seq++;
  p.payload_size = cfg_.packet_size;
  metrics_.record(MetricEvent::DataSent, p);
  if (tracing()) trace(src, "data-send", std::to_string(src) + ":" + std::to_string(p.seq) + " ->" + std::to_string(dst));
  send_from_origin(src, std::move(p));
}

void Simulation::on_receive(NodeId receiver, const Frame& frame, Reception kind) {
  const Packet& p = frame.packet;
  if (ids_enabled() && p.kind == PacketKind::Data) {
    // a next hop's retransmission is the passive acknowledgement
    auto& st = nodes_[receiver];
    const OverhearResult r = st.monitor.on_overhear(frame.transmitter, p.origin, p.seq);
    if (r.matched && r.knock) {
      auto it = st.knocks.find(frame.transmitter);
      if (it != st.knocks.end() && it->second.fp.origin == p.origin && it->second.fp.seq == p.seq)
        knock_result(receiver, frame.transmitter, true);
    }
  }
  if (kind == Reception::Promiscuous) {
    if (p.kind == PacketKind::Rerr) handle_rerr(receiver, frame, kind);
    return;
  }
  switch (p.kind) {
    case PacketKind::Data: handle_data(receiver, frame); break;
    case PacketKind::Rreq: handle_rreq(receiver, frame); break;
    case PacketKind::Rrep: handle_rrep(receiver, frame); break;
    case PacketKind::Rerr: handle_rerr(receiver, frame, kind); break;
    case PacketKind::Warning: handle_warning(receiver, frame); break;
  }
}

void Simulation::on_tx_failed(const Frame& frame) {
  const NodeId node = frame.transmitter;
  const Packet& p = frame.packet;
  auto& st = nodes_[node];
  st.cache.prune_link(node, frame.link_dest);
  if (tracing()) trace(node, "link-break", std::to_string(node) + "-" + std::to_string(frame.link_dest));
  if (p.kind != PacketKind::Data) return;

  if (ids_enabled()) {
    st.monitor.unregister(Fingerprint{p.origin, p.seq, frame.link_dest});
    if (p.knock) {
      auto it = st.knocks.find(frame.link_dest);
      if (it != st.knocks.end() && it->second.fp.seq == p.seq && it->second.fp.origin == p.origin) {
        scheduler_.cancel(it->second.deadline);
        st.knocks.erase(it);
        ++ids_stats_.knock_na;
        if (tracing()) trace(node, "knock", "NA " + std::to_string(frame.link_dest) + " unreachable");
      }
      return;
    }
  }
  drop_data(node, p, DropCause::LinkLoss, "link");
  // p.hop is the index of the intended receiver
  const std::size_t detector_index = p.hop - 1;
  if (detector_index > 0) send_rerr(node, frame.link_dest, p.source_route, detector_index);
}

void Simulation::drop_data(NodeId node, const Packet& pkt, DropCause cause, const char* why) {
  metrics_.record_drop(cause, pkt);
  if (tracing())
    trace(node, std::string("data-drop(") + to_string(cause) + ")",
          std::to_string(pkt.origin) + ":" + std::to_string(pkt.seq) + (pkt.knock ? " knock " : " ") + why);
}

}  // namespace rism
