#include "linklayer.hpp"

#include <algorithm>
#include <string>

namespace rism {

EnqueueResult InterfaceQueue::push(Frame frame) {
  if (frames_.size() >= capacity_) return EnqueueResult::DroppedOverflow;
  frames_.push_back(std::move(frame));
  return EnqueueResult::Accepted;
}

Frame InterfaceQueue::pop() {
  Frame f = std::move(frames_.front());
  frames_.pop_front();
  return f;
}

namespace {

std::string describe(const Frame& f) {
  std::string s = to_string(f.packet.kind);
  s += ' ';
  s += std::to_string(f.packet.origin);
  s += ':';
  s += std::to_string(f.packet.seq);
  s += " ->";
  s += f.link_dest == kBroadcast ? std::string("*") : std::to_string(f.link_dest);
  return s;
}

}  // namespace

LinkLayer::LinkLayer(Scheduler& scheduler, const Mobility& mobility, LinkConfig config, Trace* trace)
    : scheduler_(scheduler),
      mobility_(mobility),
      config_(config),
      trace_(trace),
      queues_(mobility.size(), InterfaceQueue(config.queue_capacity)),
      busy_(mobility.size(), false) {}

double LinkLayer::service_time(const Frame& frame) const {
  const std::uint32_t bytes =
      (frame.packet.kind == PacketKind::Data ? frame.packet.payload_size : control_size(frame.packet)) +
      config_.frame_overhead;
  return static_cast<double>(bytes) * 8.0 / config_.link_rate;
}

EnqueueResult LinkLayer::enqueue(NodeId node, Frame frame) {
  frame.transmitter = node;
  const bool tracing = trace_ && trace_->enabled();
  std::string detail = tracing ? describe(frame) : std::string();
  const EnqueueResult r = queues_.at(node).push(std::move(frame));
  if (r == EnqueueResult::DroppedOverflow) {
    ++overflow_;
    if (tracing) trace_->record(scheduler_.now(), node, "drop-overflow", detail);
    return r;
  }
  ++enqueued_;
  if (!busy_[node]) start_service(node);
  return r;
}

void LinkLayer::start_service(NodeId node) {
  busy_[node] = true;
  const double dt = service_time(queues_[node].front());
  scheduler_.schedule_in(dt, EventKind::TxComplete, node, [this, node] { complete_service(node); });
}

std::vector<std::pair<NodeId, Reception>> LinkLayer::deliver(const Frame& frame, double t) const {
  std::vector<std::pair<NodeId, Reception>> out;
  for (NodeId n : mobility_.neighbors(frame.transmitter, t)) {
    const bool addressed = frame.link_dest == kBroadcast || frame.link_dest == n;
    out.emplace_back(n, addressed ? Reception::Addressed : Reception::Promiscuous);
  }
  return out;
}

void LinkLayer::complete_service(NodeId node) {
  Frame frame = queues_[node].pop();
  busy_[node] = false;
  const double now = scheduler_.now();
  frame.tx_time = now;
  ++transmitted_;
  auto receivers = deliver(frame, now);
  const bool unicast = frame.link_dest != kBroadcast;
  const bool reached =
      unicast && std::any_of(receivers.begin(), receivers.end(), [&](const auto& r) {
        return r.second == Reception::Addressed;
      });
  if (trace_ && trace_->enabled()) trace_->record(now, node, "tx", describe(frame));

  airborne_.push_back(InAir{frame, reached});
  scheduler_.schedule_in(config_.propagation_delay, EventKind::PacketArrival, node,
                         [this, receivers = std::move(receivers)] {
                           InAir air = std::move(airborne_.front());
                           airborne_.pop_front();
                           for (const auto& [rx, kind] : receivers) {
                             if (trace_ && trace_->enabled())
                               trace_->record(scheduler_.now(), rx,
                                              kind == Reception::Addressed ? "rx" : "overhear",
                                              describe(air.frame));
                             if (listener_) listener_->on_receive(rx, air.frame, kind);
                           }
                         });

  if (unicast && !reached && listener_) listener_->on_tx_failed(frame);
  if (!busy_[node] && !queues_[node].empty()) start_service(node);
}

std::size_t LinkLayer::count_queued(const std::function<bool(const Frame&)>& pred) const {
  std::size_t n = 0;
  for (const auto& q : queues_)
    for (const auto& f : q.frames())
      if (pred(f)) ++n;
  return n;
}

std::size_t LinkLayer::count_airborne(const std::function<bool(const Frame&)>& pred) const {
  std::size_t n = 0;
  for (const auto& a : airborne_)
    if (a.reached_dest && pred(a.frame)) ++n;
  return n;
}

}  // namespace rism
