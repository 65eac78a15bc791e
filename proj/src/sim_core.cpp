#include "sim_core.hpp"

#include <cstdio>
#include <limits>
#include <ostream>

namespace rism {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PacketArrival: return "packet-arrival";
    case EventKind::TxComplete: return "tx-complete";
    case EventKind::WindowClose: return "window-close";
    case EventKind::CbrSend: return "cbr-send";
    case EventKind::RreqRetry: return "rreq-retry";
    case EventKind::KnockDeadline: return "knock-deadline";
    case EventKind::FadeTick: return "fade-tick";
    case EventKind::SimEnd: return "sim-end";
  }
  return "unknown";
}

void Trace::record(double time, NodeId node, std::string_view kind, std::string_view detail) {
  if (!out_) return;
  char stamp[32];
  std::snprintf(stamp, sizeof stamp, "%.9f", time);
  *out_ << stamp << ',';
  if (node == kNoNode)
    *out_ << '-';
  else
    *out_ << node;
  *out_ << ',' << kind << ',' << detail << '\n';
}

EventHandle Scheduler::schedule(double fire_time, EventKind kind, NodeId node, Action action) {
  if (!(fire_time >= clock_)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "event %s scheduled at %.9f before clock %.9f", to_string(kind),
                  fire_time, clock_);
    throw SchedulingError(msg);
  }
  Key key{fire_time, next_seq_++};
  queue_.emplace(key, Pending{kind, node, std::move(action)});
  ++scheduled_;
  return {key.time, key.seq};
}

bool Scheduler::cancel(const EventHandle& handle) {
  auto it = queue_.find(Key{handle.fire_time, handle.sequence});
  if (it == queue_.end()) return false;
  queue_.erase(it);
  ++cancelled_;
  return true;
}

RunSummary Scheduler::run_until(double t_end) {
  RunSummary summary;
  while (!queue_.empty()) {
    auto it = queue_.begin();
    if (it->first.time > t_end) break;
    clock_ = it->first.time;
    Pending ev = std::move(it->second);
    const std::uint64_t seq = it->first.seq;
    queue_.erase(it);
    ++processed_;
    ++summary.processed;
    if (trace_ && trace_->enabled()) trace_->record(clock_, ev.node, to_string(ev.kind), std::to_string(seq));
    ev.action();
  }
  if (t_end > clock_) clock_ = t_end;
  summary.clock = clock_;
  summary.in_flight = queue_.size();
  return summary;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view label) : label_(label) {
  const std::uint64_t h = fnv1a(label);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  engine_.seed(seq);
}

std::uint64_t RngStream::index(std::uint64_t n) {
  if (n <= 1) return 0;
  // rejection sampling keeps the draw unbiased and platform independent
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace rism
