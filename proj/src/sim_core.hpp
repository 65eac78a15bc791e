#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rism {

using NodeId = std::uint32_t;
inline constexpr NodeId kBroadcast = 0xffffffffu;
inline constexpr NodeId kNoNode = 0xfffffffeu;

enum class EventKind {
  PacketArrival,
  TxComplete,
  WindowClose,
  CbrSend,
  RreqRetry,
  KnockDeadline,
  FadeTick,
  SimEnd,
};

const char* to_string(EventKind kind);

/// Raised when an event is scheduled before the current clock.
class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Line-based trace sink: `time,node,kind,detail`.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::ostream* out) : out_(out) {}

  bool enabled() const { return out_ != nullptr; }
  void record(double time, NodeId node, std::string_view kind, std::string_view detail);

 private:
  std::ostream* out_ = nullptr;
};

struct EventHandle {
  double fire_time = 0.0;
  std::uint64_t sequence = 0;
};

struct RunSummary {
  std::uint64_t processed = 0;
  std::uint64_t in_flight = 0;
  double clock = 0.0;
};

class Scheduler {
 public:
  using Action = std::function<void()>;

  explicit Scheduler(Trace* trace = nullptr) : trace_(trace) {}

  double now() const { return clock_; }

  EventHandle schedule(double fire_time, EventKind kind, NodeId node, Action action);
  EventHandle schedule_in(double delay, EventKind kind, NodeId node, Action action) {
    return schedule(clock_ + delay, kind, node, std::move(action));
  }
  /// Returns false if the event already fired or was cancelled.
  bool cancel(const EventHandle& handle);

  RunSummary run_until(double t_end);

  std::uint64_t scheduled() const { return scheduled_; }
  std::uint64_t processed() const { return processed_; }
  std::uint64_t cancelled() const { return cancelled_; }
  std::uint64_t pending() const { return queue_.size(); }

 private:
  struct Key {
    double time;
    std::uint64_t seq;
    bool operator<(const Key& o) const { return time < o.time || (time == o.time && seq < o.seq); }
  };
  struct Pending {
    EventKind kind;
    NodeId node;
    Action action;
  };

  std::map<Key, Pending> queue_;
  double clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t scheduled_ = 0;
  std::uint64_t processed_ = 0;
  std::uint64_t cancelled_ = 0;
  Trace* trace_ = nullptr;
};

/// Named random stream. Identical (master_seed, label) pairs reproduce the
/// same draw sequence; streams with different labels are independent.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool bernoulli(double p) { return p >= 1.0 || uniform01() < p; }
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);

  const std::string& label() const { return label_; }

 private:
  std::string label_;
  std::mt19937_64 engine_;
};

}  // namespace rism
