#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <utility>
#include <vector>

#include "mobility.hpp"
#include "packet.hpp"
#include "sim_core.hpp"

namespace rism {

struct LinkConfig {
  std::size_t queue_capacity = 50;
  double link_rate = 2'000'000.0;  // bits/s
  std::uint32_t frame_overhead = 24;  // bytes added to every packet
  double propagation_delay = 1e-6;
};

struct Frame {
  NodeId transmitter = kNoNode;
  NodeId link_dest = kBroadcast;
  Packet packet;
  double tx_time = 0.0;
};

enum class Reception { Addressed, Promiscuous };

enum class EnqueueResult { Accepted, DroppedOverflow };

/// FIFO interface queue. The frame in service still counts toward occupancy
/// until its transmission completes.
class InterfaceQueue {
 public:
  explicit InterfaceQueue(std::size_t capacity = 50) : capacity_(capacity) {}

  EnqueueResult push(Frame frame);
  Frame pop();
  const Frame& front() const { return frames_.front(); }
  bool empty() const { return frames_.empty(); }

  std::size_t occupancy() const { return frames_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// occupancy / capacity
  double congestion() const {
    return capacity_ == 0 ? 1.0 : static_cast<double>(frames_.size()) / static_cast<double>(capacity_);
  }
  const std::deque<Frame>& frames() const { return frames_; }

 private:
  std::size_t capacity_;
  std::deque<Frame> frames_;
};

class LinkLayer {
 public:
  struct Listener {
    virtual ~Listener() = default;
    virtual void on_receive(NodeId receiver, const Frame& frame, Reception kind) = 0;
    /// A unicast frame finished transmission but its link_dest was out of range.
    virtual void on_tx_failed(const Frame& frame) = 0;
  };

  LinkLayer(Scheduler& scheduler, const Mobility& mobility, LinkConfig config, Trace* trace = nullptr);

  void set_listener(Listener* listener) { listener_ = listener; }

  EnqueueResult enqueue(NodeId node, Frame frame);

  /// Receivers of `frame` if its transmission completes at time `t`.
  std::vector<std::pair<NodeId, Reception>> deliver(const Frame& frame, double t) const;

  double service_time(const Frame& frame) const;
  double congestion_parameter(NodeId node) const { return queues_.at(node).congestion(); }
  const InterfaceQueue& queue(NodeId node) const { return queues_.at(node); }
  const LinkConfig& config() const { return config_; }

  std::uint64_t enqueued() const { return enqueued_; }
  std::uint64_t transmitted() const { return transmitted_; }
  std::uint64_t overflow_drops() const { return overflow_; }

  /// Queued frames (all nodes) for which `pred` holds.
  std::size_t count_queued(const std::function<bool(const Frame&)>& pred) const;
  /// Unicast frames delivered to their link_dest but not yet processed there.
  std::size_t count_airborne(const std::function<bool(const Frame&)>& pred) const;

 private:
  void start_service(NodeId node);
  void complete_service(NodeId node);

  Scheduler& scheduler_;
  const Mobility& mobility_;
  LinkConfig config_;
  Trace* trace_;
  Listener* listener_ = nullptr;
  std::vector<InterfaceQueue> queues_;
  std::vector<bool> busy_;
  struct InAir {
    Frame frame;
    bool reached_dest;
  };
  std::deque<InAir> airborne_;
  std::uint64_t enqueued_ = 0;
  std::uint64_t transmitted_ = 0;
  std::uint64_t overflow_ = 0;
};

}  // namespace rism
