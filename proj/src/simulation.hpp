#pragma once

#include <deque>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "config.hpp"
#include "dsr.hpp"
#include "ids.hpp"
#include "linklayer.hpp"
#include "metrics.hpp"
#include "mobility.hpp"
#include "sim_core.hpp"
#include "workload.hpp"

namespace rism {

/// Replaces pieces of the randomly drawn scenario; used by micro-scenarios.
struct ScenarioOverrides {
  std::optional<std::vector<Vec2>> positions;  // static nodes at these points
  std::optional<std::vector<CbrConnection>> connections;
  std::optional<std::vector<BehaviorProfile>> behaviors;
};

/// Tally of IDS activity, all zero in defenseless mode.
struct IdsStats {
  std::uint64_t windows_closed = 0;
  std::uint64_t appraisals_positive = 0;
  std::uint64_t appraisals_negative = 0;
  std::uint64_t warnings_sent = 0;
  std::uint64_t warnings_received = 0;
  std::uint64_t avoid_sightings = 0;
  std::uint64_t knock_pass = 0;
  std::uint64_t knock_fail = 0;
  std::uint64_t knock_na = 0;
  std::uint64_t fade_steps = 0;
  std::uint64_t convictions = 0;
  std::uint64_t redemptions = 0;

  std::uint64_t total() const {
    return windows_closed + appraisals_positive + appraisals_negative + warnings_sent + warnings_received +
           avoid_sightings + knock_pass + knock_fail + knock_na + fade_steps + convictions + redemptions;
  }
};

/// One simulated network: scenario, link layer, per-node DSR state
/// and, when the protocol is RISM, per-node IDS state.
class Simulation : private LinkLayer::Listener {
 public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed, ScenarioOverrides overrides = {},
             std::ostream* trace = nullptr);
  ~Simulation() override;

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to the configured duration and returns the final report.
  MetricsReport run();
  RunSummary run_until(double t);
  MetricsReport report() const;

  const ScenarioConfig& config() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }
  bool ids_enabled() const { return cfg_.protocol == Protocol::Rism; }
  double now() const { return scheduler_.now(); }

  const Mobility& mobility() const { return *mobility_; }
  const LinkLayer& link() const { return *link_; }
  const Scheduler& scheduler() const { return scheduler_; }
  const std::vector<CbrConnection>& connections() const { return connections_; }
  const std::vector<BehaviorProfile>& behaviors() const { return behaviors_; }
  const IdsStats& ids_stats() const { return ids_stats_; }
  const Metrics& metrics() const { return metrics_; }

  const ReputationTable& reputation(NodeId node) const { return nodes_.at(node).reputation; }
  const Monitor& monitor(NodeId node) const { return nodes_.at(node).monitor; }
  const RouteCache& route_cache(NodeId node) const { return nodes_.at(node).cache; }
  std::size_t send_buffer_size(NodeId node) const;
  bool knock_outstanding(NodeId observer, NodeId suspect) const;

  /// Data packets buffered, queued or on the air.
  std::uint64_t data_in_flight() const;

  // Direct stimuli, for tests and micro-scenarios.
  void inject_warning(NodeId receiver, NodeId accuser, NodeId accused);
  void seed_route(NodeId node, const Path& path);
  void originate_data(NodeId src, NodeId dst);
  void start_discovery(NodeId src, NodeId dst);

 private:
  struct Discovery {
    double backoff = 0.0;
    std::optional<EventHandle> retry;
  };
  struct Knock {
    Fingerprint fp;
    EventHandle deadline;
  };
  struct NodeState {
    RouteCache cache;
    std::map<NodeId, std::deque<Packet>> send_buffer;
    std::map<NodeId, Discovery> discovery;
    std::set<std::pair<NodeId, std::uint32_t>> seen_rreq;
    std::set<std::pair<NodeId, std::uint32_t>> forwarded_rreq;
    std::uint32_t next_rreq_id = 0;
    std::uint32_t next_seq = 0;
    ReputationTable reputation;
    Monitor monitor;
    std::map<NodeId, Knock> knocks;
    std::set<NodeId> fade_pending;
  };

  // LinkLayer::Listener
  void on_receive(NodeId receiver, const Frame& frame, Reception kind) override;
  void on_tx_failed(const Frame& frame) override;

  // workload
  void schedule_cbr(std::size_t conn_index, std::uint64_t k);
  void cbr_tick(std::size_t conn_index);

  // dsr
  void send_from_origin(NodeId node, Packet pkt);
  void buffer_packet(NodeId node, Packet pkt);
  void transmit_data(NodeId node, Packet pkt);
  void handle_data(NodeId node, const Frame& frame);
  void originate_rreq(NodeId src, NodeId dst);
  void rreq_retry(NodeId src, NodeId dst);
  void route_learned(NodeId node, NodeId dst);
  void handle_rreq(NodeId node, const Frame& frame);
  void send_rrep(NodeId node, Path route, std::size_t index, const Packet& rreq);
  void handle_rrep(NodeId node, const Frame& frame);
  void send_rerr(NodeId detector, NodeId broken_to, const Path& data_route, std::size_t detector_index);
  void handle_rerr(NodeId node, const Frame& frame, Reception kind);
  void learn_route(NodeId node, const Path& path);
  void send_frame(NodeId node, NodeId link_dest, Packet pkt);
  void drop_data(NodeId node, const Packet& pkt, DropCause cause, const char* why);

  // ids
  void close_window(NodeId node);
  void apply_evidence(NodeId observer, NodeId subject, Evidence source);
  void convicted(NodeId observer, NodeId subject);
  void handle_warning(NodeId node, const Frame& frame);
  void try_knock(NodeId observer, NodeId suspect);
  void knock_result(NodeId observer, NodeId suspect, bool passed);
  void schedule_fade(NodeId observer, NodeId subject, double at);
  void fade_tick(NodeId observer, NodeId subject);
  const ReputationTable* table_of(NodeId node) const;

  void trace(NodeId node, std::string_view kind, const std::string& detail);
  bool tracing() const { return trace_.enabled(); }

  ScenarioConfig cfg_;
  std::uint64_t seed_;
  Trace trace_;
  Scheduler scheduler_;
  RngStream scenario_rng_;
  RngStream mobility_rng_;
  RngStream traffic_rng_;
  RngStream adversary_rng_;
  std::unique_ptr<Mobility> mobility_;
  std::unique_ptr<LinkLayer> link_;
  Metrics metrics_;
  std::vector<BehaviorProfile> behaviors_;
  std::vector<CbrConnection> connections_;
  std::vector<NodeState> nodes_;
  IdsStats ids_stats_;
};

}  // namespace rism
