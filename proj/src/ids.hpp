#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "packet.hpp"
#include "sim_core.hpp"

namespace rism {

/// Tunables of the reputation-based IDS. Ratings are non-positive: 0 is the
/// neutral starting point and more negative is worse.
struct IdsConfig {
  double timing_window = 1.0;
  double max_packet_rate = 20.0;  // packets per window
  double suspicious_threshold = -10.0;
  double malicious_threshold = -40.0;
  double rating_floor = -60.0;
  double w_self = -5.0;
  double w_warning = -2.0;
  double w_avoid = -1.0;
  double w_positive = 1.0;
  double fade_inactivity = 200.0;
  double fade_interval = 50.0;
  double fade_step = 5.0;
  /// Registrations younger than this at window close roll into the next
  /// window instead of being judged.
  double pack_timeout = 0.1;

  double suspicious_midpoint() const { return (suspicious_threshold + malicious_threshold) / 2.0; }

  /// Throws std::invalid_argument naming the violated ordering.
  void validate() const;
};

enum class Category { Normal, Suspicious, Malicious };
const char* to_string(Category c);

/// Category implied by a rating alone.
Category categorize(double rating, const IdsConfig& cfg);

enum class Evidence { SelfNegative, SelfPositive, Warning, AvoidList };
const char* to_string(Evidence e);

inline bool is_indirect(Evidence e) { return e == Evidence::Warning || e == Evidence::AvoidList; }

struct ReputationRecord {
  NodeId subject = kNoNode;
  double rating = 0.0;
  /// On the malicious list. Set only by a self-observed conviction; cleared
  /// when fading brings the rating back to the suspicious midpoint.
  bool convicted = false;
  bool redeemed = false;
  bool fading = false;
  double last_accusation_time = -std::numeric_limits<double>::infinity();
  std::optional<double> next_fade_time;
};

struct EvidenceOutcome {
  Category before = Category::Normal;
  Category after = Category::Normal;
  bool declared_malicious = false;
  bool request_knock = false;
};

struct FadeOutcome {
  bool stepped = false;
  bool redeemed = false;
  std::optional<double> next_tick;
};

/// One observer's view of every other node.
class ReputationTable {
 public:
  explicit ReputationTable(IdsConfig cfg = {}) : cfg_(cfg) {}

  const IdsConfig& config() const { return cfg_; }

  const ReputationRecord* find(NodeId subject) const;
  double rating(NodeId subject) const;
  /// MALICIOUS for convicted subjects (also while fading), otherwise
  /// categorize(rating).
  Category category(NodeId subject) const;
  bool is_malicious(NodeId subject) const;
  /// Convicted subjects in ascending id order.
  std::vector<NodeId> malicious_list() const;

  EvidenceOutcome apply_evidence(NodeId subject, Evidence source, double now);

  /// Convicts `subject`. Returns false when it already was (no-op).
  bool mark_malicious(NodeId subject, double now);

  void knock_passed(NodeId subject);

  /// Advances the fade schedule of a convicted subject at `now`.
  FadeOutcome fade_tick(NodeId subject, double now);

  const std::map<NodeId, ReputationRecord>& records() const { return records_; }

 private:
  ReputationRecord& record(NodeId subject);
  void clamp(ReputationRecord& r) const;

  IdsConfig cfg_;
  std::map<NodeId, ReputationRecord> records_;
};

/// Higher is better. Paths through a convicted node score 0.
double path_priority(const Path& path, const ReputationTable& table);

/// True when no intermediate node of `path` is suspicious or worse.
bool path_is_clean(const Path& path, const ReputationTable& table);

struct Fingerprint {
  NodeId origin = kNoNode;
  std::uint32_t seq = 0;
  NodeId next_hop = kNoNode;

  bool operator<(const Fingerprint& o) const {
    if (origin != o.origin) return origin < o.origin;
    if (seq != o.seq) return seq < o.seq;
    return next_hop < o.next_hop;
  }
  bool operator==(const Fingerprint& o) const = default;
};

struct ActivityLog {
  NodeId neighbor = kNoNode;
  double window_start = 0.0;
  std::uint32_t registered = 0;
  std::uint32_t acked = 0;
  std::uint32_t missing() const { return registered - acked; }
};

struct Appraisal {
  NodeId neighbor = kNoNode;
  ActivityLog log;
  double threshold = 0.0;
  bool positive = true;
};

struct OverhearResult {
  bool matched = false;
  bool knock = false;
};

/// PACK bookkeeping: registers data handed to a next hop and matches the
/// next hop's overheard retransmission against it.
class Monitor {
 public:
  void register_sent(const Fingerprint& fp, double now, bool knock = false);
  OverhearResult on_overhear(NodeId transmitter, NodeId origin, std::uint32_t seq);
  /// Withdraws a registration whose frame never reached the next hop.
  void unregister(const Fingerprint& fp);
  /// Forgets everything recorded about `neighbor` in the current window.
  void clear_neighbor(NodeId neighbor);

  /// Judges the window ending at `now`. Threshold per neighbor is
  /// max_packet_rate * congestion; more missing than that is negative.
  std::vector<Appraisal> close_window(double now, double congestion, const IdsConfig& cfg);

  const ActivityLog* log(NodeId neighbor) const;
  bool pending(const Fingerprint& fp) const { return registry_.count(fp) != 0; }
  std::size_t registry_size() const { return registry_.size(); }

 private:
  struct Entry {
    double registered_at;
    bool knock;
  };
  std::map<Fingerprint, Entry> registry_;
  std::map<NodeId, ActivityLog> logs_;
  double window_start_ = 0.0;
};

}  // namespace rism
