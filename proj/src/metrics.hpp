#pragma once

#include <cstdint>
#include <string>

#include "packet.hpp"

namespace rism {

enum class DropCause { Behavior, QueueOverflow, NoRoute, LinkLoss };
const char* to_string(DropCause c);

enum class MetricEvent {
  DataSent,
  DataReceived,
  ControlOriginated,
  ControlForwarded,
  WarningSent,
};

struct MetricsReport {
  std::uint64_t data_sent = 0;
  std::uint64_t data_received = 0;
  std::uint64_t control_generated = 0;
  std::uint64_t warning_count = 0;
  std::uint64_t drops_behavior = 0;
  std::uint64_t drops_queue = 0;
  std::uint64_t drops_noroute = 0;
  std::uint64_t drops_linkloss = 0;
  std::uint64_t in_flight = 0;
  double pdr = 0.0;
  double overhead_ratio = 0.0;
  double overhead_ratio_with_ids = 0.0;

  std::uint64_t drops_total() const { return drops_behavior + drops_queue + drops_noroute + drops_linkloss; }
  /// data_sent == data_received + drops + in_flight
  bool conserved() const { return data_sent == data_received + drops_total() + in_flight; }
};

/// Run-wide counters. Knock packets never reach the data counters.
class Metrics {
 public:
  explicit Metrics(bool count_forwards = false) : count_forwards_(count_forwards) {}

  void record(MetricEvent ev, const Packet& pkt);
  void record_drop(DropCause cause, const Packet& pkt);

  /// Fills in the derived ratios.
  MetricsReport finalize(std::uint64_t in_flight) const;
  const MetricsReport& counters() const { return report_; }

 private:
  bool count_forwards_;
  MetricsReport report_;
};

struct RunInfo {
  std::uint64_t run_id = 0;
  std::uint64_t seed = 0;
  std::string protocol;
  std::size_t nodes = 0;
  double malicious_fraction = 0.0;
  double pause_time = 0.0;
  std::size_t connections = 0;
};

const char* csv_header();
/// One CSV row without trailing newline.
std::string csv_row(const RunInfo& info, const MetricsReport& r);

}  // namespace rism
