#include "metrics.hpp"

#include <cstdio>

namespace rism {

const char* to_string(DropCause c) {
  switch (c) {
    case DropCause::Behavior: return "behavior";
    case DropCause::QueueOverflow: return "queue";
    case DropCause::NoRoute: return "noroute";
    case DropCause::LinkLoss: return "linkloss";
  }
  return "?";
}

void Metrics::record(MetricEvent ev, const Packet& pkt) {
  if (pkt.knock) return;
  switch (ev) {
    case MetricEvent::DataSent: ++report_.data_sent; break;
    case MetricEvent::DataReceived: ++report_.data_received; break;
    case MetricEvent::ControlOriginated: ++report_.control_generated; break;
    case MetricEvent::ControlForwarded:
      if (count_forwards_) ++report_.control_generated;
      break;
    case MetricEvent::WarningSent: ++report_.warning_count; break;
  }
}

void Metrics::record_drop(DropCause cause, const Packet& pkt) {
  if (pkt.knock || pkt.kind != PacketKind::Data) return;
  switch (cause) {
    case DropCause::Behavior: ++report_.drops_behavior; break;
    case DropCause::QueueOverflow: ++report_.drops_queue; break;
    case DropCause::NoRoute: ++report_.drops_noroute; break;
    case DropCause::LinkLoss: ++report_.drops_linkloss; break;
  }
}

MetricsReport Metrics::finalize(std::uint64_t in_flight) const {
  MetricsReport r = report_;
  r.in_flight = in_flight;
  if (r.data_sent > 0) {
    const double sent = static_cast<double>(r.data_sent);
    r.pdr = static_cast<double>(r.data_received) / sent;
    r.overhead_ratio = static_cast<double>(r.control_generated) / sent;
    r.overhead_ratio_with_ids = static_cast<double>(r.control_generated + r.warning_count) / sent;
  }
  return r;
}

const char* csv_header() {
  return "run_id,seed,protocol,nodes,malicious_pct,pause_time,connections,data_sent,data_received,pdr,"
         "control_generated,overhead_ratio,warning_count,overhead_ratio_with_ids,drops_behavior,drops_queue,"
         "drops_noroute,drops_linkloss";
}

std::string csv_row(const RunInfo& info, const MetricsReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%llu,%llu,%s,%zu,%g,%g,%zu,%llu,%llu,%.6f,%llu,%.6f,%llu,%.6f,%llu,%llu,%llu,%llu",
                static_cast<unsigned long long>(info.run_id), static_cast<unsigned long long>(info.seed),
                info.protocol.c_str(), info.nodes, info.malicious_fraction * 100.0, info.pause_time,
                info.connections, static_cast<unsigned long long>(r.data_sent),
                static_cast<unsigned long long>(r.data_received), r.pdr,
                static_cast<unsigned long long>(r.control_generated), r.overhead_ratio,
                static_cast<unsigned long long>(r.warning_count), r.overhead_ratio_with_ids,
                static_cast<unsigned long long>(r.drops_behavior), static_cast<unsigned long long>(r.drops_queue),
                static_cast<unsigned long long>(r.drops_noroute), static_cast<unsigned long long>(r.drops_linkloss));
  return buf;
}

}  // namespace rism
