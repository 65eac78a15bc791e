#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "packet.hpp"
#include "sim_core.hpp"

namespace rism {

struct CbrConnection {
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 4.0;  // packets/s
  std::uint32_t payload = 64;
  double start_time = 0.0;
  std::uint64_t sent = 0;

  /// Origination time of the k-th packet; computed from the start so long
  /// runs do not accumulate rounding drift.
  double send_time(std::uint64_t k) const { return start_time + static_cast<double>(k) / rate; }
};

enum class BehaviorKind { Cooperative, Malicious };

struct BehaviorProfile {
  NodeId node = 0;
  BehaviorKind kind = BehaviorKind::Cooperative;
  double data_drop_probability = 0.0;

  bool malicious() const { return kind == BehaviorKind::Malicious; }
};

enum class Decision { Forward, Drop };

/// Distinct random (src, dst) pairs with start times uniform over
/// [0, start_spread), drawn from the traffic stream.
std::vector<CbrConnection> generate_connections(std::size_t nodes, std::size_t count, double rate,
                                                std::uint32_t payload, double start_spread, RngStream& traffic);

/// The first `malicious` ids of a seeded shuffle misbehave.
std::vector<BehaviorProfile> assign_behaviors(std::size_t nodes, std::size_t malicious, double drop_probability,
                                              RngStream& scenario);

/// Relay decision of an intermediate hop. Control packets always pass.
Decision behavior_decide(const BehaviorProfile& profile, const Packet& pkt, RngStream& adversary);

/// `src dst start rate` per line.
void dump_connections(std::ostream& out, const std::vector<CbrConnection>& conns);

}  // namespace rism
