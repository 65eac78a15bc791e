#include "workload.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace rism {

std::vector<CbrConnection> generate_connections(std::size_t nodes, std::size_t count, double rate,
                                                std::uint32_t payload, double start_spread, RngStream& traffic) {
  if (nodes < 2 && count > 0) throw std::invalid_argument("connections need at least two nodes");
  if (count > nodes * (nodes - 1)) throw std::invalid_argument("more connections than distinct node pairs");
  std::vector<CbrConnection> out;
  std::set<std::pair<NodeId, NodeId>> used;
  while (out.size() < count) {
    const auto src = static_cast<NodeId>(traffic.index(nodes));
    const auto dst = static_cast<NodeId>(traffic.index(nodes));
    if (src == dst || !used.emplace(src, dst).second) continue;
    CbrConnection c;
    c.src = src;
    c.dst = dst;
    c.rate = rate;
    c.payload = payload;
    c.start_time = start_spread > 0.0 ? traffic.uniform(0.0, start_spread) : 0.0;
    out.push_back(c);
  }
  return out;
}

std::vector<BehaviorProfile> assign_behaviors(std::size_t nodes, std::size_t malicious, double drop_probability,
                                              RngStream& scenario) {
  std::vector<NodeId> order(nodes);
  std::iota(order.begin(), order.end(), 0u);
  // Fisher-Yates with the stream's own integer draws (std::shuffle is not
  // specified bit-for-bit across standard libraries)
  for (std::size_t i = nodes; i > 1; --i) std::swap(order[i - 1], order[scenario.index(i)]);
  std::vector<BehaviorProfile> out(nodes);
  for (NodeId id = 0; id < nodes; ++id) out[id].node = id;
  for (std::size_t i = 0; i < std::min(malicious, nodes); ++i) {
    out[order[i]].kind = BehaviorKind::Malicious;
    out[order[i]].data_drop_probability = drop_probability;
  }
  return out;
}

Decision behavior_decide(const BehaviorProfile& profile, const Packet& pkt, RngStream& adversary) {
  if (pkt.kind != PacketKind::Data) return Decision::Forward;
  if (!profile.malicious() || profile.data_drop_probability <= 0.0) return Decision::Forward;
  return adversary.bernoulli(profile.data_drop_probability) ? Decision::Drop : Decision::Forward;
}

void dump_connections(std::ostream& out, const std::vector<CbrConnection>& conns) {
  char line[128];
  for (const auto& c : conns) {
    std::snprintf(line, sizeof line, "%u %u %.6f %g\n", c.src, c.dst, c.start_time, c.rate);
    out << line;
  }
}

}  // namespace rism
