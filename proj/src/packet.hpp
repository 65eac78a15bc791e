#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "sim_core.hpp"

namespace rism {

enum class PacketKind { Data, Rreq, Rrep, Rerr, Warning };

inline const char* to_string(PacketKind k) {
  switch (k) {
    case PacketKind::Data: return "DATA";
    case PacketKind::Rreq: return "RREQ";
    case PacketKind::Rrep: return "RREP";
    case PacketKind::Rerr: return "RERR";
    case PacketKind::Warning: return "WARNING";
  }
  return "?";
}

using Path = std::vector<NodeId>;

inline bool contains(const Path& p, NodeId n) { return std::find(p.begin(), p.end(), n) != p.end(); }

/// Network-layer packet. Fields not relevant to `kind` stay empty.
///
/// DATA: `source_route` is the full route origin..final_dest and `hop` the
/// index of the node currently holding the packet.
/// RREQ: `route_record` accumulates the flood path; `avoid_list` carries the
/// nodes the requester and the relays refuse.
/// RREP: `source_route` is the discovered route origin..target; it travels
/// backwards, `hop` counts down to 0. `avoid_list` is copied from the
/// answered request.
/// RERR: `source_route` is the reverse path from the detector back to the
/// data origin; `broken_link` the failed hop.
/// WARNING: `accused` is the node its sender declared malicious.
struct Packet {
  PacketKind kind = PacketKind::Data;
  NodeId origin = kNoNode;
  NodeId final_dest = kNoNode;
  std::uint32_t seq = 0;
  Path source_route;
  Path route_record;
  Path avoid_list;
  std::pair<NodeId, NodeId> broken_link{kNoNode, kNoNode};
  NodeId accused = kNoNode;
  std::uint32_t payload_size = 0;
  std::uint32_t hop = 0;
  bool knock = false;
};

/// Appends every node of `extra` not already present. Keeps `avoid` free of
/// duplicates as long as it started that way.
inline void merge_unique(Path& avoid, const Path& extra) {
  for (NodeId n : extra)
    if (!contains(avoid, n)) avoid.push_back(n);
}

/// Bytes on the wire for a control packet before link-layer overhead.
inline std::uint32_t control_size(const Packet& p) {
  switch (p.kind) {
    case PacketKind::Rreq: return 16 + 4 * static_cast<std::uint32_t>(p.route_record.size() + p.avoid_list.size());
    case PacketKind::Rrep: return 16 + 4 * static_cast<std::uint32_t>(p.source_route.size() + p.avoid_list.size());
    case PacketKind::Rerr: return 20 + 4 * static_cast<std::uint32_t>(p.source_route.size());
    case PacketKind::Warning: return 8;
    case PacketKind::Data: break;
  }
  return p.payload_size;
}

}  // namespace rism
