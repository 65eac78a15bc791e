#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ids.hpp"
#include "linklayer.hpp"
#include "mobility.hpp"

namespace rism {

enum class Protocol { Dsr, Rism };
const char* to_string(Protocol p);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct DsrConfig {
  std::size_t send_buffer = 64;
  double rreq_backoff_initial = 0.5;
  double rreq_backoff_max = 10.0;
  std::size_t max_route_length = 16;
  std::size_t route_cache_size = 64;
};

/// Everything one simulation run needs except its seed. A default
/// constructed config reproduces the reference 10-node scenario.
struct ScenarioConfig {
  FieldSpec field;
  std::size_t nodes = 10;
  double malicious_fraction = 0.0;
  double pause_time = 0.0;
  double max_speed = 10.0;
  double radio_range = 250.0;
  double link_rate = 2'000'000.0;
  std::optional<std::size_t> connections;
  std::uint32_t packet_size = 64;
  double cbr_rate = 4.0;
  double cbr_start_spread = 10.0;
  double duration = 900.0;
  double drop_probability = 0.99;
  Protocol protocol = Protocol::Rism;
  bool count_forwards = false;
  std::size_t queue_capacity = 50;
  std::uint32_t frame_overhead = 24;
  double propagation_delay = 1e-6;
  DsrConfig dsr;
  IdsConfig ids;

  /// Explicit count, or nodes/2 (5 for 10 nodes, 10 for 20).
  std::size_t effective_connections() const { return connections ? *connections : nodes / 2; }
  /// ceil(nodes * malicious_fraction), robust to binary rounding.
  std::size_t malicious_count() const;
  LinkConfig link() const;

  /// Applies one `key = value` assignment. `line` is only used in errors.
  void set(std::string_view key, std::string_view value, int line = 0);
  /// Throws ConfigError when invariants do not hold.
  void validate() const;
  /// Canonical `key = value` rendering of every field.
  std::string to_text() const;
};

/// Parses a `key = value` document on top of the defaults.
ScenarioConfig parse_config(std::string_view text);
/// Parses on top of an existing config.
void parse_config_into(ScenarioConfig& cfg, std::string_view text);

}  // namespace rism
