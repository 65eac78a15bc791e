#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

namespace rism {

const char* to_string(Protocol p) { return p == Protocol::Dsr ? "dsr" : "rism"; }

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view v, int line, std::string_view key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError(line, "malformed number '" + std::string(v) + "' for " + std::string(key));
  return out;
}

std::uint64_t to_uint(std::string_view v, int line, std::string_view key) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ConfigError(line, "malformed integer '" + std::string(v) + "' for " + std::string(key));
  return out;
}

bool to_bool(std::string_view v, int line, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, "malformed boolean '" + std::string(v) + "' for " + std::string(key));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  const char* key;
  std::function<void(ScenarioConfig&, std::string_view, int)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define RISM_DOUBLE(name, member)                                                                   \
  Field {                                                                                           \
    name, [](ScenarioConfig& c, std::string_view v, int l) { c.member = to_double(v, l, name); },   \
        [](const ScenarioConfig& c) { return fmt(c.member); }                                       \
  }
#define RISM_UINT(name, member, type)                                                                       \
  Field {                                                                                                   \
    name, [](ScenarioConfig& c, std::string_view v, int l) { c.member = static_cast<type>(to_uint(v, l, name)); }, \
        [](const ScenarioConfig& c) { return std::to_string(c.member); }                                    \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      RISM_DOUBLE("field_width", field.width),
      RISM_DOUBLE("field_height", field.height),
      RISM_UINT("nodes", nodes, std::size_t),
      RISM_DOUBLE("malicious_fraction", malicious_fraction),
      RISM_DOUBLE("pause_time", pause_time),
      RISM_DOUBLE("max_speed", max_speed),
      RISM_DOUBLE("radio_range", radio_range),
      RISM_DOUBLE("link_rate", link_rate),
      Field{"connections",
            [](ScenarioConfig& c, std::string_view v, int l) { c.connections = to_uint(v, l, "connections"); },
            [](const ScenarioConfig& c) { return std::to_string(c.effective_connections()); }},
      RISM_UINT("packet_size", packet_size, std::uint32_t),
      RISM_DOUBLE("cbr_rate", cbr_rate),
      RISM_DOUBLE("cbr_start_spread", cbr_start_spread),
      RISM_DOUBLE("duration", duration),
      RISM_DOUBLE("drop_probability", drop_probability),
      Field{"protocol",
            [](ScenarioConfig& c, std::string_view v, int l) {
              if (v == "dsr")
                c.protocol = Protocol::Dsr;
              else if (v == "rism")
                c.protocol = Protocol::Rism;
              else
                throw ConfigError(l, "protocol must be 'dsr' or 'rism', got '" + std::string(v) + "'");
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.protocol)); }},
      Field{"count_forwards",
            [](ScenarioConfig& c, std::string_view v, int l) { c.count_forwards = to_bool(v, l, "count_forwards"); },
            [](const ScenarioConfig& c) { return std::string(c.count_forwards ? "true" : "false"); }},
      RISM_UINT("queue_capacity", queue_capacity, std::size_t),
      RISM_UINT("frame_overhead", frame_overhead, std::uint32_t),
      RISM_DOUBLE("propagation_delay", propagation_delay),
      RISM_UINT("dsr.send_buffer", dsr.send_buffer, std::size_t),
      RISM_DOUBLE("dsr.rreq_backoff_initial", dsr.rreq_backoff_initial),
      RISM_DOUBLE("dsr.rreq_backoff_max", dsr.rreq_backoff_max),
      RISM_UINT("dsr.max_route_length", dsr.max_route_length, std::size_t),
      RISM_UINT("dsr.route_cache_size", dsr.route_cache_size, std::size_t),
      RISM_DOUBLE("ids.timing_window", ids.timing_window),
      RISM_DOUBLE("ids.max_packet_rate", ids.max_packet_rate),
      RISM_DOUBLE("ids.suspicious_threshold", ids.suspicious_threshold),
      RISM_DOUBLE("ids.malicious_threshold", ids.malicious_threshold),
      RISM_DOUBLE("ids.rating_floor", ids.rating_floor),
      RISM_DOUBLE("ids.w_self", ids.w_self),
      RISM_DOUBLE("ids.w_warning", ids.w_warning),
      RISM_DOUBLE("ids.w_avoid", ids.w_avoid),
      RISM_DOUBLE("ids.w_positive", ids.w_positive),
      RISM_DOUBLE("ids.fade_inactivity", ids.fade_inactivity),
      RISM_DOUBLE("ids.fade_interval", ids.fade_interval),
      RISM_DOUBLE("ids.fade_step", ids.fade_step),
      RISM_DOUBLE("ids.pack_timeout", ids.pack_timeout),
  };
  return table;
}

#undef RISM_DOUBLE
#undef RISM_UINT

}  // namespace

std::size_t ScenarioConfig::malicious_count() const {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(nodes) * malicious_fraction - 1e-9));
}

LinkConfig ScenarioConfig::link() const {
  LinkConfig l;
  l.queue_capacity = queue_capacity;
  l.link_rate = link_rate;
  l.frame_overhead = frame_overhead;
  l.propagation_delay = propagation_delay;
  return l;
}

void ScenarioConfig::set(std::string_view key, std::string_view value, int line) {
  key = trim(key);
  value = trim(value);
  for (const auto& f : fields()) {
    if (key == f.key) {
      if (value.empty()) throw ConfigError(line, "missing value for " + std::string(key));
      f.set(*this, value, line);
      return;
    }
  }
  throw ConfigError(line, "unknown key '" + std::string(key) + "'");
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(0, msg);
  };
  require(field.width > 0 && field.height > 0, "field dimensions must be positive");
  require(nodes >= 2, "nodes must be >= 2");
  require(malicious_fraction >= 0.0 && malicious_fraction <= 1.0, "malicious_fraction must be in [0, 1]");
  require(pause_time >= 0.0, "pause_time must be >= 0");
  require(max_speed >= 0.0, "max_speed must be >= 0");
  require(radio_range > 0.0, "radio_range must be > 0");
  require(link_rate > 0.0, "link_rate must be > 0");
  require(effective_connections() <= nodes * (nodes - 1), "too many connections for the node count");
  require(packet_size > 0, "packet_size must be > 0");
  require(cbr_rate > 0.0, "cbr_rate must be > 0");
  require(cbr_start_spread >= 0.0, "cbr_start_spread must be >= 0");
  require(duration > 0.0, "duration must be > 0");
  require(drop_probability >= 0.0 && drop_probability <= 1.0, "drop_probability must be in [0, 1]");
  require(queue_capacity > 0, "queue_capacity must be > 0");
  require(propagation_delay >= 0.0, "propagation_delay must be >= 0");
  require(dsr.send_buffer > 0, "dsr.send_buffer must be > 0");
  require(dsr.rreq_backoff_initial > 0.0 && dsr.rreq_backoff_max >= dsr.rreq_backoff_initial,
          "dsr backoff must satisfy 0 < initial <= max");
  require(dsr.max_route_length >= 2, "dsr.max_route_length must be >= 2");
  require(dsr.route_cache_size > 0, "dsr.route_cache_size must be > 0");
  try {
    ids.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

std::string ScenarioConfig::to_text() const {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

void parse_config_into(ScenarioConfig& cfg, std::string_view text) {
  int line_no = 0;
  // cross-field invariants are reported against the last assignment
  int last_line = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    cfg.set(line.substr(0, eq), line.substr(eq + 1), line_no);
    try {
      // range checks are reported against the offending line
      ScenarioConfig probe = cfg;
      probe.validate();
    } catch (const ConfigError& e) {
      // only single-field range errors are attributable to this line
      const std::string key(trim(line.substr(0, eq)));
      const std::string what = e.what();
      if (what.rfind(key + " ", 0) == 0) throw ConfigError(line_no, what);
    }
    last_line = line_no;
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(last_line, e.what());
  }
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  parse_config_into(cfg, text);
  return cfg;
}

}  // namespace rism
