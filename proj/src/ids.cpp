#include "ids.hpp"

#include <algorithm>
#include <cmath>

namespace rism {

void IdsConfig::validate() const {
  if (!(timing_window > 0.0)) throw std::invalid_argument("ids.timing_window must be > 0");
  if (!(max_packet_rate >= 0.0)) throw std::invalid_argument("ids.max_packet_rate must be >= 0");
  if (!(rating_floor < malicious_threshold && malicious_threshold < suspicious_threshold &&
        suspicious_threshold < 0.0))
    throw std::invalid_argument(
        "ids thresholds must satisfy rating_floor < malicious_threshold < suspicious_threshold < 0");
  if (!(std::fabs(w_self) > std::fabs(w_warning) && std::fabs(w_warning) >= std::fabs(w_avoid)))
    throw std::invalid_argument("ids weights must satisfy |w_self| > |w_warning| >= |w_avoid|");
  if (w_self >= 0.0 || w_warning > 0.0 || w_avoid > 0.0)
    throw std::invalid_argument("ids negative-evidence weights must be negative");
  if (w_positive < 0.0) throw std::invalid_argument("ids.w_positive must be >= 0");
  if (!(fade_inactivity >= 0.0 && fade_interval > 0.0 && fade_step > 0.0))
    throw std::invalid_argument("ids fade schedule must have inactivity >= 0, interval > 0, step > 0");
  if (!(pack_timeout >= 0.0 && pack_timeout < timing_window))
    throw std::invalid_argument("ids.pack_timeout must be in [0, timing_window)");
}

const char* to_string(Category c) {
  switch (c) {
    case Category::Normal: return "NORMAL";
    case Category::Suspicious: return "SUSPICIOUS";
    case Category::Malicious: return "MALICIOUS";
  }
  return "?";
}

const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::SelfNegative: return "SELF-NEG";
    case Evidence::SelfPositive: return "SELF-POS";
    case Evidence::Warning: return "WARNING";
    case Evidence::AvoidList: return "AVOID-LIST";
  }
  return "?";
}

Category categorize(double rating, const IdsConfig& cfg) {
  if (rating <= cfg.malicious_threshold) return Category::Malicious;
  if (rating <= cfg.suspicious_threshold) return Category::Suspicious;
  return Category::Normal;
}

const ReputationRecord* ReputationTable::find(NodeId subject) const {
  auto it = records_.find(subject);
  return it == records_.end() ? nullptr : &it->second;
}

double ReputationTable::rating(NodeId subject) const {
  const auto* r = find(subject);
  return r ? r->rating : 0.0;
}

Category ReputationTable::category(NodeId subject) const {
  const auto* r = find(subject);
  if (!r) return Category::Normal;
  if (r->convicted) return Category::Malicious;
  return categorize(r->rating, cfg_);
}

bool ReputationTable::is_malicious(NodeId subject) const {
  const auto* r = find(subject);
  return r && r->convicted;
}

std::vector<NodeId> ReputationTable::malicious_list() const {
  std::vector<NodeId> out;
  for (const auto& [id, r] : records_)
    if (r.convicted) out.push_back(id);
  return out;
}

ReputationRecord& ReputationTable::record(NodeId subject) {
  auto [it, inserted] = records_.try_emplace(subject);
  if (inserted) it->second.subject = subject;
  return it->second;
}

void ReputationTable::clamp(ReputationRecord& r) const { r.rating = std::clamp(r.rating, cfg_.rating_floor, 0.0); }

EvidenceOutcome ReputationTable::apply_evidence(NodeId subject, Evidence source, double now) {
  ReputationRecord& r = record(subject);
  EvidenceOutcome out;
  out.before = category(subject);
  switch (source) {
    case Evidence::SelfNegative:
      r.rating += cfg_.w_self;
      clamp(r);
      if (!r.convicted && (r.rating <= cfg_.malicious_threshold || r.redeemed)) {
        mark_malicious(subject, now);
        out.declared_malicious = true;
      }
      break;
    case Evidence::SelfPositive:
      if (r.convicted) break;
      r.rating += cfg_.w_positive;
      clamp(r);
      if (r.redeemed && r.rating > cfg_.suspicious_threshold) r.redeemed = false;
      break;
    case Evidence::Warning:
    case Evidence::AvoidList: {
      const double w = source == Evidence::Warning ? cfg_.w_warning : cfg_.w_avoid;
      // indirect evidence can only push a rating down to the suspicious threshold
      if (r.rating > cfg_.suspicious_threshold) r.rating = std::max(r.rating + w, cfg_.suspicious_threshold);
      clamp(r);
      r.last_accusation_time = now;
      if (r.convicted) {
        r.fading = false;
      } else if (out.before == Category::Suspicious) {
        out.request_knock = true;
      }
      break;
    }
  }
  out.after = category(subject);
  return out;
}

bool ReputationTable::mark_malicious(NodeId subject, double now) {
  ReputationRecord& r = record(subject);
  if (r.convicted) return false;
  r.convicted = true;
  r.redeemed = false;
  r.fading = false;
  r.rating = std::min(r.rating, cfg_.malicious_threshold);
  clamp(r);
  r.last_accusation_time = now;
  r.next_fade_time = now + cfg_.fade_inactivity;
  return true;
}

void ReputationTable::knock_passed(NodeId subject) {
  ReputationRecord& r = record(subject);
  if (r.convicted) return;
  r.rating = cfg_.suspicious_midpoint();
  r.redeemed = false;
}

FadeOutcome ReputationTable::fade_tick(NodeId subject, double now) {
  FadeOutcome out;
  auto it = records_.find(subject);
  if (it == records_.end() || !it->second.convicted) return out;
  ReputationRecord& r = it->second;
  if (r.next_fade_time && now < *r.next_fade_time) {
    out.next_tick = r.next_fade_time;
    return out;
  }
  if (!r.fading) {
    const double quiet_since = r.last_accusation_time + cfg_.fade_inactivity;
    if (now >= quiet_since) {
      // inactivity established; the first step lands one interval later
      r.fading = true;
      r.next_fade_time = now + cfg_.fade_interval;
    } else {
      r.next_fade_time = quiet_since;
    }
    out.next_tick = r.next_fade_time;
    return out;
  }
  const double mid = cfg_.suspicious_midpoint();
  r.rating = std::min(r.rating + cfg_.fade_step, mid);
  out.stepped = true;
  if (r.rating >= mid) {
    r.convicted = false;
    r.fading = false;
    r.redeemed = true;
    r.next_fade_time.reset();
    out.redeemed = true;
    return out;
  }
  r.next_fade_time = now + cfg_.fade_interval;
  out.next_tick = r.next_fade_time;
  return out;
}

double path_priority(const Path& path, const ReputationTable& table) {
  if (path.size() < 2) return 0.0;
  double r_min = 0.0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    if (table.is_malicious(path[i])) return 0.0;
    r_min = std::min(r_min, table.rating(path[i]));
  }
  const double badness = 1.0 + std::fabs(r_min);
  const double hops = static_cast<double>(path.size() - 1);
  return 1.0 / (badness * hops);
}

bool path_is_clean(const Path& path, const ReputationTable& table) {
  for (std::size_t i = 1; i + 1 < path.size(); ++i)
    if (table.category(path[i]) != Category::Normal) return false;
  return true;
}

void Monitor::register_sent(const Fingerprint& fp, double now, bool knock) {
  if (!registry_.emplace(fp, Entry{now, knock}).second) return;
  if (knock) return;  // judged by its own deadline, not by the window
  auto& log = logs_[fp.next_hop];
  log.neighbor = fp.next_hop;
  log.window_start = window_start_;
  ++log.registered;
}

OverhearResult Monitor::on_overhear(NodeId transmitter, NodeId origin, std::uint32_t seq) {
  auto it = registry_.find(Fingerprint{origin, seq, transmitter});
  if (it == registry_.end()) return {};
  OverhearResult r{true, it->second.knock};
  registry_.erase(it);
  if (!r.knock) ++logs_[transmitter].acked;
  return r;
}

void Monitor::unregister(const Fingerprint& fp) {
  auto entry = registry_.find(fp);
  if (entry == registry_.end()) return;
  const bool knock = entry->second.knock;
  registry_.erase(entry);
  if (knock) return;
  auto it = logs_.find(fp.next_hop);
  if (it != logs_.end() && it->second.registered > it->second.acked) --it->second.registered;
}

void Monitor::clear_neighbor(NodeId neighbor) {
  logs_.erase(neighbor);
  for (auto it = registry_.begin(); it != registry_.end();) {
    if (it->first.next_hop == neighbor && !it->second.knock)
      it = registry_.erase(it);
    else
      ++it;
  }
}

std::vector<Appraisal> Monitor::close_window(double now, double congestion, const IdsConfig& cfg) {
  std::map<NodeId, std::uint32_t> carried;
  std::vector<std::pair<Fingerprint, Entry>> young;
  for (auto it = registry_.begin(); it != registry_.end();) {
    if (it->second.knock) {
      young.emplace_back(*it);
    } else if (it->second.registered_at > now - cfg.pack_timeout) {
      ++carried[it->first.next_hop];
      young.emplace_back(*it);
    }
    it = registry_.erase(it);
  }

  std::vector<Appraisal> out;
  const double threshold = cfg.max_packet_rate * congestion;
  for (auto& [neighbor, log] : logs_) {
    log.registered -= std::min(log.registered - log.acked, carried[neighbor]);
    if (log.registered == 0) continue;
    Appraisal a;
    a.neighbor = neighbor;
    a.log = log;
    a.threshold = threshold;
    a.positive = !(static_cast<double>(log.missing()) > threshold);
    out.push_back(a);
  }

  logs_.clear();
  window_start_ = now;
  for (auto& [fp, entry] : young) {
    registry_.emplace(fp, entry);
    if (entry.knock) continue;
    auto& log = logs_[fp.next_hop];
    log.neighbor = fp.next_hop;
    log.window_start = now;
    ++log.registered;
  }
  return out;
}

const ActivityLog* Monitor::log(NodeId neighbor) const {
  auto it = logs_.find(neighbor);
  return it == logs_.end() ? nullptr : &it->second;
}

}  // namespace rism
