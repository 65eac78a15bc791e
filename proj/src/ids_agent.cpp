// IDS side of Simulation: timing windows, evidence handling, convictions
// with WARNING broadcast and route purging, knock tests and fading.

#include <cstdio>

#include "simulation.hpp"

namespace rism {

namespace {

std::string rating_str(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", r);
  return buf;
}

}  // namespace

void Simulation::close_window(NodeId node) {
  auto& st = nodes_[node];
  ++ids_stats_.windows_closed;
  const double congestion = link_->congestion_parameter(node);
  auto appraisals = st.monitor.close_window(now(), congestion, cfg_.ids);
  if (tracing()) trace(node, "window-close", "congestion=" + rating_str(congestion));
  for (const auto& a : appraisals) {
    if (tracing()) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%c %u registered=%u acked=%u missing=%u threshold=%g", a.positive ? '+' : '-',
                    a.neighbor, a.log.registered, a.log.acked, a.log.missing(), a.threshold);
      trace(node, "appraisal", buf);
    }
    if (a.positive)
      ++ids_stats_.appraisals_positive;
    else
      ++ids_stats_.appraisals_negative;
    apply_evidence(node, a.neighbor, a.positive ? Evidence::SelfPositive : Evidence::SelfNegative);
  }
  const double next = now() + cfg_.ids.timing_window;
  if (next <= cfg_.duration)
    scheduler_.schedule(next, EventKind::WindowClose, node, [this, node] { close_window(node); });
}

void Simulation::apply_evidence(NodeId observer, NodeId subject, Evidence source) {
  if (observer == subject) return;
  auto& st = nodes_[observer];
  const EvidenceOutcome out = st.reputation.apply_evidence(subject, source, now());
  if (out.before != out.after && tracing())
    trace(observer, "category-change",
          std::to_string(subject) + " " + to_string(out.before) + "->" + to_string(out.after) + " rating=" +
              rating_str(st.reputation.rating(subject)) + " by " + to_string(source));
  if (out.declared_malicious) convicted(observer, subject);
  if (out.request_knock) try_knock(observer, subject);
}

void Simulation::convicted(NodeId observer, NodeId subject) {
  auto& st = nodes_[observer];
  ++ids_stats_.convictions;

  Packet w;
  w.kind = PacketKind::Warning;
  w.origin = observer;
  w.final_dest = kBroadcast;
  w.accused = subject;
  metrics_.record(MetricEvent::WarningSent, w);
  ++ids_stats_.warnings_sent;
  if (tracing()) trace(observer, "warning-tx", std::to_string(subject));
  send_frame(observer, kBroadcast, std::move(w));

  st.cache.purge_node(subject);

  // neighbors learn that the link to the convict is gone
  Packet rerr;
  rerr.kind = PacketKind::Rerr;
  rerr.origin = observer;
  rerr.final_dest = kBroadcast;
  rerr.broken_link = {observer, subject};
  metrics_.record(MetricEvent::ControlOriginated, rerr);
  if (tracing()) trace(observer, "rerr", std::to_string(observer) + "-" + std::to_string(subject) + " to *");
  send_frame(observer, kBroadcast, std::move(rerr));

  if (const auto* rec = st.reputation.find(subject); rec && rec->next_fade_time)
    schedule_fade(observer, subject, *rec->next_fade_time);
}

void Simulation::handle_warning(NodeId node, const Frame& frame) {
  if (!ids_enabled()) return;
  const Packet& w = frame.packet;
  const NodeId accuser = frame.transmitter;
  if (w.accused == node) {
    if (tracing()) trace(node, "warning-rx", "self-accusation from " + std::to_string(accuser) + " ignored");
    return;
  }
  if (accuser == node || nodes_[node].reputation.is_malicious(accuser)) return;
  ++ids_stats_.warnings_received;
  if (tracing()) trace(node, "warning-rx", std::to_string(w.accused) + " from " + std::to_string(accuser));
  apply_evidence(node, w.accused, Evidence::Warning);
}

void Simulation::inject_warning(NodeId receiver, NodeId accuser, NodeId accused) {
  Frame f;
  f.transmitter = accuser;
  f.link_dest = kBroadcast;
  f.packet.kind = PacketKind::Warning;
  f.packet.origin = accuser;
  f.packet.final_dest = kBroadcast;
  f.packet.accused = accused;
  f.tx_time = now();
  handle_warning(receiver, f);
}

void Simulation::try_knock(NodeId observer, NodeId suspect) {
  auto& st = nodes_[observer];
  if (st.knocks.count(suspect)) return;
  auto not_applicable = [&](const char* why) {
    ++ids_stats_.knock_na;
    if (tracing()) trace(observer, "knock", std::string("NA ") + std::to_string(suspect) + " " + why);
  };
  if (!mobility_->in_range(observer, suspect, now())) return not_applicable("not a neighbor");
  NodeId witness = kNoNode;
  for (NodeId w : st.cache.witnesses_for(suspect)) {
    if (mobility_->in_range(suspect, w, now())) {
      witness = w;
      break;
    }
  }
  if (witness == kNoNode) return not_applicable("no witness");

  Packet p;
  p.kind = PacketKind::Data;
  p.origin = observer;
  p.final_dest = witness;
  p.seq = st.next_seq++;
  p.payload_size = cfg_.packet_size;
  p.source_route = {observer, suspect, witness};
  p.hop = 0;
  p.knock = true;
  const Fingerprint fp{observer, p.seq, suspect};
  transmit_data(observer, std::move(p));
  if (!st.monitor.pending(fp)) return not_applicable("queue full");
  Knock k;
  k.fp = fp;
  k.deadline = scheduler_.schedule_in(cfg_.ids.timing_window, EventKind::KnockDeadline, observer,
                                      [this, observer, suspect] { knock_result(observer, suspect, false); });
  st.knocks[suspect] = k;
  if (tracing()) trace(observer, "knock-tx", std::to_string(suspect) + " via " + std::to_string(witness));
}

void Simulation::knock_result(NodeId observer, NodeId suspect, bool passed) {
  auto& st = nodes_[observer];
  auto it = st.knocks.find(suspect);
  if (it == st.knocks.end()) return;
  if (passed)
    scheduler_.cancel(it->second.deadline);
  else
    st.monitor.unregister(it->second.fp);
  st.knocks.erase(it);
  const Category before = st.reputation.category(suspect);
  if (passed) {
    ++ids_stats_.knock_pass;
    st.reputation.knock_passed(suspect);
    if (tracing()) trace(observer, "knock", "PASS " + std::to_string(suspect) + " rating=" +
                                                rating_str(st.reputation.rating(suspect)));
    return;
  }
  ++ids_stats_.knock_fail;
  if (tracing()) trace(observer, "knock", "FAIL " + std::to_string(suspect));
  if (st.reputation.mark_malicious(suspect, now())) {
    if (tracing())
      trace(observer, "category-change",
            std::to_string(suspect) + " " + to_string(before) + "->MALICIOUS rating=" +
                rating_str(st.reputation.rating(suspect)) + " by knock");
    convicted(observer, suspect);
  }
}

void Simulation::schedule_fade(NodeId observer, NodeId subject, double at) {
  auto& st = nodes_[observer];
  if (!st.fade_pending.insert(subject).second) return;
  if (at < now()) at = now();
  scheduler_.schedule(at, EventKind::FadeTick, observer, [this, observer, subject] { fade_tick(observer, subject); });
}

void Simulation::fade_tick(NodeId observer, NodeId subject) {
  auto& st = nodes_[observer];
  st.fade_pending.erase(subject);
  const FadeOutcome out = st.reputation.fade_tick(subject, now());
  if (out.stepped) {
    ++ids_stats_.fade_steps;
    if (tracing()) trace(observer, "fade", std::to_string(subject) + " rating=" + rating_str(st.reputation.rating(subject)));
  }
  if (out.redeemed) {
    ++ids_stats_.redemptions;
    if (tracing())
      trace(observer, "category-change",
            std::to_string(subject) + " MALICIOUS->SUSPICIOUS rating=" + rating_str(st.reputation.rating(subject)) +
                " redeemed");
  }
  if (out.next_tick) schedule_fade(observer, subject, *out.next_tick);
}

}  // namespace rism
