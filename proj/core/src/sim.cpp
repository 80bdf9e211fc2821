#include "wmsim/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace wmsim {

namespace {

double dist(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

double random_waypoint_step(NodeState& node, double area_width_m, double area_height_m,
                            double dt, Rng& rng) {
  constexpr double kArrivalEps = 1e-9;
  double remaining = dist(node.position, node.waypoint);
  if (remaining <= kArrivalEps) {
    node.waypoint = {rng.uniform(0.0, area_width_m), rng.uniform(0.0, area_height_m)};
    return 0.0;
  }
  double step = node.speed_mps * dt;
  if (step >= remaining) {
    node.position = node.waypoint;
    return remaining;
  }
  double f = step / remaining;
  node.position.x += (node.waypoint.x - node.position.x) * f;
  node.position.y += (node.waypoint.y - node.position.y) * f;
  return step;
}

double interference_level(const Point& node, int serving_ap,
                          const std::vector<AccessPoint>& aps, const PathLossParams& p) {
  double serving_att = path_loss_db(dist(node, aps[serving_ap].position), p);
  double sum = 0;
  for (int i = 0; i < static_cast<int>(aps.size()); ++i) {
    if (i == serving_ap || aps[i].channel != aps[serving_ap].channel) continue;
    double att = path_loss_db(dist(node, aps[i].position), p);
    sum += std::pow(10.0, (serving_att - att) / 10.0);
  }
  return sum;
}

namespace {

struct PendingHandover {
  int target = -1;
  double completes_at = 0;
};

struct QueuedPacket {
  Direction direction;
  double sent_at;
};

class Simulation {
 public:
  explicit Simulation(const Scenario& sc)
      : sc_(sc),
        mobility_rng_(derive_seed(sc.seed, "mobility", sc.speed_kmph, 0)),
        radio_rng_(derive_seed(sc.seed, "radio", sc.speed_kmph, 0)),
        event_rng_(derive_seed(sc.seed, to_string(sc.algorithm), sc.speed_kmph, 0)) {}

  RunResult run() {
    sc_.validate(&result_.warnings);
    trigger_ = make_trigger(sc_.algorithm, sc_.trigger, sc_.fuzzy);

    Point start = sc_.start_position.value_or(sc_.access_points[sc_.home_ap].position);
    node_.position = start;
    node_.waypoint = start;
    node_.speed_mps = sc_.speed_kmph / 3.6;
    serving_ = sc_.home_ap;

    const int ap_count = static_cast<int>(sc_.access_points.size());
    shadow_.assign(ap_count, ShadowingProcess{});
    att_db_.assign(ap_count, 0.0);

    const double step_s = sc_.trigger.update_interval_s;
    const long steps = static_cast<long>(std::ceil(sc_.duration_s / step_s));

    for (long k = 0; k < steps; ++k) {
      const double now = static_cast<double>(k) * step_s;
      step(now, std::min(now + step_s, sc_.duration_s));
    }

    finalize();
    return std::move(result_);
  }

 private:
  void step(double now, double window_end) {
    double moved = random_waypoint_step(node_, sc_.area_width_m, sc_.area_height_m,
                                        sc_.trigger.update_interval_s, mobility_rng_);
    travelled_since_attach_ += moved;

    // Advance every AP link every step so fading streams do not depend on
    // which AP happens to be serving.
    for (std::size_t i = 0; i < sc_.access_points.size(); ++i) {
      double d = dist(node_.position, sc_.access_points[i].position);
      att_db_[i] = rssi_at(d, sc_.path_loss, sc_.fading, shadow_[i], moved, radio_rng_);
    }
    measured_speed_ = sc_.speed_kmph;
    if (sc_.noise.speed_sigma_kmph > 0)
      measured_speed_ = std::max(
          0.0, measured_speed_ + radio_rng_.normal(0.0, sc_.noise.speed_sigma_kmph));

    if (pending_ && pending_->completes_at <= now) complete_handover();

    // Serving-link readings follow any attach that landed this step.
    measured_distance_ = dist(node_.position, sc_.access_points[serving_].position);
    if (sc_.noise.distance_sigma_m > 0)
      measured_distance_ = std::max(
          0.0, measured_distance_ + radio_rng_.normal(0.0, sc_.noise.distance_sigma_m));
    interference_ = interference_level(node_.position, serving_, sc_.access_points,
                                       sc_.path_loss);

    RadioSample sample;
    sample.rssi_db = att_db_[serving_];
    sample.distance_m = measured_distance_;
    sample.speed_kmph = measured_speed_;
    sample.retransmissions = retrans_accum_;
    retrans_accum_ = 0;

    if (!pending_) {
      if (trigger_->observe(sample, now) == TriggerDecision::Handover) {
        result_.events.push_back({now, SimEvent::Kind::Trigger, serving_, 0});
        start_handover(now);
      }
    }

    // Traffic due in [now, window_end).
    while (static_cast<double>(mn_seq_) * sc_.traffic.mn_interval_s < window_end) {
      double sent_at = static_cast<double>(mn_seq_) * sc_.traffic.mn_interval_s;
      ++mn_seq_;
      send_packet(Direction::MnToCn, sent_at);
    }
    while (static_cast<double>(cn_seq_) * sc_.traffic.cn_interval_s < window_end) {
      double sent_at = static_cast<double>(cn_seq_) * sc_.traffic.cn_interval_s;
      ++cn_seq_;
      send_packet(Direction::CnToMn, sent_at);
    }
  }

  void start_handover(double now) {
    int best = -1;
    double best_att = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(sc_.access_points.size()); ++i) {
      if (i == serving_) continue;
      if (att_db_[i] > sc_.link.candidate_usable_db) continue;
      if (att_db_[i] < best_att) {
        best_att = att_db_[i];
        best = i;
      }
    }
    if (best < 0) {
      ++result_.metrics.failed_handovers;
      result_.events.push_back({now, SimEvent::Kind::HandoverFailed, serving_, 0});
      return;
    }
    double scan_s = event_rng_.uniform(sc_.scan.min_channel_time_s, sc_.scan.max_channel_time_s);
    PendingHandover p;
    p.target = best;
    p.completes_at = now + scan_s + sc_.handshake_latency_s;
    pending_ = p;
    result_.events.push_back({now, SimEvent::Kind::HandoverStart, best, p.completes_at});
  }

  void complete_handover() {
    const double at = pending_->completes_at;
    serving_ = pending_->target;
    pending_.reset();
    ++result_.metrics.handover_count;
    trigger_->on_attach(at, measured_speed_, travelled_since_attach_);
    travelled_since_attach_ = 0;
    result_.events.push_back({at, SimEvent::Kind::Attach, serving_, 0});

    if (!queued_.empty()) {
      // Deferred packets ride the fresh link at attach time.
      interference_ = interference_level(node_.position, serving_, sc_.access_points,
                                         sc_.path_loss);
      for (const QueuedPacket& q : queued_) {
        PacketRecord rec = deliver_over_air(q.direction, q.sent_at, at);
        result_.packets.push_back(rec);
      }
      queued_.clear();
    }
  }

  void send_packet(Direction direction, double sent_at) {
    if (pending_) {
      // The MN can buffer its own uplink while it scans; packets addressed
      // to it have nowhere to go unless the policy queues them network-side.
      bool queue = direction == Direction::MnToCn
                       ? sc_.link.mn_source_buffering ||
                             sc_.link.handover_packets == HandoverPacketPolicy::Queue
                       : sc_.link.handover_packets == HandoverPacketPolicy::Queue;
      if (queue) {
        queued_.push_back({direction, sent_at});
      } else {
        PacketRecord rec;
        rec.direction = direction;
        rec.sent_at = sent_at;
        rec.status = PacketRecord::Status::Lost;
        rec.size_bytes = sc_.traffic.packet_bytes;
        result_.packets.push_back(rec);
      }
      return;
    }
    result_.packets.push_back(deliver_over_air(direction, sent_at, sent_at));
  }

  // Attempts the air hop at `air_time` for a packet stamped `sent_at`.
  PacketRecord deliver_over_air(Direction direction, double sent_at, double air_time) {
    PacketRecord rec;
    rec.direction = direction;
    rec.sent_at = sent_at;
    rec.size_bytes = sc_.traffic.packet_bytes;

    double fep = frame_error_prob(att_db_[serving_], interference_, sc_.frame_error);
    // Collisions fail attempts independently of signal margin.
    double attempt_fail = 1.0 - (1.0 - fep) * (1.0 - sc_.link.collision_prob);
    bool delivered = false;
    int retries = sample_frame_retries(attempt_fail, sc_.frame_error.max_retries,
                                       event_rng_, &delivered);
    retrans_accum_ += retries;

    if (!delivered) {
      rec.status = PacketRecord::Status::Lost;
      return rec;
    }
    double true_distance = dist(node_.position, sc_.access_points[serving_].position);
    double delay_ms = sc_.link.base_wire_delay_ms +
                      sc_.link.air_delay_ms_per_100m * (true_distance / 100.0) +
                      sc_.link.retry_penalty_ms * retries;
    rec.delivered_at = air_time + delay_ms / 1000.0;
    rec.status = PacketRecord::Status::Delivered;
    return rec;
  }

  void finalize() {
    // Packets queued when the clock ran out never made it onto the air.
    for (const QueuedPacket& q : queued_) {
      PacketRecord rec;
      rec.direction = q.direction;
      rec.sent_at = q.sent_at;
      rec.status = PacketRecord::Status::InFlight;
      rec.size_bytes = sc_.traffic.packet_bytes;
      result_.packets.push_back(rec);
    }
    queued_.clear();

    for (PacketRecord& rec : result_.packets) {
      if (rec.status == PacketRecord::Status::Delivered &&
          rec.delivered_at > sc_.duration_s)
        rec.status = PacketRecord::Status::InFlight;
    }

    for (Direction direction : {Direction::MnToCn, Direction::CnToMn}) {
      DirectionMetrics& m = direction == Direction::MnToCn ? result_.metrics.mn
                                                           : result_.metrics.cn;
      double delay_sum = 0;
      for (const PacketRecord& rec : result_.packets) {
        if (rec.direction != direction) continue;
        ++m.sent;
        switch (rec.status) {
          case PacketRecord::Status::Delivered: {
            ++m.delivered;
            double delay_ms = (rec.delivered_at - rec.sent_at) * 1000.0;
            if (m.delivered == 1) {
              m.delay_min_ms = m.delay_max_ms = delay_ms;
            } else {
              m.delay_min_ms = std::min(m.delay_min_ms, delay_ms);
              m.delay_max_ms = std::max(m.delay_max_ms, delay_ms);
            }
            delay_sum += delay_ms;
            break;
          }
          case PacketRecord::Status::Lost: ++m.lost; break;
          case PacketRecord::Status::InFlight: ++m.in_flight; break;
        }
      }
      if (m.sent > 0) m.loss_pct = 100.0 * static_cast<double>(m.lost) / static_cast<double>(m.sent);
      if (m.delivered > 0) m.delay_mean_ms = delay_sum / static_cast<double>(m.delivered);
      m.throughput_kbps = static_cast<double>(m.delivered) * sc_.traffic.packet_bytes *
                          8.0 / sc_.duration_s / 1000.0;

      if (m.sent != m.delivered + m.lost + m.in_flight)
        throw std::logic_error("packet conservation violated at teardown");
    }
  }

  Scenario sc_;
  Rng mobility_rng_;
  Rng radio_rng_;
  Rng event_rng_;

  RunResult result_;
  std::unique_ptr<HandoverTrigger> trigger_;
  NodeState node_;
  int serving_ = 0;
  std::optional<PendingHandover> pending_;
  std::vector<ShadowingProcess> shadow_;
  std::vector<double> att_db_;
  double interference_ = 0;
  double measured_speed_ = 0;
  double measured_distance_ = 0;
  double travelled_since_attach_ = 0;
  int retrans_accum_ = 0;
  long mn_seq_ = 0;
  long cn_seq_ = 0;
  std::vector<QueuedPacket> queued_;
};

}  // namespace

RunResult run_scenario(const Scenario& scenario) {
  Simulation sim(scenario);
  return sim.run();
}

void write_packet_log(const std::string& path, const std::vector<PacketRecord>& packets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write packet log: " + path);
  out << "# wmsim-packet-log v1\n";
  for (const PacketRecord& rec : packets) {
    out << (rec.direction == Direction::MnToCn ? "MN2CN" : "CN2MN") << ' '
        << format_double(rec.sent_at) << ' ';
    switch (rec.status) {
      case PacketRecord::Status::Delivered: out << format_double(rec.delivered_at); break;
      case PacketRecord::Status::Lost: out << "LOST"; break;
      case PacketRecord::Status::InFlight:
        // Packets still in flight when the run ended keep their computed
        // arrival stamp when one exists.
        if (rec.delivered_at > 0)
          out << format_double(rec.delivered_at);
        else
          out << "INFLIGHT";
        break;
    }
    out << ' ' << rec.size_bytes << '\n';
  }
}

void write_event_log(const std::string& path, const std::vector<SimEvent>& events) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write event log: " + path);
  out << "# wmsim-event-log v1\n";
  for (const SimEvent& e : events) {
    out << format_double(e.t) << ' ';
    switch (e.kind) {
      case SimEvent::Kind::Trigger: out << "trigger serving=" << e.ap; break;
      case SimEvent::Kind::HandoverStart:
        out << "handover-start target=" << e.ap
            << " completes_at=" << format_double(e.aux);
        break;
      case SimEvent::Kind::HandoverFailed: out << "handover-failed serving=" << e.ap; break;
      case SimEvent::Kind::Attach: out << "attach ap=" << e.ap; break;
    }
    out << '\n';
  }
}

}  // namespace wmsim
