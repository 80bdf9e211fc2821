#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wmsim/scenario.hpp"

namespace wmsim {

enum class Direction { MnToCn, CnToMn };

struct PacketRecord {
  enum class Status { Delivered, Lost, InFlight };
  Direction direction = Direction::MnToCn;
  double sent_at = 0;
  double delivered_at = 0;  // meaningful unless status == Lost
  Status status = Status::Delivered;
  int size_bytes = 0;
};

struct SimEvent {
  enum class Kind { Trigger, HandoverStart, HandoverFailed, Attach };
  double t = 0;
  Kind kind = Kind::Trigger;
  int ap = -1;      // target for HandoverStart/Attach, serving otherwise
  double aux = 0;   // HandoverStart: completes_at; Attach: suppression window end
};

struct DirectionMetrics {
  long sent = 0;
  long delivered = 0;
  long lost = 0;
  long in_flight = 0;
  double loss_pct = 0;
  double throughput_kbps = 0;
  double delay_min_ms = 0;
  double delay_max_ms = 0;
  double delay_mean_ms = 0;
};

struct MetricsReport {
  long handover_count = 0;
  long failed_handovers = 0;
  DirectionMetrics mn;  // the MN -> CN flow
  DirectionMetrics cn;  // the CN -> MN flow
};

struct RunResult {
  MetricsReport metrics;
  std::vector<PacketRecord> packets;
  std::vector<SimEvent> events;
  std::vector<std::string> warnings;
};

// Random-waypoint mobility state. The node walks toward waypoint at
// speed_mps; reaching it draws a fresh uniform waypoint.
struct NodeState {
  Point position;
  Point waypoint;
  double speed_mps = 0;
};

// Advances one step of dt seconds; returns the distance actually moved.
// A node standing on its waypoint redraws the waypoint and does not move
// during that step.
double random_waypoint_step(NodeState& node, double area_width_m, double area_height_m,
                            double dt, Rng& rng);

// Sum over co-channel non-serving APs of received power relative to the
// serving AP, from deterministic path loss.
double interference_level(const Point& node, int serving_ap,
                          const std::vector<AccessPoint>& aps, const PathLossParams& p);

// Runs one scenario to completion. Deterministic in (scenario, scenario.seed).
RunResult run_scenario(const Scenario& scenario);

// Versioned line-oriented debug outputs.
void write_packet_log(const std::string& path, const std::vector<PacketRecord>& packets);
void write_event_log(const std::string& path, const std::vector<SimEvent>& events);

}  // namespace wmsim
