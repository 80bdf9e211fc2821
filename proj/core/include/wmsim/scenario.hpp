#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmsim/fuzzy.hpp"
#include "wmsim/radio.hpp"
#include "wmsim/trigger.hpp"

namespace wmsim {

struct Point {
  double x = 0;
  double y = 0;
};

struct AccessPoint {
  Point position;
  int channel = 1;
};

struct TrafficConfig {
  double mn_interval_s = 0.5;   // MN -> CN constant bit rate
  double cn_interval_s = 0.08;  // CN -> MN constant bit rate
  int packet_bytes = 1000;
};

struct ScanConfig {
  double min_channel_time_s = 1.0;
  double max_channel_time_s = 3.0;
};

enum class HandoverPacketPolicy { Lost, Queue };

// End-to-end delivery cost model for one packet crossing the air link.
struct LinkModelConfig {
  double base_wire_delay_ms = 5.0;
  double air_delay_ms_per_100m = 2.0;
  double retry_penalty_ms = 2.0;  // per retransmission, airtime + backoff
  // Background per-attempt frame failure (collisions); independent of the
  // signal-margin error probability and invisible to RSSI readings.
  double collision_prob = 0.15;
  double candidate_usable_db = 95.0;  // scan ignores APs attenuated past this
  // Applies to network-side (CN -> MN) packets while a handover is pending.
  HandoverPacketPolicy handover_packets = HandoverPacketPolicy::Lost;
  // The MN buffers its own uplink while scanning instead of dropping it.
  bool mn_source_buffering = true;
};

struct MeasurementNoise {
  double speed_sigma_kmph = 0.0;
  double distance_sigma_m = 0.0;
};

struct Scenario {
  double area_width_m = 150.0;
  double area_height_m = 150.0;
  std::vector<AccessPoint> access_points;
  int home_ap = 0;
  // Where the node spawns; defaults to the home AP position.
  std::optional<Point> start_position;
  double speed_kmph = 10.0;
  double duration_s = 600.0;
  std::uint64_t seed = 1;

  TrafficConfig traffic;
  PathLossParams path_loss;
  FadingParams fading;
  FrameErrorParams frame_error;
  MeasurementNoise noise;

  TriggerAlgorithm algorithm = TriggerAlgorithm::FlTrend;
  TriggerConfig trigger;
  FuzzyConfig fuzzy;

  ScanConfig scan;
  double handshake_latency_s = 0.1;
  LinkModelConfig link;

  // Fully populated baseline: the published simulation parameters plus the
  // calibrated four-AP desk layout documented in the README.
  static Scenario defaults();

  // Throws std::invalid_argument on hard errors; appends soft findings
  // (degenerate AP count, off-nominal wavelength/frequency pairs) to warnings.
  void validate(std::vector<std::string>* warnings = nullptr) const;
};

// JSON round-trip. load_scenario applies file keys on top of defaults().
Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json_text(const Scenario& s, int indent = 2);

}  // namespace wmsim
