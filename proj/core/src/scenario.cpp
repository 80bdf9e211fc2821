#include "wmsim/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wmsim {

Scenario Scenario::defaults() {
  Scenario s;
  s.access_points = {
      {{37.5, 37.5}, 1},
      {{112.5, 37.5}, 6},
      {{37.5, 112.5}, 11},
      {{112.5, 112.5}, 1},
  };
  s.home_ap = 0;
  // Calibrated above the nominal 2 dB so instantaneous readings are noisy
  // enough to provoke the single-sample triggers (see README).
  s.fading.multipath_sigma_db = 3.0;
  s.fuzzy = FuzzyConfig::defaults();
  return s;
}

void Scenario::validate(std::vector<std::string>* warnings) const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };
  auto warn = [warnings](const std::string& msg) {
    if (warnings) warnings->push_back("scenario: " + msg);
  };

  if (area_width_m <= 0 || area_height_m <= 0) fail("area must have positive extent");
  if (access_points.empty()) fail("at least one access point required");
  if (access_points.size() < 2)
    warn("fewer than two access points: handovers can never complete");
  if (home_ap < 0 || home_ap >= static_cast<int>(access_points.size()))
    fail("home_ap out of range");
  for (std::size_t i = 0; i < access_points.size(); ++i) {
    const auto& ap = access_points[i];
    if (ap.position.x < 0 || ap.position.x > area_width_m || ap.position.y < 0 ||
        ap.position.y > area_height_m) {
      std::ostringstream msg;
      msg << "access point " << i << " lies outside the area";
      fail(msg.str());
    }
  }
  if (start_position) {
    if (start_position->x < 0 || start_position->x > area_width_m ||
        start_position->y < 0 || start_position->y > area_height_m)
      fail("start position lies outside the area");
  }
  if (speed_kmph < 0) fail("speed_kmph must be >= 0");
  if (duration_s <= 0) fail("duration_s must be > 0");

  if (traffic.mn_interval_s <= 0 || traffic.cn_interval_s <= 0)
    fail("traffic intervals must be > 0");
  if (traffic.packet_bytes <= 0) fail("packet_bytes must be > 0");

  if (path_loss.exponent <= 0) fail("path loss exponent must be > 0");
  if (path_loss.reference_distance_m <= 0) fail("reference_distance_m must be > 0");
  if (path_loss.tx_power_mw <= 0) fail("tx_power_mw must be > 0");
  if (path_loss.wavelength_m <= 0 || path_loss.frequency_hz <= 0)
    fail("wavelength and frequency must be > 0");
  constexpr double kSpeedOfLight = 299792458.0;
  double c_est = path_loss.wavelength_m * path_loss.frequency_hz;
  if (std::abs(c_est - kSpeedOfLight) / kSpeedOfLight > 0.01) {
    std::ostringstream msg;
    msg << "wavelength * frequency = " << c_est
        << " m/s differs from the speed of light by more than 1%";
    warn(msg.str());
  }

  if (fading.shadow_sigma_db < 0 || fading.multipath_sigma_db < 0 ||
      fading.shadow_decorrelation_m < 0)
    fail("fading parameters must be >= 0");
  if (frame_error.max_retries < 0) fail("max_retries must be >= 0");
  if (frame_error.slope_db <= 0) fail("frame error slope must be > 0");

  if (scan.min_channel_time_s < 0 || scan.max_channel_time_s < scan.min_channel_time_s)
    fail("need 0 <= min_channel_time_s <= max_channel_time_s");
  if (handshake_latency_s < 0) fail("handshake_latency_s must be >= 0");
  if (link.base_wire_delay_ms < 0 || link.air_delay_ms_per_100m < 0 ||
      link.retry_penalty_ms < 0)
    fail("link delay coefficients must be >= 0");
  if (link.collision_prob < 0 || link.collision_prob >= 1)
    fail("collision_prob must lie in [0, 1)");
  if (noise.speed_sigma_kmph < 0 || noise.distance_sigma_m < 0)
    fail("measurement noise sigmas must be >= 0");

  trigger.validate();
  fuzzy.validate();
}

}  // namespace wmsim
