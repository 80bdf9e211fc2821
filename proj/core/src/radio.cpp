#include "wmsim/radio.hpp"

#include <algorithm>
#include <cmath>

namespace wmsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double PathLossParams::reference_loss_db() const {
  return 20.0 * std::log10(4.0 * kPi * reference_distance_m / wavelength_m);
}

double path_loss_db(double distance_m, const PathLossParams& p) {
  double d = std::max(distance_m, p.reference_distance_m);
  return p.reference_loss_db() +
         10.0 * p.exponent * std::log10(d / p.reference_distance_m);
}

void ShadowingProcess::advance(double moved_m, const FadingParams& f, Rng& rng) {
  if (!initialized_) {
    value_ = rng.normal(0.0, 1.0) * f.shadow_sigma_db;
    initialized_ = true;
    return;
  }
  double rho;
  if (moved_m <= 0) {
    rho = 1.0;
  } else if (f.shadow_decorrelation_m <= 0) {
    rho = 0.0;
  } else {
    rho = std::exp(-moved_m / f.shadow_decorrelation_m);
  }
  // Gudmundson update: stationary N(0, sigma^2) marginal at every step.
  double innovation =
      rng.normal(0.0, 1.0) * f.shadow_sigma_db * std::sqrt(1.0 - rho * rho);
  value_ = rho * value_ + innovation;
}

double rssi_at(double distance_m, const PathLossParams& p, const FadingParams& f,
               ShadowingProcess& shadow, double moved_m, Rng& rng) {
  shadow.advance(moved_m, f, rng);
  // Draw even at sigma 0 so the stream position does not depend on config.
  double multipath = rng.normal(0.0, 1.0) * f.multipath_sigma_db;
  return path_loss_db(distance_m, p) + shadow.value() + multipath;
}

double frame_error_prob(double rssi_db, double interference_level,
                        const FrameErrorParams& p) {
  double margin = rssi_db + p.interference_gain_db * interference_level - p.knee_db;
  double slope = std::max(p.slope_db, 1e-9);
  return 1.0 / (1.0 + std::exp(-margin / slope));
}

int sample_frame_retries(double fep, int max_retries, Rng& rng, bool* delivered) {
  int retries = 0;
  bool ok = false;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    if (!rng.bernoulli(fep)) {
      ok = true;
      break;
    }
    if (attempt < max_retries) ++retries;
  }
  // retries == max_retries with all attempts failed means the frame is gone.
  if (!ok) retries = max_retries;
  if (delivered) *delivered = ok;
  return retries;
}

int sample_retransmissions(double fep, int frames_in_interval, int max_retries, Rng& rng) {
  int total = 0;
  for (int i = 0; i < frames_in_interval; ++i)
    total += sample_frame_retries(fep, max_retries, rng);
  return total;
}

}  // namespace wmsim
