#pragma once

#include "wmsim/rng.hpp"

namespace wmsim {

// Log-distance path loss with a free-space close-in reference. All signal
// levels in this library are attenuation magnitudes in dB: larger = weaker.
struct PathLossParams {
  double tx_power_mw = 50.0;
  double wavelength_m = 0.125;
  double frequency_hz = 2.4e9;
  double exponent = 2.0;          // beta
  double reference_distance_m = 1.0;  // d0, free-space loss applies at d0

  // 20*log10(4*pi*d0 / lambda)
  double reference_loss_db() const;
};

struct FadingParams {
  double shadow_sigma_db = 4.0;
  double multipath_sigma_db = 2.0;
  double shadow_decorrelation_m = 10.0;
};

// One radio observation per update interval, as consumed by the triggers.
struct RadioSample {
  double rssi_db = 0;       // attenuation incl. fading
  double distance_m = 0;    // to the serving access point
  double speed_kmph = 0;
  int retransmissions = 0;  // frame retries counted over the last interval
};

// Attenuation at distance d; d below the reference distance clamps to it.
double path_loss_db(double distance_m, const PathLossParams& p);

// Distance-correlated log-normal shadowing, one instance per radio link.
// advance() must be called once per step with the distance moved since the
// previous step; value() then holds the current shadow term in dB.
class ShadowingProcess {
 public:
  void advance(double moved_m, const FadingParams& f, Rng& rng);
  double value() const { return value_; }
  void reset() { initialized_ = false; value_ = 0; }

 private:
  double value_ = 0;
  bool initialized_ = false;
};

// Path loss plus correlated shadowing plus per-sample multipath jitter.
double rssi_at(double distance_m, const PathLossParams& p, const FadingParams& f,
               ShadowingProcess& shadow, double moved_m, Rng& rng);

struct FrameErrorParams {
  double knee_db = 86.0;   // attenuation where fep = 0.5 at zero interference
  double slope_db = 2.0;
  double interference_gain_db = 1.5;  // dB of margin lost per unit power ratio
  int max_retries = 7;
};

// Logistic in effective link margin; monotone in attenuation and interference.
double frame_error_prob(double rssi_db, double interference_level,
                        const FrameErrorParams& p);

// Retries of a single frame: up to max_retries repeats, each attempt failing
// independently with probability fep. Returns retries in [0, max_retries];
// *delivered (optional) reports whether any attempt got through.
int sample_frame_retries(double fep, int max_retries, Rng& rng, bool* delivered = nullptr);

// Total retransmissions across frames_in_interval frames.
int sample_retransmissions(double fep, int frames_in_interval, int max_retries, Rng& rng);

}  // namespace wmsim
