#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wmsim/fuzzy.hpp"
#include "wmsim/radio.hpp"

namespace wmsim {

enum class TriggerDecision { Hold, Handover };

enum class TriggerAlgorithm { FlTrend, RssiThreshold, ChangeOfRssi, FrThreshold };

const char* to_string(TriggerAlgorithm a);
TriggerAlgorithm trigger_algorithm_from_string(const std::string& s);

// How the trend window converts into a decision: Count requires at least
// threshold_count of the stored scores above score_cutoff; Magnitude requires
// the window mean to reach threshold_count on the score scale.
enum class TrendMode { Count, Magnitude };

// Whether the post-attach suppression delay divides the fixed configured
// distance by speed, or the distance actually travelled since the last attach.
enum class SuppressionDistanceMode { Fixed, Travelled };

struct TriggerConfig {
  double update_interval_s = 0.1;
  int window_size = 10;
  int threshold_count = 7;
  double score_cutoff = 0.0;
  double rssi_threshold_db = 75.0;
  int change_window = 10;
  double change_delta_db = 10.0;
  int fr_threshold = 3;
  double suppression_distance_m = 100.0;
  double suppression_max_s = 120.0;
  SuppressionDistanceMode suppression_mode = SuppressionDistanceMode::Fixed;
  TrendMode trend_mode = TrendMode::Count;
  // Short post-attach blackout shared by the three baselines; covers the
  // handshake settling only, never the trend suppression delay.
  double baseline_blackout_s = 0.1;

  void validate() const;
};

// W = distance / speed, capped. A stationary node gets the cap.
double compute_suppression_s(double speed_kmph, double distance_m, double max_s);
double compute_suppression_s(double speed_kmph, const TriggerConfig& cfg);

// Fixed-capacity ring of the most recent values, oldest evicted first.
class SampleWindow {
 public:
  explicit SampleWindow(int capacity = 0) : capacity_(capacity) {}

  // Returns the evicted value through *evicted when the ring was full.
  bool push(double v, double* evicted = nullptr);
  bool full() const { return static_cast<int>(values_.size()) == capacity_ && capacity_ > 0; }
  int size() const { return static_cast<int>(values_.size()); }
  int capacity() const { return capacity_; }
  void clear();
  double oldest() const;
  double newest() const;
  // Snapshot in no particular order; suits recounts and sums.
  std::vector<double> values() const { return values_; }

 private:
  int capacity_ = 0;
  int head_ = 0;  // index of the oldest entry once full
  std::vector<double> values_;
};

// Streaming decision interface shared by all four algorithms. One instance
// drives one mobile node; feed one RadioSample per update interval.
class HandoverTrigger {
 public:
  virtual ~HandoverTrigger() = default;
  virtual TriggerDecision observe(const RadioSample& sample, double now_s) = 0;
  // Called when a handover handshake completes. travelled_m is the distance
  // covered since the previous attach (used by Travelled suppression mode).
  virtual void on_attach(double now_s, double speed_kmph, double travelled_m) = 0;
  virtual TriggerAlgorithm algorithm() const = 0;
};

class FlTrendTrigger final : public HandoverTrigger {
 public:
  FlTrendTrigger(const TriggerConfig& cfg, const FuzzyConfig& fuzzy);

  TriggerDecision observe(const RadioSample& sample, double now_s) override;
  void on_attach(double now_s, double speed_kmph, double travelled_m) override;
  TriggerAlgorithm algorithm() const override { return TriggerAlgorithm::FlTrend; }

  bool suppressed(double now_s) const { return now_s < suppression_until_; }
  double suppression_until() const { return suppression_until_; }
  long iteration() const { return iteration_; }
  int count_above_cutoff() const { return count_above_; }
  const SampleWindow& window() const { return window_; }

 private:
  TriggerConfig cfg_;
  FuzzyConfig fuzzy_;
  SampleWindow window_;
  int count_above_ = 0;  // incrementally maintained count of scores > cutoff
  long iteration_ = 0;
  double suppression_until_ = 0;
};

class RssiThresholdTrigger final : public HandoverTrigger {
 public:
  explicit RssiThresholdTrigger(const TriggerConfig& cfg) : cfg_(cfg) {}
  TriggerDecision observe(const RadioSample& sample, double now_s) override;
  void on_attach(double now_s, double, double) override {
    blackout_until_ = now_s + cfg_.baseline_blackout_s;
  }
  TriggerAlgorithm algorithm() const override { return TriggerAlgorithm::RssiThreshold; }

 private:
  TriggerConfig cfg_;
  double blackout_until_ = 0;
};

class ChangeOfRssiTrigger final : public HandoverTrigger {
 public:
  explicit ChangeOfRssiTrigger(const TriggerConfig& cfg)
      : cfg_(cfg), window_(cfg.change_window) {}
  TriggerDecision observe(const RadioSample& sample, double now_s) override;
  void on_attach(double now_s, double, double) override {
    window_.clear();
    blackout_until_ = now_s + cfg_.baseline_blackout_s;
  }
  TriggerAlgorithm algorithm() const override { return TriggerAlgorithm::ChangeOfRssi; }

 private:
  TriggerConfig cfg_;
  SampleWindow window_;
  double blackout_until_ = 0;
};

class FrThresholdTrigger final : public HandoverTrigger {
 public:
  explicit FrThresholdTrigger(const TriggerConfig& cfg) : cfg_(cfg) {}
  TriggerDecision observe(const RadioSample& sample, double now_s) override;
  void on_attach(double now_s, double, double) override {
    blackout_until_ = now_s + cfg_.baseline_blackout_s;
  }
  TriggerAlgorithm algorithm() const override { return TriggerAlgorithm::FrThreshold; }

 private:
  TriggerConfig cfg_;
  double blackout_until_ = 0;
};

std::unique_ptr<HandoverTrigger> make_trigger(TriggerAlgorithm algorithm,
                                              const TriggerConfig& cfg,
                                              const FuzzyConfig& fuzzy);

}  // namespace wmsim
