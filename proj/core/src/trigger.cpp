#include "wmsim/trigger.hpp"

#include <algorithm>
#include <stdexcept>

namespace wmsim {

const char* to_string(TriggerAlgorithm a) {
  switch (a) {
    case TriggerAlgorithm::FlTrend: return "fl-trend";
    case TriggerAlgorithm::RssiThreshold: return "rssi-threshold";
    case TriggerAlgorithm::ChangeOfRssi: return "change-of-rssi";
    case TriggerAlgorithm::FrThreshold: return "fr-threshold";
  }
  return "?";
}

TriggerAlgorithm trigger_algorithm_from_string(const std::string& s) {
  if (s == "fl-trend") return TriggerAlgorithm::FlTrend;
  if (s == "rssi-threshold") return TriggerAlgorithm::RssiThreshold;
  if (s == "change-of-rssi") return TriggerAlgorithm::ChangeOfRssi;
  if (s == "fr-threshold") return TriggerAlgorithm::FrThreshold;
  throw std::invalid_argument("unknown trigger algorithm: " + s);
}

void TriggerConfig::validate() const {
  if (update_interval_s <= 0)
    throw std::invalid_argument("trigger: update_interval_s must be > 0");
  if (window_size < 1) throw std::invalid_argument("trigger: window_size must be >= 1");
  if (threshold_count < 1 || threshold_count > window_size)
    throw std::invalid_argument("trigger: need 0 < threshold_count <= window_size");
  if (change_window < 2)
    throw std::invalid_argument("trigger: change_window must be >= 2");
  if (fr_threshold < 1) throw std::invalid_argument("trigger: fr_threshold must be >= 1");
  if (suppression_distance_m < 0 || suppression_max_s < 0 || baseline_blackout_s < 0)
    throw std::invalid_argument("trigger: suppression fields must be >= 0");
}

double compute_suppression_s(double speed_kmph, double distance_m, double max_s) {
  if (speed_kmph <= 0) return max_s;
  double speed_mps = speed_kmph / 3.6;
  return std::min(distance_m / speed_mps, max_s);
}

double compute_suppression_s(double speed_kmph, const TriggerConfig& cfg) {
  return compute_suppression_s(speed_kmph, cfg.suppression_distance_m,
                               cfg.suppression_max_s);
}

bool SampleWindow::push(double v, double* evicted) {
  if (capacity_ <= 0) return false;
  if (static_cast<int>(values_.size()) < capacity_) {
    values_.push_back(v);
    return false;
  }
  if (evicted) *evicted = values_[head_];
  values_[head_] = v;
  head_ = (head_ + 1) % capacity_;
  return true;
}

void SampleWindow::clear() {
  values_.clear();
  head_ = 0;
}

double SampleWindow::oldest() const {
  return full() ? values_[head_] : values_.front();
}

double SampleWindow::newest() const {
  if (!full()) return values_.back();
  return values_[(head_ + capacity_ - 1) % capacity_];
}

FlTrendTrigger::FlTrendTrigger(const TriggerConfig& cfg, const FuzzyConfig& fuzzy)
    : cfg_(cfg), fuzzy_(fuzzy), window_(cfg.window_size) {
  cfg_.validate();
  fuzzy_.validate();
}

TriggerDecision FlTrendTrigger::observe(const RadioSample& sample, double now_s) {
  if (now_s < suppression_until_) return TriggerDecision::Hold;

  InferenceResult inf = infer(
      InputVector{sample.rssi_db, sample.speed_kmph, sample.distance_m}, fuzzy_);

  double evicted = 0;
  bool had_eviction = window_.push(inf.score, &evicted);
  if (inf.score > cfg_.score_cutoff) ++count_above_;
  if (had_eviction && evicted > cfg_.score_cutoff) --count_above_;

  if (window_.full()) {
    if (cfg_.trend_mode == TrendMode::Count) {
      if (count_above_ >= cfg_.threshold_count) return TriggerDecision::Handover;
    } else {
      double sum = 0;
      for (double s : window_.values()) sum += s;
      if (sum / window_.size() >= static_cast<double>(cfg_.threshold_count))
        return TriggerDecision::Handover;
    }
  }
  ++iteration_;
  return TriggerDecision::Hold;
}

void FlTrendTrigger::on_attach(double now_s, double speed_kmph, double travelled_m) {
  window_.clear();
  count_above_ = 0;
  iteration_ = 0;
  double distance = cfg_.suppression_mode == SuppressionDistanceMode::Fixed
                        ? cfg_.suppression_distance_m
                        : travelled_m;
  suppression_until_ =
      now_s + compute_suppression_s(speed_kmph, distance, cfg_.suppression_max_s);
}

TriggerDecision RssiThresholdTrigger::observe(const RadioSample& sample, double now_s) {
  if (now_s < blackout_until_) return TriggerDecision::Hold;
  return sample.rssi_db >= cfg_.rssi_threshold_db ? TriggerDecision::Handover
                                                  : TriggerDecision::Hold;
}

TriggerDecision ChangeOfRssiTrigger::observe(const RadioSample& sample, double now_s) {
  window_.push(sample.rssi_db);
  if (now_s < blackout_until_) return TriggerDecision::Hold;
  if (!window_.full()) return TriggerDecision::Hold;
  // Positive delta = the link degraded across the window.
  return window_.newest() - window_.oldest() >= cfg_.change_delta_db
             ? TriggerDecision::Handover
             : TriggerDecision::Hold;
}

TriggerDecision FrThresholdTrigger::observe(const RadioSample& sample, double now_s) {
  if (now_s < blackout_until_) return TriggerDecision::Hold;
  return sample.retransmissions >= cfg_.fr_threshold ? TriggerDecision::Handover
                                                     : TriggerDecision::Hold;
}

std::unique_ptr<HandoverTrigger> make_trigger(TriggerAlgorithm algorithm,
                                              const TriggerConfig& cfg,
                                              const FuzzyConfig& fuzzy) {
  cfg.validate();
  switch (algorithm) {
    case TriggerAlgorithm::FlTrend:
      return std::make_unique<FlTrendTrigger>(cfg, fuzzy);
    case TriggerAlgorithm::RssiThreshold:
      return std::make_unique<RssiThresholdTrigger>(cfg);
    case TriggerAlgorithm::ChangeOfRssi:
      return std::make_unique<ChangeOfRssiTrigger>(cfg);
    case TriggerAlgorithm::FrThreshold:
      return std::make_unique<FrThresholdTrigger>(cfg);
  }
  throw std::logic_error("unreachable");
}

}  // namespace wmsim
