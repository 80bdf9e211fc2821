#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "wmsim/sim.hpp"

namespace wmsim {

// speed x algorithm x seed batch mirroring the evaluation protocol:
// every combination runs once, seed-averaged rows are appended per cell.
struct SweepSpec {
  std::vector<double> speeds_kmph = {5, 10, 15, 20, 25, 30};
  std::vector<TriggerAlgorithm> algorithms = {
      TriggerAlgorithm::FlTrend, TriggerAlgorithm::RssiThreshold,
      TriggerAlgorithm::ChangeOfRssi, TriggerAlgorithm::FrThreshold};
  int seed_count = 10;
  Scenario base_scenario;
  int max_workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

constexpr std::size_t kMetricCount = 11;

// CSV column names, fixed. The first three are row coordinates, the rest the
// metric columns in report order.
extern const std::array<const char*, kMetricCount + 3> kCsvColumns;

std::array<double, kMetricCount> metric_values(const MetricsReport& m);

struct SweepRow {
  TriggerAlgorithm algorithm = TriggerAlgorithm::FlTrend;
  double speed_kmph = 0;
  int seed_index = 0;
  MetricsReport metrics;
};

struct AverageRow {
  TriggerAlgorithm algorithm = TriggerAlgorithm::FlTrend;
  double speed_kmph = 0;
  std::array<double, kMetricCount> values{};
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;          // ordered by (algorithm, speed, seed)
  std::vector<AverageRow> averages;    // ordered by (algorithm, speed)

  const AverageRow& average_for(TriggerAlgorithm algorithm, double speed_kmph) const;
};

// The effective per-run scenario: base with speed/algorithm applied and the
// run seed derived from (master seed, speed, seed index). The same derived
// seed is shared by all algorithms of a (speed, seed) pair so that mobility
// and fading streams stay paired across the comparison; the algorithm id
// only enters the run-private event stream.
Scenario scenario_for_run(const SweepSpec& spec, TriggerAlgorithm algorithm,
                          double speed_kmph, int seed_index);

// Observer runs under a lock in completion order; the packet and event logs
// of each run are only alive for the duration of the call.
using RunObserver = std::function<void(const SweepRow&, const RunResult&)>;

SweepResult run_sweep(const SweepSpec& spec, const RunObserver& observer = {});

// CSV with the pinned header; written atomically (temp file + rename).
void emit_csv(const SweepResult& result, const std::string& path);

struct CsvRow {
  std::string algorithm;
  double speed_kmph = 0;
  std::string seed;  // seed index digits, or "AVG"
  std::array<double, kMetricCount> values{};
};
std::vector<CsvRow> parse_csv(const std::string& path);

// One two-column file per (metric, algorithm) under dir, speed ascending.
void emit_plot_series(const SweepResult& result, const std::string& dir);

// JSONL echo of every run's effective configuration.
void emit_run_configs(const SweepResult& result, const std::string& path);

}  // namespace wmsim
