#include "wmsim/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wmsim {

namespace fs = std::filesystem;

const std::array<const char*, kMetricCount + 3> kCsvColumns = {
    "algorithm",       "speed_kmph",      "seed",
    "handovers",       "mn_loss_pct",     "cn_loss_pct",
    "mn_tput_kbps",    "cn_tput_kbps",    "mn_delay_min_ms",
    "mn_delay_max_ms", "mn_delay_mean_ms", "cn_delay_min_ms",
    "cn_delay_max_ms", "cn_delay_mean_ms"};

std::array<double, kMetricCount> metric_values(const MetricsReport& m) {
  return {static_cast<double>(m.handover_count),
          m.mn.loss_pct,
          m.cn.loss_pct,
          m.mn.throughput_kbps,
          m.cn.throughput_kbps,
          m.mn.delay_min_ms,
          m.mn.delay_max_ms,
          m.mn.delay_mean_ms,
          m.cn.delay_min_ms,
          m.cn.delay_max_ms,
          m.cn.delay_mean_ms};
}

void SweepSpec::validate() const {
  if (speeds_kmph.empty()) throw std::invalid_argument("sweep: speeds list is empty");
  if (algorithms.empty()) throw std::invalid_argument("sweep: algorithms list is empty");
  if (seed_count < 1) throw std::invalid_argument("sweep: seed_count must be >= 1");
  base_scenario.validate();
}

const AverageRow& SweepResult::average_for(TriggerAlgorithm algorithm,
                                           double speed_kmph) const {
  for (const AverageRow& row : averages)
    if (row.algorithm == algorithm && row.speed_kmph == speed_kmph) return row;
  throw std::out_of_range("sweep: no average row for that (algorithm, speed)");
}

Scenario scenario_for_run(const SweepSpec& spec, TriggerAlgorithm algorithm,
                          double speed_kmph, int seed_index) {
  Scenario sc = spec.base_scenario;
  sc.algorithm = algorithm;
  sc.speed_kmph = speed_kmph;
  sc.seed = derive_seed(spec.base_scenario.seed, "sweep-run", speed_kmph, seed_index);
  return sc;
}

SweepResult run_sweep(const SweepSpec& spec, const RunObserver& observer) {
  spec.validate();

  SweepResult result;
  result.spec = spec;

  struct RunCoord {
    TriggerAlgorithm algorithm;
    double speed_kmph;
    int seed_index;
  };
  std::vector<RunCoord> coords;
  for (TriggerAlgorithm algorithm : spec.algorithms)
    for (double speed : spec.speeds_kmph)
      for (int seed = 0; seed < spec.seed_count; ++seed)
        coords.push_back({algorithm, speed, seed});

  result.rows.resize(coords.size());

  std::atomic<std::size_t> next{0};
  std::mutex observer_mutex;
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= coords.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error.empty()) return;
      }
      const RunCoord& c = coords[i];
      try {
        Scenario sc = scenario_for_run(spec, c.algorithm, c.speed_kmph, c.seed_index);
        RunResult run = run_scenario(sc);
        SweepRow& row = result.rows[i];
        row.algorithm = c.algorithm;
        row.speed_kmph = c.speed_kmph;
        row.seed_index = c.seed_index;
        row.metrics = run.metrics;
        if (observer) {
          std::lock_guard<std::mutex> lock(observer_mutex);
          observer(row, run);
        }
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "sweep run failed (algorithm=" << to_string(c.algorithm)
            << " speed=" << c.speed_kmph << " seed=" << c.seed_index
            << "): " << e.what();
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = msg.str();
        return;
      }
    }
  };

  unsigned workers = spec.max_workers > 0
                         ? static_cast<unsigned>(spec.max_workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, coords.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (!first_error.empty()) throw std::runtime_error(first_error);

  for (TriggerAlgorithm algorithm : spec.algorithms) {
    for (double speed : spec.speeds_kmph) {
      AverageRow avg;
      avg.algorithm = algorithm;
      avg.speed_kmph = speed;
      int n = 0;
      for (const SweepRow& row : result.rows) {
        if (row.algorithm != algorithm || row.speed_kmph != speed) continue;
        auto values = metric_values(row.metrics);
        for (std::size_t k = 0; k < kMetricCount; ++k) avg.values[k] += values[k];
        ++n;
      }
      for (double& v : avg.values) v /= n;
      result.averages.push_back(avg);
    }
  }
  return result;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

class AtomicFile {
 public:
  explicit AtomicFile(const std::string& path)
      : path_(path), tmp_(path + ".tmp"), out_(tmp_, std::ios::binary | std::ios::trunc) {
    if (!out_) {
      std::error_code ec;
      fs::remove(tmp_, ec);
      throw std::runtime_error("cannot write " + path);
    }
  }
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  std::ofstream& stream() { return out_; }
  void commit() {
    out_.flush();
    if (!out_) {
      std::error_code ec;
      out_.close();
      fs::remove(tmp_, ec);
      throw std::runtime_error("failed while writing " + path_);
    }
    out_.close();
    fs::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

void write_csv_values(std::ofstream& out, const std::array<double, kMetricCount>& values) {
  for (double v : values) out << ',' << format_double(v);
  out << '\n';
}

}  // namespace

void emit_csv(const SweepResult& result, const std::string& path) {
  AtomicFile file(path);
  std::ofstream& out = file.stream();

  for (std::size_t i = 0; i < kCsvColumns.size(); ++i)
    out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';

  for (TriggerAlgorithm algorithm : result.spec.algorithms) {
    for (double speed : result.spec.speeds_kmph) {
      for (const SweepRow& row : result.rows) {
        if (row.algorithm != algorithm || row.speed_kmph != speed) continue;
        out << to_string(algorithm) << ',' << format_double(speed) << ','
            << row.seed_index;
        write_csv_values(out, metric_values(row.metrics));
      }
      const AverageRow& avg = result.average_for(algorithm, speed);
      out << to_string(algorithm) << ',' << format_double(speed) << ",AVG";
      write_csv_values(out, avg.values);
    }
  }
  file.commit();
}

std::vector<CsvRow> parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);

  std::ostringstream expected;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i)
    expected << (i ? "," : "") << kCsvColumns[i];
  if (line != expected.str())
    throw std::runtime_error("unexpected csv header in " + path);

  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != kCsvColumns.size())
      throw std::runtime_error("bad csv row: " + line);
    CsvRow row;
    row.algorithm = fields[0];
    row.speed_kmph = std::stod(fields[1]);
    row.seed = fields[2];
    for (std::size_t k = 0; k < kMetricCount; ++k) row.values[k] = std::stod(fields[3 + k]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_plot_series(const SweepResult& result, const std::string& dir) {
  fs::create_directories(dir);
  for (std::size_t k = 0; k < kMetricCount; ++k) {
    const char* metric = kCsvColumns[3 + k];
    for (TriggerAlgorithm algorithm : result.spec.algorithms) {
      std::string path =
          (fs::path(dir) / (std::string(metric) + "__" + to_string(algorithm) + ".dat"))
              .string();
      AtomicFile file(path);
      file.stream() << "# wmsim-plot-series v1 metric=" << metric
                    << " algorithm=" << to_string(algorithm) << '\n';
      for (double speed : result.spec.speeds_kmph) {
        const AverageRow& avg = result.average_for(algorithm, speed);
        file.stream() << format_double(speed) << ' ' << format_double(avg.values[k])
                      << '\n';
      }
      file.commit();
    }
  }
}

void emit_run_configs(const SweepResult& result, const std::string& path) {
  AtomicFile file(path);
  for (const SweepRow& row : result.rows) {
    Scenario sc =
        scenario_for_run(result.spec, row.algorithm, row.speed_kmph, row.seed_index);
    std::string scenario_json = scenario_to_json_text(sc, -1);
    while (!scenario_json.empty() &&
           (scenario_json.back() == '\n' || scenario_json.back() == ' '))
      scenario_json.pop_back();
    file.stream() << "{\"algorithm\":\"" << to_string(row.algorithm)
                  << "\",\"speed_kmph\":" << format_double(row.speed_kmph)
                  << ",\"seed_index\":" << row.seed_index
                  << ",\"scenario\":" << scenario_json << "}\n";
  }
  file.commit();
}

}  // namespace wmsim
