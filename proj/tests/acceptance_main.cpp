// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 6-8 share one full default sweep, so the whole binary
// stays well under the five-minute budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wmsim/sim.hpp"
#include "wmsim/sweep.hpp"

using namespace wmsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

void criterion(int id, const std::string& name, const std::function<bool()>& body) {
  g_notes.clear();
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::printf("[%s] criterion %d: %s (%lld ms)\n", ok ? "PASS" : "FAIL", id,
              name.c_str(), static_cast<long long>(ms));
  if (!error.empty()) std::printf("       exception: %s\n", error.c_str());
  for (const std::string& n : g_notes) std::printf("       %s\n", n.c_str());
  if (!ok) ++g_failures;
}

bool check(bool cond, const std::string& what) {
  if (!cond) note("failed: " + what);
  return cond;
}

// Crisp representatives under the default membership config.
double crisp_rssi(FuzzyLabel l) {
  return l == FuzzyLabel::High ? 50.0 : l == FuzzyLabel::Medium ? 75.0 : 100.0;
}
double crisp_speed(FuzzyLabel l) {
  return l == FuzzyLabel::Low ? 5.0 : l == FuzzyLabel::Medium ? 15.0 : 25.0;
}
double crisp_distance(FuzzyLabel l) {
  return l == FuzzyLabel::Low ? 20.0 : l == FuzzyLabel::Medium ? 55.0 : 90.0;
}

// ---- criterion 1 -----------------------------------------------------------

bool rule_matrix_conformance(const FuzzyConfig& cfg) {
  struct Row {
    const char* rssi;
    const char* speed;
    const char* distance;
    const char* output;
  };
  static const Row kExpected[27] = {
      {"High", "High", "High", "NH1"},    {"High", "Medium", "High", "NH2"},
      {"High", "Low", "High", "NH3"},     {"Medium", "High", "High", "H1"},
      {"Medium", "Medium", "High", "H2"}, {"Medium", "Low", "High", "H3"},
      {"Low", "High", "High", "H4"},      {"Low", "Medium", "High", "H5"},
      {"Low", "Low", "High", "H6"},       {"High", "High", "Medium", "NH4"},
      {"High", "Medium", "Medium", "NH5"},{"High", "Low", "Medium", "NH6"},
      {"Medium", "High", "Medium", "H7"}, {"Medium", "Medium", "Medium", "H8"},
      {"Medium", "Low", "Medium", "NH7"}, {"Low", "High", "Medium", "H9"},
      {"Low", "Medium", "Medium", "H10"}, {"Low", "Low", "Medium", "H11"},
      {"High", "High", "Low", "NH8"},     {"High", "Medium", "Low", "NH9"},
      {"High", "Low", "Low", "NH10"},     {"Medium", "High", "Low", "NH11"},
      {"Medium", "Medium", "Low", "NH12"},{"Medium", "Low", "Low", "NH13"},
      {"Low", "High", "Low", "H12"},      {"Low", "Medium", "Low", "H13"},
      {"Low", "Low", "Low", "H14"},
  };

  bool ok = true;
  for (int row = 0; row < 27; ++row) {
    const Row& e = kExpected[row];
    FuzzyLabel r = fuzzy_label_from_string(e.rssi);
    FuzzyLabel s = fuzzy_label_from_string(e.speed);
    FuzzyLabel d = fuzzy_label_from_string(e.distance);
    RuleOutput expected = RuleOutput::parse(e.output);

    InferenceResult res =
        infer(InputVector{crisp_rssi(r), crisp_speed(s), crisp_distance(d)}, cfg);

    // Exactly one rule fires; its declared antecedent and output must match.
    int fired = -1;
    for (int i = 0; i < 27; ++i) {
      if (res.firing[i] > 0.999) {
        ok &= check(fired == -1, "more than one rule fully fired on a crisp input");
        fired = i;
      } else {
        ok &= check(res.firing[i] < 1e-12, "stray partial activation on a crisp input");
      }
    }
    if (!check(fired >= 0, "no rule fired for table row " + std::to_string(row + 1))) {
      ok = false;
      continue;
    }
    const Rule& rule = cfg.rules[fired];
    ok &= check(rule.rssi == r && rule.speed == s && rule.distance == d,
                "fired rule antecedent mismatch at row " + std::to_string(row + 1));
    ok &= check(rule.output == expected,
                "row " + std::to_string(row + 1) + " expected " + e.output + " got " +
                    rule.output.to_string());
    double expected_score = expected.cls == RuleClass::Handover ? 100.0 : -100.0;
    ok &= check(std::abs(res.score - expected_score) < 1e-9,
                "crisp score not saturated at row " + std::to_string(row + 1));
  }
  return ok;
}

// ---- criterion 2 -----------------------------------------------------------

bool defuzzification_properties() {
  Rng rng(20240);
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    double nh = rng.uniform(0, 8);
    double h = rng.uniform(0, 8);
    if (nh <= 0 && h <= 0) nh = 0.5;
    double score = defuzzify(nh, h);
    ok &= check(score >= -100.0 && score <= 100.0, "score out of range");
    ok &= check((score == 100.0) == (nh == 0.0), "+100 iff nh score is zero");
    ok &= check((score == -100.0) == (h == 0.0), "-100 iff h score is zero");
    ok &= check(defuzzify(nh, h + 0.25) > score, "not increasing in h");
    ok &= check(defuzzify(nh + 0.25, h) < score, "not decreasing in nh");
    double c = rng.uniform(0.05, 20);
    ok &= check(std::abs(defuzzify(c * nh, c * h) - score) < 1e-9, "not scale invariant");
    if (!ok) break;
  }
  return ok;
}

// ---- criterion 3 -----------------------------------------------------------

bool path_loss_checks() {
  PathLossParams p;  // Table defaults: beta 2, lambda 0.125 m, d0 1 m
  bool ok = true;
  double ref = path_loss_db(p.reference_distance_m, p);
  for (double d : {1.0, 10.0, 100.0}) {
    double step = path_loss_db(d * 10, p) - path_loss_db(d, p);
    ok &= check(std::abs(step - 20.0) < 1e-9,
                "relative loss per decade not 20 dB at beta 2");
  }
  double independent = 20.0 * std::log10(4.0 * M_PI * 1.0 / 0.125);
  ok &= check(std::abs(ref - independent) < 1e-6,
              "reference free-space loss differs from the independent value");
  return ok;
}

// ---- criterion 4 -----------------------------------------------------------

bool suppression_property() {
  TriggerConfig cfg;
  FuzzyConfig fuzzy = FuzzyConfig::defaults();
  const int streams = 10000;
  long handovers = 0;
  for (int k = 0; k < streams; ++k) {
    Rng rng(50000 + k);
    FlTrendTrigger trig(cfg, fuzzy);
    double t = 0;
    double earliest_allowed = 0;
    for (int i = 0; i < 150; ++i) {
      RadioSample s{rng.uniform(45, 115), rng.uniform(0.5, 32), rng.uniform(0, 160),
                    0};
      if (trig.observe(s, t) == TriggerDecision::Handover) {
        ++handovers;
        if (!check(t >= earliest_allowed - 1e-9,
                   "handover fired inside the suppression window"))
          return false;
        double attach_at = t + rng.uniform(0.5, 3.0);
        trig.on_attach(attach_at, s.speed_kmph, 0.0);
        earliest_allowed = attach_at + compute_suppression_s(s.speed_kmph, cfg);
        t = attach_at;
      }
      t += cfg.update_interval_s;
    }
  }
  note("streams=" + std::to_string(streams) + " handovers=" + std::to_string(handovers) +
       " violations=0");
  return check(handovers > 1000, "stream generator produced too few handovers to test");
}

// ---- criterion 5 -----------------------------------------------------------

bool false_alarm_contrast() {
  TriggerConfig cfg;  // window 10, threshold 7
  FlTrendTrigger trend(cfg, FuzzyConfig::defaults());
  RssiThresholdTrigger threshold(cfg);

  int trend_fires = 0;
  int threshold_fires = 0;
  for (int i = 0; i < 1200; ++i) {
    bool spike = i % 60 == 30;  // isolated, one sample, well past 75 dB
    RadioSample s{spike ? 95.0 : 55.0, 10.0, 20.0, 0};
    double t = 0.1 * i;
    if (trend.observe(s, t) == TriggerDecision::Handover) ++trend_fires;
    if (threshold.observe(s, t) == TriggerDecision::Handover) ++threshold_fires;
  }
  note("rssi-threshold fired " + std::to_string(threshold_fires) +
       ", fl-trend fired " + std::to_string(trend_fires));
  return check(threshold_fires >= 1, "rssi threshold never fired on the spikes") &
         check(trend_fires == 0, "fl-trend fired on an isolated spike");
}

// ---- criteria 6/7/8 --------------------------------------------------------

struct SweepArtifacts {
  SweepResult result;
  std::string csv_first;
  std::string csv_second;
  bool conservation_ok = true;
  long conservation_runs = 0;
  std::vector<std::string> conservation_notes;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SweepArtifacts run_default_sweeps(const Scenario& base, const fs::path& dir) {
  SweepArtifacts art;
  SweepSpec spec;
  spec.base_scenario = base;

  // Conservation and the throughput identity audited on every run (crit. 8).
  RunObserver audit = [&](const SweepRow& row, const RunResult& run) {
    ++art.conservation_runs;
    for (Direction direction : {Direction::MnToCn, Direction::CnToMn}) {
      const DirectionMetrics& m =
          direction == Direction::MnToCn ? run.metrics.mn : run.metrics.cn;
      long sent = 0, delivered = 0, lost = 0, in_flight = 0;
      double bytes = 0;
      for (const PacketRecord& rec : run.packets) {
        if (rec.direction != direction) continue;
        ++sent;
        if (rec.status == PacketRecord::Status::Delivered) {
          ++delivered;
          bytes += rec.size_bytes;
        } else if (rec.status == PacketRecord::Status::Lost) {
          ++lost;
        } else {
          ++in_flight;
        }
      }
      bool ok = sent == m.sent && sent == delivered + lost + in_flight;
      double tput = bytes * 8.0 / spec.base_scenario.duration_s / 1000.0;
      double rel = m.throughput_kbps > 0
                       ? std::abs(tput - m.throughput_kbps) / m.throughput_kbps
                       : std::abs(tput);
      ok = ok && rel <= 1e-3;
      if (!ok) {
        art.conservation_ok = false;
        std::ostringstream msg;
        msg << "audit failed at algorithm=" << to_string(row.algorithm)
            << " speed=" << row.speed_kmph << " seed=" << row.seed_index;
        art.conservation_notes.push_back(msg.str());
      }
    }
  };

  art.result = run_sweep(spec, audit);
  emit_csv(art.result, (dir / "sweep_a.csv").string());
  SweepResult second = run_sweep(spec);
  emit_csv(second, (dir / "sweep_b.csv").string());
  art.csv_first = read_file((dir / "sweep_a.csv").string());
  art.csv_second = read_file((dir / "sweep_b.csv").string());
  return art;
}

struct PooledMetrics {
  double handovers = 0;
  double loss_pct = 0;
  double tput_kbps = 0;
  double delay_mean_ms = 0;
};

// Seed-averaged run-level metrics; loss/delay pooled over both directions.
PooledMetrics pooled_average(const SweepResult& result, TriggerAlgorithm algorithm,
                             double speed) {
  PooledMetrics out;
  int n = 0;
  for (const SweepRow& row : result.rows) {
    if (row.algorithm != algorithm || row.speed_kmph != speed) continue;
    const MetricsReport& m = row.metrics;
    long sent = m.mn.sent + m.cn.sent;
    long lost = m.mn.lost + m.cn.lost;
    long delivered = m.mn.delivered + m.cn.delivered;
    out.handovers += static_cast<double>(m.handover_count);
    out.loss_pct += sent > 0 ? 100.0 * static_cast<double>(lost) / sent : 0.0;
    out.tput_kbps += m.mn.throughput_kbps + m.cn.throughput_kbps;
    out.delay_mean_ms += delivered > 0
                             ? (m.mn.delay_mean_ms * m.mn.delivered +
                                m.cn.delay_mean_ms * m.cn.delivered) /
                                   delivered
                             : 0.0;
    ++n;
  }
  out.handovers /= n;
  out.loss_pct /= n;
  out.tput_kbps /= n;
  out.delay_mean_ms /= n;
  return out;
}

bool ordering_reproduction(const SweepResult& result) {
  const auto& speeds = result.spec.speeds_kmph;
  bool ok = true;
  for (double speed : speeds) {
    PooledMetrics fl = pooled_average(result, TriggerAlgorithm::FlTrend, speed);
    PooledMetrics th = pooled_average(result, TriggerAlgorithm::RssiThreshold, speed);
    std::ostringstream tag;
    tag << "speed " << speed << ": ";
    ok &= check(fl.handovers < th.handovers,
                tag.str() + "(a) handovers fl-trend < rssi-threshold");
    ok &= check(fl.delay_mean_ms < th.delay_mean_ms,
                tag.str() + "(c) mean delay fl-trend < rssi-threshold");

    if (speed >= 16.0) {
      for (TriggerAlgorithm other :
           {TriggerAlgorithm::FrThreshold, TriggerAlgorithm::ChangeOfRssi}) {
        PooledMetrics base = pooled_average(result, other, speed);
        std::string who = to_string(other);
        ok &= check(fl.handovers <= base.handovers,
                    tag.str() + "(b) handovers fl-trend <= " + who);
        ok &= check(fl.loss_pct <= base.loss_pct,
                    tag.str() + "(b) packet loss fl-trend <= " + who);
        ok &= check(fl.delay_mean_ms <= base.delay_mean_ms,
                    tag.str() + "(b) mean delay fl-trend <= " + who);
        ok &= check(fl.tput_kbps >= base.tput_kbps,
                    tag.str() + "(b) throughput fl-trend >= " + who);
      }
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  Scenario base = Scenario::defaults();
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--scenario") base = load_scenario(argv[i + 1]);
  }
  base.validate();
  const FuzzyConfig& fuzzy = base.fuzzy;

  criterion(1, "rule-matrix conformance (27 crisp rows)",
            [&] { return rule_matrix_conformance(fuzzy); });
  criterion(2, "defuzzification bounds and identities (1000 random pairs)",
            [] { return defuzzification_properties(); });
  criterion(3, "path loss: 20 dB per decade and the free-space reference",
            [] { return path_loss_checks(); });
  criterion(4, "suppression delay honoured over 10000 randomized streams",
            [] { return suppression_property(); });
  criterion(5, "false-alarm contrast on isolated rssi spikes",
            [] { return false_alarm_contrast(); });

  fs::path dir = fs::temp_directory_path() / "wmsim_acceptance";
  fs::create_directories(dir);
  SweepArtifacts art;
  bool sweeps_ok = true;
  std::string sweep_error;
  auto sweep_t0 = std::chrono::steady_clock::now();
  try {
    art = run_default_sweeps(base, dir);
  } catch (const std::exception& e) {
    sweeps_ok = false;
    sweep_error = e.what();
  }
  auto sweep_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - sweep_t0)
                      .count();
  std::printf("-- default sweep executed twice in %lld ms (%zu runs each)\n",
              static_cast<long long>(sweep_ms), art.result.rows.size());
  if (!sweeps_ok) std::printf("-- sweep failed: %s\n", sweep_error.c_str());

  criterion(6, "determinism: two sweep executions emit byte-identical csv", [&] {
    return sweeps_ok &&
           check(!art.csv_first.empty(), "csv output missing") &&
           check(art.csv_first == art.csv_second, "csv outputs differ");
  });
  criterion(7, "ordering reproduction across the speed sweep", [&] {
    return sweeps_ok && ordering_reproduction(art.result);
  });
  criterion(8, "packet conservation and throughput identity on every run", [&] {
    for (const std::string& n : art.conservation_notes) note(n);
    note("audited runs: " + std::to_string(art.conservation_runs));
    return sweeps_ok && art.conservation_ok &&
           check(art.conservation_runs == 240, "expected 240 audited runs");
  });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
