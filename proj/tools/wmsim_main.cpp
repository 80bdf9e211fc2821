#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmsim/scenario.hpp"
#include "wmsim/sim.hpp"
#include "wmsim/sweep.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string log_basename(const wmsim::SweepRow& row) {
  std::ostringstream name;
  name << wmsim::to_string(row.algorithm) << "_s" << row.speed_kmph << "_seed"
       << row.seed_index;
  return name.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wmsim - wireless mobility handover-trigger simulator"};

  std::string scenario_path;
  std::string algorithm_arg = "all";
  std::string speeds_arg;
  int seeds = -1;
  std::string out_dir = "out";
  bool emit_packet_log = false;
  bool print_defaults = false;
  std::uint64_t master_seed = 0;
  bool master_seed_set = false;
  int jobs = 0;

  app.add_option("--scenario", scenario_path, "Scenario JSON file (defaults baked in)");
  app.add_option("--algorithm", algorithm_arg,
                 "Trigger algorithm id, comma list, or 'all'");
  app.add_option("--speeds", speeds_arg, "Comma list of speeds in km/h");
  app.add_option("--seeds", seeds, "Number of seeds per (algorithm, speed) cell");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--emit-packet-log", emit_packet_log,
               "Write per-run packet and event logs");
  app.add_flag("--print-defaults", print_defaults,
               "Dump the default scenario as JSON and exit");
  app.add_option("--master-seed", master_seed, "Override the scenario master seed")
      ->each([&](const std::string&) { master_seed_set = true; });
  app.add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_defaults) {
      std::cout << wmsim::scenario_to_json_text(wmsim::Scenario::defaults());
      return 0;
    }

    wmsim::SweepSpec spec;
    spec.base_scenario = scenario_path.empty() ? wmsim::Scenario::defaults()
                                               : wmsim::load_scenario(scenario_path);
    if (master_seed_set) spec.base_scenario.seed = master_seed;
    if (algorithm_arg != "all") {
      spec.algorithms.clear();
      for (const std::string& id : split_csv_list(algorithm_arg))
        spec.algorithms.push_back(wmsim::trigger_algorithm_from_string(id));
    }
    if (!speeds_arg.empty()) {
      spec.speeds_kmph.clear();
      for (const std::string& s : split_csv_list(speeds_arg))
        spec.speeds_kmph.push_back(std::stod(s));
    }
    if (seeds > 0) spec.seed_count = seeds;
    spec.max_workers = jobs;

    std::vector<std::string> warnings;
    spec.base_scenario.validate(&warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

    fs::create_directories(out_dir);
    std::string log_dir = (fs::path(out_dir) / "logs").string();
    if (emit_packet_log) fs::create_directories(log_dir);

    wmsim::RunObserver observer;
    if (emit_packet_log) {
      observer = [&](const wmsim::SweepRow& row, const wmsim::RunResult& run) {
        std::string base = (fs::path(log_dir) / log_basename(row)).string();
        wmsim::write_packet_log(base + ".packets", run.packets);
        wmsim::write_event_log(base + ".events", run.events);
      };
    }

    wmsim::SweepResult result = wmsim::run_sweep(spec, observer);

    std::string csv_path = (fs::path(out_dir) / "sweep.csv").string();
    wmsim::emit_csv(result, csv_path);
    wmsim::emit_run_configs(result, (fs::path(out_dir) / "runs.jsonl").string());
    wmsim::emit_plot_series(result, (fs::path(out_dir) / "plots").string());

    std::printf("%-16s %6s %10s %9s %9s %10s %10s\n", "algorithm", "speed",
                "handovers", "mn_loss%", "cn_loss%", "cn_kbps", "cn_ms");
    for (const wmsim::AverageRow& avg : result.averages) {
      std::printf("%-16s %6.0f %10.2f %9.2f %9.2f %10.2f %10.3f\n",
                  wmsim::to_string(avg.algorithm), avg.speed_kmph, avg.values[0],
                  avg.values[1], avg.values[2], avg.values[4], avg.values[10]);
    }
    std::printf("wrote %s (%zu runs + %zu averages)\n", csv_path.c_str(),
                result.rows.size(), result.averages.size());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
