#pragma once

// Command-line driver: runs a scenario file or a preset, writes snapshots and
// a key=value run report.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "swsed/engine.hpp"
#include "swsed/io/scenario.hpp"
#include "swsed/io/snapshot.hpp"

namespace swsed {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_config = 2,
  exit_unstable = 3,
};

inline std::string snapshot_name(std::int64_t step) {
  std::ostringstream os;
  os << "snapshot_" << std::setw(8) << std::setfill('0') << step << ".swsnap";
  return os.str();
}

/// Runs the command line `args` (without the program name). Returns the exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Shallow water and bedload morphodynamics simulator"};
  app.name("swsed");

  std::string scenario_file;
  std::string preset;
  std::optional<int> workers;
  std::optional<double> t_end;
  std::optional<double> snapshot_every;
  std::optional<std::int64_t> snapshot_every_steps;
  std::optional<std::int64_t> max_steps;
  std::optional<double> dt_max;
  bool dense_sweep = false;
  std::string report_path;
  std::string output;
  bool csv = false;
  bool no_snapshots = false;
  bool print_scenario = false;

  app.add_option("scenario", scenario_file, "Scenario file (key = value sections)");
  app.add_option("--preset", preset, "Built-in scenario")
      ->check(CLI::IsMember(io::preset_names()));
  app.add_option("--workers", workers, "Number of worker threads")->check(CLI::PositiveNumber);
  app.add_option("--t-end", t_end, "End time, s")->check(CLI::NonNegativeNumber);
  app.add_option("--snapshot-every", snapshot_every, "Snapshot interval in simulated seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--snapshot-every-steps", snapshot_every_steps, "Snapshot interval in steps")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-steps", max_steps, "Stop after this many steps")->check(CLI::NonNegativeNumber);
  app.add_option("--dt-max", dt_max, "Largest time step, s (taken when the domain is dry)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--dense-sweep", dense_sweep, "Process every block (disables active-block skipping)");
  app.add_option("--report", report_path, "Write the run report as key=value text to this file");
  app.add_option("--output", output, "Output directory for snapshots and the report");
  app.add_flag("--csv", csv, "Also write each snapshot as CSV");
  app.add_flag("--no-snapshots", no_snapshots, "Do not write snapshots");
  app.add_flag("--print-scenario", print_scenario, "Print the resolved scenario and exit");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  io::ScenarioConfig config;
  try {
    if (!preset.empty() && !scenario_file.empty()) {
      err << "swsed: give either a scenario file or --preset, not both\n";
      return exit_usage;
    }
    if (preset.empty() && scenario_file.empty()) {
      err << "swsed: missing scenario file (or --preset)\n";
      return exit_usage;
    }
    config = preset.empty() ? io::read_scenario(scenario_file) : io::preset_scenario(preset);
    if (workers) config.workers = *workers;
    if (t_end) config.schedule.t_end = *t_end;
    if (snapshot_every) config.schedule.snapshot_every = *snapshot_every;
    if (snapshot_every_steps) config.schedule.snapshot_every_steps = *snapshot_every_steps;
    if (max_steps) config.schedule.max_steps = *max_steps;
    if (dt_max) config.dt_max = *dt_max;
    if (dense_sweep) config.dense_sweep = true;
    if (!output.empty()) config.output_dir = output;
  } catch (const Error& e) {
    err << "swsed: " << e.what() << '\n';
    return exit_config;
  }

  if (print_scenario) {
    out << io::format_scenario(config);
    return exit_ok;
  }

  const std::filesystem::path dir = config.output_dir;
  try {
    const io::Scenario sc = io::build_scenario(config);
    std::filesystem::create_directories(dir);
    {
      std::ofstream f(dir / "scenario.ini");
      f << io::format_scenario(config);
    }
    Engine engine(sc.grid, sc.params, sc.sources, sc.initial, sc.options);
    std::int64_t written = 0;
    SnapshotSink sink;
    if (!no_snapshots) {
      sink = [&](double time, std::int64_t step, const FlowState& state) {
        const io::Snapshot snap{sc.grid, time, step, state};
        const auto path = dir / snapshot_name(step);
        io::write_snapshot(path, snap, sc.params.eps_dry);
        if (csv) {
          std::ofstream f(std::filesystem::path(path).replace_extension(".csv"));
          io::write_csv(f, snap, sc.params.eps_dry);
        }
        ++written;
      };
    }

    RunReport report;
    try {
      report = engine.run(sc.schedule, sink);
    } catch (const InstabilityError& e) {
      const auto path = dir / "last_good.swsnap";
      io::write_snapshot(path, io::Snapshot{sc.grid, e.time(), e.step(), e.last_good()}, sc.params.eps_dry);
      err << "swsed: " << e.what() << "\nswsed: last good state written to " << path.string() << '\n';
      return exit_unstable;
    }

    for (const auto& [k, v] : io::reference_metrics(config, sc.grid, engine.state(), engine.time()))
      report.metrics[k] = v;
    report.metrics["snapshots_written"] = static_cast<double>(written);

    const std::filesystem::path kv = report_path.empty() ? dir / "report.txt" : std::filesystem::path(report_path);
    if (kv.has_parent_path()) std::filesystem::create_directories(kv.parent_path());
    std::ofstream f(kv);
    if (!f) throw ConfigError("cannot write report " + kv.string());
    f << "scenario=" << config.name << '\n' << report.to_key_values();
    out << "scenario     " << config.name << '\n' << report.to_text();
  } catch (const Error& e) {
    err << "swsed: " << e.what() << '\n';
    return exit_config;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "swsed: " << e.what() << '\n';
    return exit_config;
  }
  return exit_ok;
}

/// Entry point for main().
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(std::move(args), out, err);
}

}  // namespace swsed
