// aebsim CLI: closed-loop Euro NCAP AEB simulation runs, scenario listing,
// AEB-on/off comparison, and a range-Doppler map dump of the FMCW front end.
//
// Exit codes: 0 = clean run, 1 = collision occurred, 2 = configuration error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "aebsim/config.hpp"
#include "aebsim/fmcw.hpp"
#include "aebsim/format.hpp"
#include "aebsim/simbench.hpp"

namespace fs = std::filesystem;
using namespace aebsim;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitCollision = 1;
constexpr int kExitConfigError = 2;

cfg::BenchConfig resolve_scenario(const std::string& name_or_file) {
  if (auto spec = scenario::catalog_scenario(name_or_file))
    return cfg::defaults_for(std::move(*spec));
  if (fs::exists(name_or_file)) return cfg::load_config_file(name_or_file);
  throw cfg::ConfigError("unknown scenario `" + name_or_file +
                         "` (not a catalog name, not a readable file); "
                         "see `aebsim list-scenarios`");
}

std::string run_file_stem(const sim::RunResult& result) {
  return result.scenario_name + "_seed" + std::to_string(result.seed);
}

void print_run_summary(const sim::RunResult& result) {
  std::cout << "scenario: " << result.scenario_name << "  seed: " << result.seed
            << "  ticks: " << result.log.size() << "\n";
  if (result.collision.collided) {
    std::cout << "collision at t=" << format_double(*result.collision.time)
              << " s, impact speed " << format_double(*result.collision.impact_speed)
              << " m/s\n";
  } else {
    std::cout << "no collision, min headway " << format_double(result.collision.min_headway)
              << " m, final ego speed " << format_double(result.log.back().ego_speed)
              << " m/s\n";
  }
}

int cmd_run(const std::string& scenario_arg, std::uint64_t seed, double duration, double dt,
            const std::string& out_dir, bool no_aeb, bool emit_plots) {
  cfg::BenchConfig config = resolve_scenario(scenario_arg);

  sim::RunOptions options;
  options.seed = seed;
  options.aeb_enabled = !no_aeb;
  if (duration > 0.0) options.duration_override = duration;
  if (dt > 0.0) options.dt_override = dt;

  const sim::RunResult result = sim::run(config, options);

  fs::create_directories(out_dir);
  const fs::path base = fs::path(out_dir) / run_file_stem(result);
  sim::emit_csv_file(result, base.string() + ".csv");
  std::cout << "wrote " << base.string() + ".csv" << "\n";
  if (emit_plots) {
    for (const fs::path& p : sim::emit_plots(result, base)) std::cout << "wrote " << p.string() << "\n";
  }
  print_run_summary(result);
  return result.collision.collided ? kExitCollision : kExitClean;
}

int cmd_list_scenarios() {
  for (const scenario::ScenarioSpec& spec : scenario::catalog()) {
    std::cout << spec.name << "\n";
    std::cout << "    duration " << format_double(spec.duration) << " s, ego "
              << format_double(spec.ego_initial_speed * 3.6) << " km/h";
    for (const scenario::ActorSpec& a : spec.actors) {
      std::cout << ", " << scenario::to_string(a.kind) << " gap "
                << format_double(a.initial_gap) << " m at "
                << format_double(a.initial_speed * 3.6) << " km/h";
      if (a.deceleration > 0.0)
        std::cout << " braking " << format_double(a.deceleration) << " m/s^2 from t="
                  << format_double(a.decel_trigger_time) << " s";
    }
    std::cout << "\n";
  }
  return kExitClean;
}

int cmd_compare(const std::string& scenario_arg, std::uint64_t seed) {
  cfg::BenchConfig config = resolve_scenario(scenario_arg);

  sim::RunOptions options;
  options.seed = seed;
  options.aeb_enabled = true;
  const sim::RunResult with_aeb = sim::run(config, options);
  options.aeb_enabled = false;
  const sim::RunResult without_aeb = sim::run(config, options);

  const sim::MitigationSummary summary = sim::compare_runs(with_aeb, without_aeb);
  std::cout << "scenario: " << config.scenario.name << "  seed: " << seed << "\n";
  std::cout << "AEB off: "
            << (without_aeb.collision.collided
                    ? "collision at " + format_double(summary.impact_speed_without) + " m/s"
                    : "no collision")
            << "\n";
  std::cout << "AEB on:  "
            << (summary.collision_avoided
                    ? "collision avoided (min headway " +
                          format_double(with_aeb.collision.min_headway) + " m)"
                    : "collision at " + format_double(summary.impact_speed_with) + " m/s")
            << "\n";
  std::cout << "impact speed reduction: " << format_double(summary.impact_speed_reduction)
            << " m/s (" << format_double(summary.impact_speed_reduction_pct) << "%)\n";
  return with_aeb.collision.collided ? kExitCollision : kExitClean;
}

int cmd_fmcw_demo(const std::vector<std::string>& target_args, double noise_std,
                  std::uint64_t seed, const std::string& out_file) {
  const fmcw::Waveform waveform = fmcw::Waveform::automotive_77ghz();

  std::vector<fmcw::PointTarget> targets;
  for (const std::string& arg : target_args) {
    const auto comma = arg.find(',');
    if (comma == std::string::npos)
      throw cfg::ConfigError("--target expects `range,speed` (m, m/s closing): " + arg);
    targets.push_back({std::stod(arg.substr(0, comma)), std::stod(arg.substr(comma + 1)), 1.0});
  }
  if (targets.empty()) targets = {{50.0, 13.9, 1.0}, {25.0, -5.0, 0.8}};

  const fmcw::BeatCube cube = fmcw::synthesize_beat(waveform, targets, noise_std, seed);
  const fmcw::RangeDopplerMap map = fmcw::range_doppler_map(cube, waveform);

  std::ofstream out(out_file, std::ios::binary);
  if (!out) throw cfg::ConfigError("cannot open output file: " + out_file);
  // Header row: range axis. Body rows: speed, then magnitudes per range bin.
  out << "speed_mps\\range_m";
  for (double r : map.range_axis_m) out << ',' << format_double(r);
  out << '\n';
  for (int i = 0; i < map.num_doppler_bins; ++i) {
    out << format_double(map.speed_axis_mps[i]);
    for (int r = 0; r < map.num_range_bins; ++r)
      out << ',' << format_double(map.magnitude[static_cast<std::size_t>(i) * map.num_range_bins + r]);
    out << '\n';
  }
  std::cout << "wrote " << out_file << " (" << map.num_doppler_bins << " Doppler x "
            << map.num_range_bins << " range bins)\n";

  for (const fmcw::RangeDopplerEstimate& e : fmcw::estimate_range_doppler(cube, waveform)) {
    std::cout << "estimate: range " << format_double(e.range_m) << " m, speed "
              << format_double(e.radial_speed_mps) << " m/s (closing > 0)\n";
  }
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-radar AEB simulation testbench (Euro NCAP scenarios)"};
  app.require_subcommand(1);

  std::string scenario_arg;
  std::uint64_t seed = 1;
  double duration = 0.0;
  double dt = 0.0;
  std::string out_dir = ".";
  bool no_aeb = false;
  bool emit_plots = false;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one closed-loop scenario");
  run_cmd->add_option("--scenario", scenario_arg, "Catalog scenario name or config file path")
      ->required();
  run_cmd->add_option("--seed", seed, "Random seed (default 1)");
  run_cmd->add_option("--duration", duration, "Override run duration [s]");
  run_cmd->add_option("--dt", dt, "Override loop step [s]");
  run_cmd->add_option("--out", out_dir, "Output directory (default .)");
  run_cmd->add_flag("--no-aeb", no_aeb, "Disable braking actuation (baseline run)");
  run_cmd->add_flag("--emit-plots", emit_plots, "Write the five SVG plots");

  CLI::App* list_cmd = app.add_subcommand("list-scenarios", "List catalog scenarios");

  std::string cmp_scenario;
  std::uint64_t cmp_seed = 1;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Run AEB on/off and report the mitigation");
  compare_cmd->add_option("--scenario", cmp_scenario, "Catalog scenario name or config file path")
      ->required();
  compare_cmd->add_option("--seed", cmp_seed, "Random seed (default 1)");

  std::vector<std::string> demo_targets;
  double demo_noise = 0.05;
  std::uint64_t demo_seed = 1;
  std::string demo_out = "range_doppler.csv";
  CLI::App* demo_cmd =
      app.add_subcommand("fmcw-demo", "Dump a range-Doppler magnitude map as CSV");
  demo_cmd->add_option("--target", demo_targets,
                       "Point target as `range,speed` (repeatable; speed > 0 closing)");
  demo_cmd->add_option("--noise", demo_noise, "Complex noise standard deviation");
  demo_cmd->add_option("--seed", demo_seed, "Random seed");
  demo_cmd->add_option("--out", demo_out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(scenario_arg, seed, duration, dt, out_dir, no_aeb, emit_plots);
    if (list_cmd->parsed()) return cmd_list_scenarios();
    if (compare_cmd->parsed()) return cmd_compare(cmp_scenario, cmp_seed);
    if (demo_cmd->parsed()) return cmd_fmcw_demo(demo_targets, demo_noise, demo_seed, demo_out);
  } catch (const cfg::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitClean;
}
