#include "aebsim/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "aebsim/format.hpp"
#include "aebsim/radar_model.hpp"
#include "aebsim/rng.hpp"
#include "aebsim/svg_plot.hpp"
#include "aebsim/tracking.hpp"

namespace aebsim::sim {

const char* const kCsvHeader =
    "t,ego_speed,ego_accel,ttc,t_fcw,t_pb1,t_pb2,t_fb,aeb_state,fcw_active,headway,"
    "mio_present,num_detections_radar1,num_detections_radar2,num_confirmed_tracks";

RunResult run(const cfg::BenchConfig& config, const RunOptions& options) {
  config.validate();

  const double dt = options.dt_override.value_or(config.dt);
  const double duration = options.duration_override.value_or(config.scenario.duration);
  if (dt <= 0.0) throw cfg::ConfigError("dt must be positive");
  if (duration <= 0.0) throw cfg::ConfigError("duration must be positive");

  std::vector<scenario::ActorState> world = scenario::initial_world(config.scenario);
  const double ego_front_offset = config.scenario.ego_length / 2.0;

  // One independent noise stream per sensor; consumed in fixed tick order.
  std::vector<RandomStream> streams;
  streams.reserve(config.sensors.size());
  for (const radar::RadarConfig& s : config.sensors)
    streams.emplace_back(RandomStream::derive(options.seed, static_cast<std::uint64_t>(s.sensor_id)));

  tracking::Tracker tracker(config.tracker, config.sensors);
  controller::AebState state = controller::AebState::kDefault;

  RunResult result;
  result.scenario_name = config.scenario.name;
  result.seed = options.seed;
  double min_headway = std::numeric_limits<double>::infinity();

  const int num_steps = static_cast<int>(std::llround(duration / dt));
  for (int k = 0; k < num_steps; ++k) {
    const double t = k * dt;

    // Scheduled lead-vehicle braking.
    for (std::size_t i = 1; i < world.size(); ++i)
      world[i].acceleration =
          scenario::scheduled_acceleration(config.scenario.actors[i - 1], t);

    // Sense with every radar (empty scans for sensors excluded by options).
    std::vector<std::vector<radar::Detection>> scans(config.sensors.size());
    for (std::size_t s = 0; s < config.sensors.size(); ++s) {
      if (options.only_sensor && *options.only_sensor != s) continue;
      scans[s] = radar::sense(config.sensors[s], world[0],
                              std::span<const scenario::ActorState>(world).subspan(1), t,
                              streams[s]);
    }

    tracker.step(t, scans);
    const tracking::MioReport mio = tracker.select_mio(ego_front_offset);

    const controller::ControllerOutput out = controller::step(state, mio, world[0].speed,
                                                              config.controller);
    state = out.state;
    const double commanded = options.aeb_enabled ? out.commanded_deceleration : 0.0;

    const scenario::CollisionCheck check = scenario::check_collision(
        world[0], std::span<const scenario::ActorState>(world).subspan(1));

    SimLogRow row;
    row.t = t;
    row.ego_speed = world[0].speed;
    row.ego_accel = -commanded;
    row.ttc = out.ttc;
    row.t_fcw = out.thresholds.t_fcw;
    row.t_pb1 = out.thresholds.t_pb1;
    row.t_pb2 = out.thresholds.t_pb2;
    row.t_fb = out.thresholds.t_fb;
    row.aeb_state = out.state;
    row.fcw_active = out.fcw_active;
    row.headway = check.collided ? 0.0 : check.headway;
    row.mio_present = mio.track_id.has_value();
    row.num_detections_radar1 = scans.size() > 0 ? static_cast<int>(scans[0].size()) : 0;
    row.num_detections_radar2 = scans.size() > 1 ? static_cast<int>(scans[1].size()) : 0;
    row.num_confirmed_tracks = tracker.num_confirmed();
    result.log.push_back(row);

    if (check.collided) {
      result.collision.collided = true;
      result.collision.time = t;
      result.collision.impact_speed = check.impact_speed;
      result.collision.min_headway = 0.0;
      return result;  // no log rows after the collision tick
    }
    min_headway = std::min(min_headway, check.headway);

    world[0].acceleration = -commanded;
    for (scenario::ActorState& actor : world) actor = scenario::step_actor(actor, dt);
  }

  result.collision.collided = false;
  result.collision.min_headway = std::isfinite(min_headway) ? min_headway : 0.0;
  return result;
}

namespace {

std::string csv_row(const SimLogRow& r) {
  std::string line;
  line += format_double(r.t);
  line += ',';
  line += format_double(r.ego_speed);
  line += ',';
  line += format_double(r.ego_accel);
  line += ',';
  line += r.ttc ? format_double(*r.ttc) : "inf";
  line += ',';
  line += format_double(r.t_fcw);
  line += ',';
  line += format_double(r.t_pb1);
  line += ',';
  line += format_double(r.t_pb2);
  line += ',';
  line += format_double(r.t_fb);
  line += ',';
  line += controller::to_string(r.aeb_state);
  line += ',';
  line += r.fcw_active ? '1' : '0';
  line += ',';
  line += format_double(r.headway);
  line += ',';
  line += r.mio_present ? '1' : '0';
  line += ',';
  line += std::to_string(r.num_detections_radar1);
  line += ',';
  line += std::to_string(r.num_detections_radar2);
  line += ',';
  line += std::to_string(r.num_confirmed_tracks);
  return line;
}

}  // namespace

void emit_csv(const RunResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const SimLogRow& row : result.log) out << csv_row(row) << '\n';
}

void emit_csv_file(const RunResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  emit_csv(result, out);
}

namespace {

std::vector<double> column(const RunResult& r, double SimLogRow::* field) {
  std::vector<double> v;
  v.reserve(r.log.size());
  for (const SimLogRow& row : r.log) v.push_back(row.*field);
  return v;
}

void write_chart_file(const std::filesystem::path& path, const svg::ChartSpec& spec,
                      std::span<const svg::Series> series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  svg::write_line_chart(out, spec, series);
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const RunResult& result,
                                              const std::filesystem::path& path_prefix) {
  const std::vector<double> t = column(result, &SimLogRow::t);
  std::vector<std::filesystem::path> files;
  const std::string prefix = path_prefix.string();

  {
    std::vector<svg::Series> series;
    svg::Series ttc{"TTC", "#d62728", false, t, {}};
    for (const SimLogRow& row : result.log)
      ttc.y.push_back(row.ttc ? *row.ttc : std::numeric_limits<double>::quiet_NaN());
    series.push_back(std::move(ttc));
    series.push_back({"FCW threshold", "#1f77b4", false, t, column(result, &SimLogRow::t_fcw)});
    series.push_back({"PB1 stopping time", "#2ca02c", false, t, column(result, &SimLogRow::t_pb1)});
    series.push_back({"PB2 stopping time", "#ff7f0e", false, t, column(result, &SimLogRow::t_pb2)});
    series.push_back({"FB stopping time", "#9467bd", false, t, column(result, &SimLogRow::t_fb)});

    svg::ChartSpec spec;
    spec.title = result.scenario_name + ": TTC vs. stopping times";
    spec.x_label = "time [s]";
    spec.y_label = "time [s]";
    spec.y_range = {{0.0, 10.0}};
    const std::filesystem::path path = prefix + "_ttc.svg";
    write_chart_file(path, spec, series);
    files.push_back(path);
  }
  {
    svg::Series stage{"AEB state", "#d62728", true, t, {}};
    for (const SimLogRow& row : result.log)
      stage.y.push_back(static_cast<double>(row.aeb_state));
    svg::ChartSpec spec;
    spec.title = result.scenario_name + ": AEB state machine";
    spec.x_label = "time [s]";
    spec.y_label = "state";
    spec.y_range = {{-0.5, 4.5}};
    spec.y_ticks = {{0.0, "Default"}, {1.0, "FCW"}, {2.0, "PB1"}, {3.0, "PB2"}, {4.0, "FB"}};
    const std::filesystem::path path = prefix + "_aeb_state.svg";
    write_chart_file(path, spec, std::span<const svg::Series>(&stage, 1));
    files.push_back(path);
  }
  {
    svg::Series speed{"ego speed", "#1f77b4", false, t, column(result, &SimLogRow::ego_speed)};
    svg::ChartSpec spec;
    spec.title = result.scenario_name + ": ego velocity";
    spec.x_label = "time [s]";
    spec.y_label = "speed [m/s]";
    const std::filesystem::path path = prefix + "_velocity.svg";
    write_chart_file(path, spec, std::span<const svg::Series>(&speed, 1));
    files.push_back(path);
  }
  {
    svg::Series accel{"ego acceleration", "#2ca02c", true, t,
                      column(result, &SimLogRow::ego_accel)};
    svg::ChartSpec spec;
    spec.title = result.scenario_name + ": ego acceleration";
    spec.x_label = "time [s]";
    spec.y_label = "acceleration [m/s^2]";
    const std::filesystem::path path = prefix + "_acceleration.svg";
    write_chart_file(path, spec, std::span<const svg::Series>(&accel, 1));
    files.push_back(path);
  }
  {
    svg::Series headway{"headway", "#9467bd", false, t, {}};
    for (const SimLogRow& row : result.log)
      headway.y.push_back(std::isfinite(row.headway)
                              ? row.headway
                              : std::numeric_limits<double>::quiet_NaN());
    svg::ChartSpec spec;
    spec.title = result.scenario_name + ": headway to MIO";
    spec.x_label = "time [s]";
    spec.y_label = "headway [m]";
    const std::filesystem::path path = prefix + "_headway.svg";
    write_chart_file(path, spec, std::span<const svg::Series>(&headway, 1));
    files.push_back(path);
  }
  return files;
}

MitigationSummary compare_runs(const RunResult& with_aeb, const RunResult& without_aeb) {
  if (with_aeb.scenario_name != without_aeb.scenario_name)
    throw std::invalid_argument("compare_runs requires the same scenario");
  if (with_aeb.seed != without_aeb.seed)
    throw std::invalid_argument("compare_runs requires the same seed");

  MitigationSummary summary;
  summary.collision_avoided = !with_aeb.collision.collided;
  summary.impact_speed_with =
      with_aeb.collision.collided ? with_aeb.collision.impact_speed.value_or(0.0) : 0.0;
  summary.impact_speed_without =
      without_aeb.collision.collided ? without_aeb.collision.impact_speed.value_or(0.0) : 0.0;
  summary.impact_speed_reduction = summary.impact_speed_without - summary.impact_speed_with;
  summary.impact_speed_reduction_pct =
      summary.impact_speed_without > 0.0
          ? 100.0 * summary.impact_speed_reduction / summary.impact_speed_without
          : 0.0;
  return summary;
}

}  // namespace aebsim::sim
