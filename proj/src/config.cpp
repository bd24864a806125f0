#include "aebsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "aebsim/format.hpp"

namespace aebsim::cfg {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, std::string> values;  // key -> raw value
  std::map<std::string, int> key_lines;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

std::vector<Section> parse_sections(std::istream& in) {
  std::vector<Section> sections;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail(line_no, "empty section name");
      sections.push_back(Section{name, line_no, {}, {}});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected `key = value`");
    if (sections.empty()) fail(line_no, "key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key `" + key + "`");
    Section& section = sections.back();
    if (section.values.count(key))
      fail(line_no, "duplicate key `" + key + "` in [" + section.name + "]");
    section.values[key] = value;
    section.key_lines[key] = line_no;
  }
  return sections;
}

/// Typed accessor over one section; tracks consumed keys so leftovers can be
/// rejected by name.
class SectionReader {
 public:
  explicit SectionReader(const Section& s) : section_(s) {}

  std::optional<std::string> take_string(const std::string& key) {
    const auto it = section_.values.find(key);
    if (it == section_.values.end()) return std::nullopt;
    consumed_.push_back(key);
    return it->second;
  }

  std::optional<double> take_double(const std::string& key) {
    const auto raw = take_string(key);
    if (!raw) return std::nullopt;
    double value = 0.0;
    const char* begin = raw->data();
    const char* end = begin + raw->size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      fail(section_.key_lines.at(key), "invalid number `" + *raw + "` for key `" + key + "`");
    return value;
  }

  std::optional<int> take_int(const std::string& key) {
    const auto raw = take_string(key);
    if (!raw) return std::nullopt;
    int value = 0;
    const char* begin = raw->data();
    const char* end = begin + raw->size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      fail(section_.key_lines.at(key), "invalid integer `" + *raw + "` for key `" + key + "`");
    return value;
  }

  void reject_unknown_keys() const {
    for (const auto& [key, value] : section_.values) {
      if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end())
        fail(section_.key_lines.at(key),
             "unknown key `" + key + "` in section [" + section_.name + "]");
    }
  }

  int line() const { return section_.line; }

 private:
  const Section& section_;
  std::vector<std::string> consumed_;
};

void apply_scenario(SectionReader& r, scenario::ScenarioSpec& spec) {
  if (auto v = r.take_string("name")) spec.name = *v;
  if (auto v = r.take_double("duration")) spec.duration = *v;
  if (auto v = r.take_double("ego_initial_speed")) spec.ego_initial_speed = *v;
  if (auto v = r.take_double("ego_width")) spec.ego_width = *v;
  if (auto v = r.take_double("ego_length")) spec.ego_length = *v;
  if (auto v = r.take_double("overlap_fraction")) spec.overlap_fraction = *v;
  if (auto v = r.take_double("crossing_fraction")) spec.crossing_fraction = *v;
  r.reject_unknown_keys();
}

void apply_actor(SectionReader& r, scenario::ActorSpec& actor) {
  if (auto v = r.take_string("kind")) actor.kind = scenario::actor_kind_from_string(*v);
  if (auto v = r.take_double("initial_gap")) actor.initial_gap = *v;
  if (auto v = r.take_double("initial_speed")) actor.initial_speed = *v;
  if (auto v = r.take_double("deceleration")) actor.deceleration = *v;
  if (auto v = r.take_double("decel_trigger_time")) actor.decel_trigger_time = *v;
  if (auto v = r.take_double("width")) actor.width = *v;
  if (auto v = r.take_double("length")) actor.length = *v;
  r.reject_unknown_keys();
}

void apply_radar(SectionReader& r, radar::RadarConfig& radar) {
  if (auto v = r.take_double("mount_x")) radar.mount_x = *v;
  if (auto v = r.take_double("mount_y")) radar.mount_y = *v;
  if (auto v = r.take_double("mount_yaw_deg")) radar.mount_yaw = *v * kDegree;
  if (auto v = r.take_double("field_of_view_deg")) radar.field_of_view = *v * kDegree;
  if (auto v = r.take_double("max_range")) radar.max_range = *v;
  if (auto v = r.take_double("range_noise_std")) radar.range_noise_std = *v;
  if (auto v = r.take_double("azimuth_noise_std_deg")) radar.azimuth_noise_std = *v * kDegree;
  if (auto v = r.take_double("range_rate_noise_std")) radar.range_rate_noise_std = *v;
  if (auto v = r.take_double("detection_probability")) radar.detection_probability = *v;
  if (auto v = r.take_double("update_period")) radar.update_period = *v;
  r.reject_unknown_keys();
}

void apply_tracker(SectionReader& r, tracking::TrackerParams& p) {
  if (auto v = r.take_double("process_noise_intensity")) p.process_noise_intensity = *v;
  if (auto v = r.take_double("gate_chi2")) p.gate_chi2 = *v;
  if (auto v = r.take_int("confirm_hits")) p.confirm_hits = *v;
  if (auto v = r.take_int("confirm_window")) p.confirm_window = *v;
  if (auto v = r.take_int("delete_after_misses")) p.delete_after_misses = *v;
  if (auto v = r.take_double("lane_halfwidth")) p.lane_halfwidth = *v;
  if (auto v = r.take_double("init_velocity_var")) p.init_velocity_var = *v;
  r.reject_unknown_keys();
}

void apply_controller(SectionReader& r, controller::ControllerParams& p) {
  if (auto v = r.take_double("tau_react")) p.tau_react = *v;
  if (auto v = r.take_double("a_driver")) p.a_driver = *v;
  if (auto v = r.take_double("a_pb1")) p.a_pb1 = *v;
  if (auto v = r.take_double("a_pb2")) p.a_pb2 = *v;
  if (auto v = r.take_double("a_fb")) p.a_fb = *v;
  if (auto v = r.take_double("release_hysteresis")) p.release_hysteresis = *v;
  if (auto v = r.take_double("sample_time")) p.sample_time = *v;
  r.reject_unknown_keys();
}

void apply_sim(SectionReader& r, BenchConfig& c) {
  if (auto v = r.take_double("dt")) c.dt = *v;
  r.reject_unknown_keys();
}

std::optional<int> section_index(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() + 1 || name.compare(0, prefix.size(), prefix) != 0 ||
      name[prefix.size()] != '.')
    return std::nullopt;
  const std::string suffix = name.substr(prefix.size() + 1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), value);
  if (ec != std::errc() || ptr != suffix.data() + suffix.size() || value < 1) return std::nullopt;
  return value;
}

}  // namespace

void BenchConfig::validate() const {
  scenario.validate();
  if (sensors.empty()) throw ConfigError("at least one radar sensor is required");
  for (const radar::RadarConfig& s : sensors) s.validate();
  tracker.validate();
  controller.validate();
  if (dt <= 0.0) throw ConfigError("[sim] dt must be positive");
}

BenchConfig defaults_for(scenario::ScenarioSpec spec) {
  BenchConfig c;
  c.scenario = std::move(spec);
  c.sensors = radar::default_sensor_suite();
  return c;
}

BenchConfig parse_config(std::istream& in) {
  const std::vector<Section> sections = parse_sections(in);

  BenchConfig c;
  c.sensors = radar::default_sensor_suite();
  std::map<int, std::size_t> actor_index;  // section number -> actors[] slot

  for (const Section& section : sections) {
    SectionReader reader(section);
    if (section.name == "scenario") {
      apply_scenario(reader, c.scenario);
    } else if (const auto n = section_index(section.name, "actor")) {
      if (actor_index.count(*n)) fail(section.line, "duplicate section [" + section.name + "]");
      if (*n != static_cast<int>(c.scenario.actors.size()) + 1)
        fail(section.line, "actor sections must be numbered consecutively from 1");
      actor_index[*n] = c.scenario.actors.size();
      c.scenario.actors.emplace_back();
      apply_actor(reader, c.scenario.actors.back());
    } else if (const auto n = section_index(section.name, "radar")) {
      if (*n < 1 || *n > static_cast<int>(c.sensors.size()))
        fail(section.line, "radar index out of range (the suite has " +
                               std::to_string(c.sensors.size()) + " sensors)");
      apply_radar(reader, c.sensors[*n - 1]);
    } else if (section.name == "tracker") {
      apply_tracker(reader, c.tracker);
    } else if (section.name == "controller") {
      apply_controller(reader, c.controller);
    } else if (section.name == "sim") {
      apply_sim(reader, c);
    } else {
      fail(section.line, "unknown section [" + section.name + "]");
    }
  }

  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

BenchConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  return parse_config(in);
}

namespace {

void emit(std::ostringstream& out, const std::string& key, double value) {
  out << key << " = " << format_double(value) << "\n";
}

void emit_scenario_sections(std::ostringstream& out, const scenario::ScenarioSpec& spec) {
  out << "[scenario]\n";
  out << "name = " << spec.name << "\n";
  emit(out, "duration", spec.duration);
  emit(out, "ego_initial_speed", spec.ego_initial_speed);
  emit(out, "ego_width", spec.ego_width);
  emit(out, "ego_length", spec.ego_length);
  if (spec.overlap_fraction) emit(out, "overlap_fraction", *spec.overlap_fraction);
  if (spec.crossing_fraction) emit(out, "crossing_fraction", *spec.crossing_fraction);
  for (std::size_t i = 0; i < spec.actors.size(); ++i) {
    const scenario::ActorSpec& a = spec.actors[i];
    out << "\n[actor." << (i + 1) << "]\n";
    out << "kind = " << scenario::to_string(a.kind) << "\n";
    emit(out, "initial_gap", a.initial_gap);
    emit(out, "initial_speed", a.initial_speed);
    emit(out, "deceleration", a.deceleration);
    emit(out, "decel_trigger_time", a.decel_trigger_time);
    emit(out, "width", a.width);
    emit(out, "length", a.length);
  }
}

}  // namespace

std::string scenario_to_text(const scenario::ScenarioSpec& spec) {
  std::ostringstream out;
  emit_scenario_sections(out, spec);
  return out.str();
}

std::string to_text(const BenchConfig& c) {
  std::ostringstream out;
  emit_scenario_sections(out, c.scenario);

  for (std::size_t i = 0; i < c.sensors.size(); ++i) {
    const radar::RadarConfig& s = c.sensors[i];
    out << "\n[radar." << (i + 1) << "]\n";
    emit(out, "mount_x", s.mount_x);
    emit(out, "mount_y", s.mount_y);
    emit(out, "mount_yaw_deg", s.mount_yaw / kDegree);
    emit(out, "field_of_view_deg", s.field_of_view / kDegree);
    emit(out, "max_range", s.max_range);
    emit(out, "range_noise_std", s.range_noise_std);
    emit(out, "azimuth_noise_std_deg", s.azimuth_noise_std / kDegree);
    emit(out, "range_rate_noise_std", s.range_rate_noise_std);
    emit(out, "detection_probability", s.detection_probability);
    emit(out, "update_period", s.update_period);
  }

  out << "\n[tracker]\n";
  emit(out, "process_noise_intensity", c.tracker.process_noise_intensity);
  emit(out, "gate_chi2", c.tracker.gate_chi2);
  out << "confirm_hits = " << c.tracker.confirm_hits << "\n";
  out << "confirm_window = " << c.tracker.confirm_window << "\n";
  out << "delete_after_misses = " << c.tracker.delete_after_misses << "\n";
  emit(out, "lane_halfwidth", c.tracker.lane_halfwidth);
  emit(out, "init_velocity_var", c.tracker.init_velocity_var);

  out << "\n[controller]\n";
  emit(out, "tau_react", c.controller.tau_react);
  emit(out, "a_driver", c.controller.a_driver);
  emit(out, "a_pb1", c.controller.a_pb1);
  emit(out, "a_pb2", c.controller.a_pb2);
  emit(out, "a_fb", c.controller.a_fb);
  emit(out, "release_hysteresis", c.controller.release_hysteresis);
  emit(out, "sample_time", c.controller.sample_time);

  out << "\n[sim]\n";
  emit(out, "dt", c.dt);
  return out.str();
}

}  // namespace aebsim::cfg
