#ifndef AEBSIM_CONFIG_HPP
#define AEBSIM_CONFIG_HPP

#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aebsim/controller.hpp"
#include "aebsim/radar_model.hpp"
#include "aebsim/scenario.hpp"
#include "aebsim/tracking.hpp"

namespace aebsim::cfg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything one simulation run needs. Defaults mirror the built-in catalog
/// configuration; a config file may override any subset of sections.
struct BenchConfig {
  scenario::ScenarioSpec scenario;
  std::vector<radar::RadarConfig> sensors;
  tracking::TrackerParams tracker;
  controller::ControllerParams controller;
  double dt = 0.05;  // s, single-rate loop step

  void validate() const;
};

/// Default sensors/tracker/controller wrapped around the given scenario.
BenchConfig defaults_for(scenario::ScenarioSpec spec);

/// Parse a configuration from a stream of `[section]` + `key = value` lines.
/// Comments start with '#'. Unknown sections or keys are rejected with a
/// ConfigError naming the offending line.
BenchConfig parse_config(std::istream& in);
BenchConfig load_config_file(const std::filesystem::path& path);

/// Serialize; parse_config(to_text(c)) reproduces c exactly, and serializing
/// again reproduces the text byte-for-byte.
std::string to_text(const BenchConfig& c);

/// Scenario-only document (the format the shipped catalog files use).
std::string scenario_to_text(const scenario::ScenarioSpec& spec);

}  // namespace aebsim::cfg

#endif  // AEBSIM_CONFIG_HPP
