#ifndef AEBSIM_SIMBENCH_HPP
#define AEBSIM_SIMBENCH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "aebsim/config.hpp"
#include "aebsim/controller.hpp"
#include "aebsim/scenario.hpp"

namespace aebsim::sim {

/// One controller-tick record. Column order in the CSV log matches the field
/// order here; absent TTC and headway print as the literal text `inf`.
struct SimLogRow {
  double t = 0.0;
  double ego_speed = 0.0;
  double ego_accel = 0.0;
  std::optional<double> ttc;
  double t_fcw = 0.0;
  double t_pb1 = 0.0;
  double t_pb2 = 0.0;
  double t_fb = 0.0;
  controller::AebState aeb_state = controller::AebState::kDefault;
  bool fcw_active = false;
  double headway = 0.0;
  bool mio_present = false;
  int num_detections_radar1 = 0;
  int num_detections_radar2 = 0;
  int num_confirmed_tracks = 0;
};

/// The exact CSV header line (no newline).
extern const char* const kCsvHeader;

struct RunResult {
  std::vector<SimLogRow> log;
  scenario::CollisionReport collision;
  std::string scenario_name;
  std::uint64_t seed = 0;
};

struct RunOptions {
  std::uint64_t seed = 1;
  bool aeb_enabled = true;
  std::optional<double> duration_override;
  std::optional<double> dt_override;
  /// Restrict sensing to this sensor index (0-based); all sensors when absent.
  std::optional<std::size_t> only_sensor;
};

/// Closed-loop run: per tick, advance ground truth, sense with both radars,
/// track, select the MIO, step the controller, apply the commanded
/// deceleration to the ego, and log one row. Stops early on collision.
/// Deterministic for a fixed (config, options) pair.
RunResult run(const cfg::BenchConfig& config, const RunOptions& options = {});

void emit_csv(const RunResult& result, std::ostream& out);
void emit_csv_file(const RunResult& result, const std::filesystem::path& path);

/// Write the five per-run plots:
///   <prefix>_ttc.svg           TTC against the four stage thresholds
///   <prefix>_aeb_state.svg     controller stage over time
///   <prefix>_velocity.svg      ego speed
///   <prefix>_acceleration.svg  ego acceleration
///   <prefix>_headway.svg       bumper-to-bumper gap to the target
/// Returns the created paths.
std::vector<std::filesystem::path> emit_plots(const RunResult& result,
                                              const std::filesystem::path& path_prefix);

struct MitigationSummary {
  bool collision_avoided = false;          // with AEB
  double impact_speed_with = 0.0;          // m/s
  double impact_speed_without = 0.0;       // m/s
  double impact_speed_reduction = 0.0;     // m/s
  double impact_speed_reduction_pct = 0.0;
};

/// Compare an AEB-on run against its AEB-off baseline (same scenario + seed).
/// Throws std::invalid_argument when the runs do not match.
MitigationSummary compare_runs(const RunResult& with_aeb, const RunResult& without_aeb);

}  // namespace aebsim::sim

#endif  // AEBSIM_SIMBENCH_HPP
