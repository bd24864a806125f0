#ifndef AEBSIM_TRACKING_HPP
#define AEBSIM_TRACKING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aebsim/radar_model.hpp"

namespace aebsim::tracking {

struct TrackerParams {
  double process_noise_intensity = 2.5;  // m^2/s^3 per axis (white acceleration)
  double gate_chi2 = 9.21;               // chi-square 99%, 2 dof
  int confirm_hits = 3;                  // M of the M-of-N confirmation rule
  int confirm_window = 4;                // N of the M-of-N confirmation rule
  int delete_after_misses = 5;           // consecutive missed ticks
  double lane_halfwidth = 1.75;          // m
  double init_velocity_var = 100.0;      // (m/s)^2 on a newborn track

  void validate() const;
};

/// Fused kinematic estimate in the ego frame. State is [x, vx, y, vy].
struct Track {
  int track_id = 0;
  Eigen::Vector4d state = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
  int hits = 0;
  int misses = 0;       // consecutive missed ticks
  bool confirmed = false;
  double last_update = 0.0;
  std::uint32_t hit_history = 0;  // bit per tick, LSB most recent
  int history_length = 0;
  // Line-of-sight closing rate, filtered separately from the CV state
  // (range-rate measurements refine the MIO velocity only).
  double range_rate = 0.0;
  double range_rate_var = 0.0;
  bool has_range_rate = false;
};

/// Inputs the controller's TTC computation needs.
/// relative_velocity < 0 means closing.
struct MioReport {
  std::optional<int> track_id;
  double relative_distance = 0.0;
  double relative_velocity = 0.0;
};

/// Detection mapped into the ego Cartesian frame with first-order covariance
/// propagation of the polar noise.
struct CartesianMeasurement {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  double range_rate = 0.0;
  double range_rate_var = 0.0;
};
CartesianMeasurement to_cartesian(const radar::Detection& d, const radar::RadarConfig& config);

/// Constant-velocity predict. Covariance grows with the white-acceleration
/// process noise; dt = 0 is the identity.
Track predict(const Track& t, double dt, double process_noise_intensity);

/// Kalman measurement update (Joseph form). Position only enters the state;
/// range rate feeds the track's separate line-of-sight rate filter.
/// Throws std::runtime_error when the innovation covariance is not positive
/// definite.
Track update(const Track& t, const radar::Detection& d, const radar::RadarConfig& config);

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (track index, detection index)
  std::vector<int> unassigned_tracks;
  std::vector<int> unassigned_detections;
};

/// Global-nearest-neighbor association on squared Mahalanobis distance in the
/// Cartesian measurement space. Pairs beyond the gate are forbidden; the
/// returned assignment minimizes total gated cost (solved exactly).
Assignment associate(std::span<const Track> tracks, std::span<const radar::Detection> detections,
                     const radar::RadarConfig& config, double gate_chi2);

/// Exact minimum-cost assignment (Hungarian / shortest augmenting path).
/// Returns, for each row, the assigned column (square or wide matrices;
/// rows() <= cols() required).
std::vector<int> solve_min_cost_assignment(const Eigen::MatrixXd& cost);

/// Dual-radar fusion tracker: one instance per scenario run.
class Tracker {
 public:
  Tracker(TrackerParams params, std::vector<radar::RadarConfig> sensors);

  /// Process one tick: predict to t, then associate and update with each
  /// sensor's scan in sensor order, then run lifecycle bookkeeping.
  /// detections_per_sensor must be ordered like the sensor list.
  void step(double t, std::span<const std::vector<radar::Detection>> detections_per_sensor);

  /// Nearest confirmed in-lane track ahead of the ego front bumper.
  MioReport select_mio(double ego_front_offset) const;

  std::span<const Track> tracks() const { return tracks_; }
  int num_confirmed() const;

 private:
  TrackerParams params_;
  std::vector<radar::RadarConfig> sensors_;
  std::vector<Track> tracks_;
  int next_track_id_ = 1;
  double last_time_ = 0.0;
  bool started_ = false;
};

}  // namespace aebsim::tracking

#endif  // AEBSIM_TRACKING_HPP
