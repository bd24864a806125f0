#ifndef AEBSIM_RADAR_MODEL_HPP
#define AEBSIM_RADAR_MODEL_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "aebsim/rng.hpp"
#include "aebsim/scenario.hpp"

namespace aebsim::radar {

/// Detection-level radar sensor description. Mount pose is relative to the
/// ego footprint center; azimuth 0 points along the boresight.
struct RadarConfig {
  int sensor_id = 1;
  double mount_x = 2.35;                 // m, longitudinal offset on ego
  double mount_y = 0.0;                  // m, lateral offset on ego
  double mount_yaw = 0.0;                // rad
  double field_of_view = 0.0;            // rad, full beam angle
  double max_range = 0.0;                // m
  double range_noise_std = 0.25;         // m
  double azimuth_noise_std = 0.5 * 0.017453292519943295;  // rad (0.5 deg)
  double range_rate_noise_std = 0.25;    // m/s
  double detection_probability = 0.95;
  double update_period = 0.05;           // s

  void validate() const;
};

/// One radar measurement in the emitting sensor's polar frame.
/// range_rate < 0 means closing.
struct Detection {
  int sensor_id = 0;
  double timestamp = 0.0;
  double range = 0.0;
  double azimuth = 0.0;
  double range_rate = 0.0;
  Eigen::Matrix3d noise_covariance = Eigen::Matrix3d::Zero();  // (r, az, rr)
};

/// The two-sensor forward suite: a narrow long-range unit (20 deg FOV, 100 m)
/// and a wide mid-range unit (90 deg FOV, 60 m), both at the front bumper.
std::vector<RadarConfig> default_sensor_suite();

/// Generate noisy detections for every actor inside the sensor's coverage
/// wedge. Vehicles are detected at the closest point of their rear face,
/// pedestrians at their center. Detections whose noisy coordinates leave the
/// coverage wedge are discarded rather than clamped. Deterministic for a
/// fixed stream state.
std::vector<Detection> sense(const RadarConfig& config, const scenario::ActorState& ego,
                             std::span<const scenario::ActorState> actors, double t,
                             RandomStream& rng);

/// Reference point an actor is detected at (world frame).
/// Exposed for coverage-geometry tests.
void reference_point(const scenario::ActorState& actor, double sensor_x, double sensor_y,
                     double& out_x, double& out_y);

}  // namespace aebsim::radar

#endif  // AEBSIM_RADAR_MODEL_HPP
