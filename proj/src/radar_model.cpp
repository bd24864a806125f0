#include "aebsim/radar_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aebsim::radar {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

void RadarConfig::validate() const {
  if (field_of_view <= 0.0 || field_of_view > std::numbers::pi)
    throw std::invalid_argument("field_of_view must lie in (0, pi]");
  if (max_range <= 0.0) throw std::invalid_argument("max_range must be positive");
  if (range_noise_std < 0.0 || azimuth_noise_std < 0.0 || range_rate_noise_std < 0.0)
    throw std::invalid_argument("noise standard deviations must be non-negative");
  if (detection_probability <= 0.0 || detection_probability > 1.0)
    throw std::invalid_argument("detection_probability must lie in (0, 1]");
  if (update_period <= 0.0) throw std::invalid_argument("update_period must be positive");
}

std::vector<RadarConfig> default_sensor_suite() {
  RadarConfig long_range;
  long_range.sensor_id = 1;
  long_range.field_of_view = 20.0 * kDegree;
  long_range.max_range = 100.0;

  RadarConfig mid_range;
  mid_range.sensor_id = 2;
  mid_range.field_of_view = 90.0 * kDegree;
  mid_range.max_range = 60.0;

  return {long_range, mid_range};
}

void reference_point(const scenario::ActorState& actor, double sensor_x, double sensor_y,
                     double& out_x, double& out_y) {
  if (actor.kind == scenario::ActorKind::kPedestrian) {
    out_x = actor.x;
    out_y = actor.y;
    return;
  }
  // Closest point of the rear face: the face segment sits half a length
  // behind the center, spanning the actor's width.
  const double cy = std::cos(actor.yaw);
  const double sy = std::sin(actor.yaw);
  const double face_cx = actor.x - 0.5 * actor.length * cy;
  const double face_cy = actor.y - 0.5 * actor.length * sy;
  // Face direction is the actor's lateral axis.
  const double ex = -sy;
  const double ey = cy;
  const double proj = (sensor_x - face_cx) * ex + (sensor_y - face_cy) * ey;
  const double half_w = 0.5 * actor.width;
  const double clamped = std::clamp(proj, -half_w, half_w);
  out_x = face_cx + clamped * ex;
  out_y = face_cy + clamped * ey;
}

std::vector<Detection> sense(const RadarConfig& config, const scenario::ActorState& ego,
                             std::span<const scenario::ActorState> actors, double t,
                             RandomStream& rng) {
  config.validate();
  std::vector<Detection> detections;

  const double ego_cy = std::cos(ego.yaw);
  const double ego_sy = std::sin(ego.yaw);
  const double sensor_x = ego.x + config.mount_x * ego_cy - config.mount_y * ego_sy;
  const double sensor_y = ego.y + config.mount_x * ego_sy + config.mount_y * ego_cy;
  const double boresight = ego.yaw + config.mount_yaw;
  const double half_fov = config.field_of_view / 2.0;

  for (const scenario::ActorState& actor : actors) {
    if (actor.kind == scenario::ActorKind::kEgo || actor.actor_id == ego.actor_id) continue;

    double px = 0.0, py = 0.0;
    reference_point(actor, sensor_x, sensor_y, px, py);
    const double dx = px - sensor_x;
    const double dy = py - sensor_y;
    const double range = std::hypot(dx, dy);
    if (range < 1e-9 || range > config.max_range) continue;
    const double azimuth = wrap_angle(std::atan2(dy, dx) - boresight);
    if (std::abs(azimuth) > half_fov) continue;

    if (rng.uniform() >= config.detection_probability) continue;

    // Line-of-sight projection of the relative velocity.
    const double vx = actor.speed * std::cos(actor.yaw) - ego.speed * ego_cy;
    const double vy = actor.speed * std::sin(actor.yaw) - ego.speed * ego_sy;
    const double range_rate = (vx * dx + vy * dy) / range;

    Detection d;
    d.sensor_id = config.sensor_id;
    d.timestamp = t;
    d.range = range + config.range_noise_std * rng.normal();
    d.azimuth = azimuth + config.azimuth_noise_std * rng.normal();
    d.range_rate = range_rate + config.range_rate_noise_std * rng.normal();
    d.noise_covariance.setZero();
    d.noise_covariance(0, 0) = config.range_noise_std * config.range_noise_std;
    d.noise_covariance(1, 1) = config.azimuth_noise_std * config.azimuth_noise_std;
    d.noise_covariance(2, 2) = config.range_rate_noise_std * config.range_rate_noise_std;

    // Noise can push a detection out of the coverage wedge; discard those to
    // keep the emitted-detection invariants intact.
    if (d.range < 0.0 || d.range > config.max_range || std::abs(d.azimuth) > half_fov)
      continue;
    detections.push_back(d);
  }
  return detections;
}

}  // namespace aebsim::radar
