#include "aebsim/tracking.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aebsim::tracking {

namespace {

constexpr double kForbiddenCost = 1.0e9;

const Eigen::Matrix<double, 2, 4> kMeasurementMatrix = [] {
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;  // x
  h(1, 2) = 1.0;  // y
  return h;
}();

Eigen::Matrix4d symmetrized(const Eigen::Matrix4d& p) {
  return 0.5 * (p + p.transpose());
}

Track spawn_track(int id, const CartesianMeasurement& z, double t, double init_velocity_var) {
  Track track;
  track.track_id = id;
  track.state << z.position.x(), 0.0, z.position.y(), 0.0;
  track.covariance.setZero();
  track.covariance(0, 0) = z.covariance(0, 0);
  track.covariance(0, 2) = z.covariance(0, 1);
  track.covariance(2, 0) = z.covariance(1, 0);
  track.covariance(2, 2) = z.covariance(1, 1);
  track.covariance(1, 1) = init_velocity_var;
  track.covariance(3, 3) = init_velocity_var;
  track.last_update = t;
  track.range_rate = z.range_rate;
  track.range_rate_var = z.range_rate_var;
  track.has_range_rate = true;
  return track;
}

}  // namespace

void TrackerParams::validate() const {
  if (process_noise_intensity < 0.0)
    throw std::invalid_argument("process_noise_intensity must be non-negative");
  if (gate_chi2 <= 0.0) throw std::invalid_argument("gate_chi2 must be positive");
  if (confirm_hits <= 0 || confirm_window < confirm_hits)
    throw std::invalid_argument("confirmation rule requires 0 < M <= N");
  if (confirm_window > 31) throw std::invalid_argument("confirmation window too large");
  if (delete_after_misses <= 0)
    throw std::invalid_argument("delete_after_misses must be positive");
  if (lane_halfwidth <= 0.0) throw std::invalid_argument("lane_halfwidth must be positive");
  if (init_velocity_var <= 0.0)
    throw std::invalid_argument("init_velocity_var must be positive");
}

CartesianMeasurement to_cartesian(const radar::Detection& d, const radar::RadarConfig& config) {
  const double theta = d.azimuth + config.mount_yaw;
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  CartesianMeasurement z;
  z.position << config.mount_x + d.range * c, config.mount_y + d.range * s;

  Eigen::Matrix2d jac;
  jac << c, -d.range * s,
         s,  d.range * c;
  Eigen::Matrix2d polar = Eigen::Matrix2d::Zero();
  polar(0, 0) = d.noise_covariance(0, 0);
  polar(1, 1) = d.noise_covariance(1, 1);
  z.covariance = jac * polar * jac.transpose();
  z.range_rate = d.range_rate;
  z.range_rate_var = d.noise_covariance(2, 2);
  return z;
}

Track predict(const Track& t, double dt, double process_noise_intensity) {
  if (dt < 0.0) throw std::invalid_argument("dt must be non-negative");
  if (dt == 0.0) return t;

  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 1) = dt;
  f(2, 3) = dt;

  const double q = process_noise_intensity;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  Eigen::Matrix4d noise = Eigen::Matrix4d::Zero();
  noise(0, 0) = q * dt3 / 3.0;
  noise(0, 1) = noise(1, 0) = q * dt2 / 2.0;
  noise(1, 1) = q * dt;
  noise(2, 2) = q * dt3 / 3.0;
  noise(2, 3) = noise(3, 2) = q * dt2 / 2.0;
  noise(3, 3) = q * dt;

  Track out = t;
  out.state = f * t.state;
  out.covariance = symmetrized(f * t.covariance * f.transpose() + noise);
  out.range_rate_var += q * dt;
  return out;
}

Track update(const Track& t, const radar::Detection& d, const radar::RadarConfig& config) {
  const CartesianMeasurement z = to_cartesian(d, config);
  const auto& h = kMeasurementMatrix;

  const Eigen::Vector2d innovation = z.position - h * t.state;
  const Eigen::Matrix2d s = h * t.covariance * h.transpose() + z.covariance;

  Eigen::LLT<Eigen::Matrix2d> llt(s);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("innovation covariance is not positive definite");

  const Eigen::Matrix<double, 4, 2> gain = t.covariance * h.transpose() * llt.solve(Eigen::Matrix2d::Identity());

  Track out = t;
  out.state = t.state + gain * innovation;
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - gain * h;
  out.covariance = symmetrized(ikh * t.covariance * ikh.transpose() +
                               gain * z.covariance * gain.transpose());
  out.last_update = d.timestamp;

  // Scalar fusion of the line-of-sight rate.
  if (!out.has_range_rate) {
    out.range_rate = z.range_rate;
    out.range_rate_var = z.range_rate_var;
    out.has_range_rate = true;
  } else {
    const double k = out.range_rate_var / (out.range_rate_var + z.range_rate_var);
    out.range_rate += k * (z.range_rate - out.range_rate);
    out.range_rate_var *= (1.0 - k);
  }
  return out;
}

std::vector<int> solve_min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n == 0) return {};
  if (n > m) throw std::invalid_argument("assignment requires rows() <= cols()");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> min_value(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double current = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (current < min_value[j]) {
          min_value[j] = current;
          way[j] = j0;
        }
        if (min_value[j] < delta) {
          delta = min_value[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_value[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

Assignment associate(std::span<const Track> tracks, std::span<const radar::Detection> detections,
                     const radar::RadarConfig& config, double gate_chi2) {
  Assignment result;
  const int nt = static_cast<int>(tracks.size());
  const int nd = static_cast<int>(detections.size());
  if (nt == 0 || nd == 0) {
    for (int i = 0; i < nt; ++i) result.unassigned_tracks.push_back(i);
    for (int j = 0; j < nd; ++j) result.unassigned_detections.push_back(j);
    return result;
  }

  std::vector<CartesianMeasurement> measurements;
  measurements.reserve(nd);
  for (const radar::Detection& d : detections) measurements.push_back(to_cartesian(d, config));

  const auto& h = kMeasurementMatrix;
  Eigen::MatrixXd cost(nt, nd);
  for (int i = 0; i < nt; ++i) {
    const Eigen::Vector2d predicted = h * tracks[i].state;
    const Eigen::Matrix2d p = h * tracks[i].covariance * h.transpose();
    for (int j = 0; j < nd; ++j) {
      const Eigen::Matrix2d s = p + measurements[j].covariance;
      Eigen::LLT<Eigen::Matrix2d> llt(s);
      if (llt.info() != Eigen::Success) {
        cost(i, j) = kForbiddenCost;
        continue;
      }
      const Eigen::Vector2d innovation = measurements[j].position - predicted;
      const double d2 = innovation.dot(llt.solve(innovation));
      cost(i, j) = (d2 <= gate_chi2) ? d2 : kForbiddenCost;
    }
  }

  // Square up with forbidden padding so every row can be assigned; padded
  // or gated matches are filtered afterwards.
  const int dim = std::max(nt, nd);
  Eigen::MatrixXd padded = Eigen::MatrixXd::Constant(dim, dim, kForbiddenCost);
  padded.topLeftCorner(nt, nd) = cost;
  const std::vector<int> row_to_col = solve_min_cost_assignment(padded);

  std::vector<bool> det_used(nd, false);
  for (int i = 0; i < nt; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && j < nd && cost(i, j) < kForbiddenCost) {
      result.pairs.emplace_back(i, j);
      det_used[j] = true;
    } else {
      result.unassigned_tracks.push_back(i);
    }
  }
  for (int j = 0; j < nd; ++j)
    if (!det_used[j]) result.unassigned_detections.push_back(j);
  return result;
}

Tracker::Tracker(TrackerParams params, std::vector<radar::RadarConfig> sensors)
    : params_(params), sensors_(std::move(sensors)) {
  params_.validate();
  for (const radar::RadarConfig& s : sensors_) s.validate();
}

void Tracker::step(double t, std::span<const std::vector<radar::Detection>> detections_per_sensor) {
  if (detections_per_sensor.size() != sensors_.size())
    throw std::invalid_argument("one detection list per sensor required");

  const double dt = started_ ? t - last_time_ : 0.0;
  if (dt < 0.0) throw std::invalid_argument("time must be non-decreasing");
  for (Track& track : tracks_) track = predict(track, dt, params_.process_noise_intensity);

  std::vector<bool> hit(tracks_.size(), false);
  for (std::size_t s = 0; s < sensors_.size(); ++s) {
    const std::vector<radar::Detection>& dets = detections_per_sensor[s];
    const Assignment assignment = associate(tracks_, dets, sensors_[s], params_.gate_chi2);
    for (const auto& [ti, dj] : assignment.pairs) {
      tracks_[ti] = update(tracks_[ti], dets[dj], sensors_[s]);
      hit[ti] = true;
    }
    for (int dj : assignment.unassigned_detections) {
      const CartesianMeasurement z = to_cartesian(dets[dj], sensors_[s]);
      tracks_.push_back(spawn_track(next_track_id_++, z, t, params_.init_velocity_var));
      hit.push_back(true);
    }
  }

  // Lifecycle: one history bit per tick; a hit is at least one assigned
  // detection from either sensor this tick.
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    Track& track = tracks_[i];
    track.hit_history = (track.hit_history << 1) | (hit[i] ? 1u : 0u);
    track.history_length = std::min(track.history_length + 1, 31);
    if (hit[i]) {
      track.hits += 1;
      track.misses = 0;
    } else {
      track.misses += 1;
    }
    if (!track.confirmed) {
      const int window = std::min(track.history_length, params_.confirm_window);
      const std::uint32_t mask = (1u << window) - 1u;
      const int recent_hits = std::popcount(track.hit_history & mask);
      if (recent_hits >= params_.confirm_hits) track.confirmed = true;
    }
  }
  std::erase_if(tracks_, [this](const Track& track) {
    return track.misses >= params_.delete_after_misses;
  });

  last_time_ = t;
  started_ = true;
}

MioReport Tracker::select_mio(double ego_front_offset) const {
  MioReport report;
  const Track* best = nullptr;
  for (const Track& track : tracks_) {
    if (!track.confirmed) continue;
    if (track.state(0) <= 0.0) continue;
    if (std::abs(track.state(2)) > params_.lane_halfwidth) continue;
    if (best == nullptr || track.state(0) < best->state(0)) best = &track;
  }
  if (best != nullptr) {
    report.track_id = best->track_id;
    report.relative_distance = std::max(0.0, best->state(0) - ego_front_offset);
    report.relative_velocity = best->has_range_rate ? best->range_rate : best->state(1);
  }
  return report;
}

int Tracker::num_confirmed() const {
  return static_cast<int>(
      std::count_if(tracks_.begin(), tracks_.end(), [](const Track& t) { return t.confirmed; }));
}

}  // namespace aebsim::tracking
