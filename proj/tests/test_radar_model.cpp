#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aebsim/radar_model.hpp"
#include "aebsim/rng.hpp"

using namespace aebsim;
using namespace aebsim::radar;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

RadarConfig noiseless(RadarConfig config) {
  config.range_noise_std = 0.0;
  config.azimuth_noise_std = 0.0;
  config.range_rate_noise_std = 0.0;
  config.detection_probability = 1.0;
  return config;
}

scenario::ActorState ego_at_rest() {
  scenario::ActorState ego;
  ego.actor_id = 0;
  ego.kind = scenario::ActorKind::kEgo;
  return ego;
}

/// Pedestrian-kind point actor (detected at its center), for clean geometry.
scenario::ActorState point_actor(int id, double x, double y) {
  scenario::ActorState a;
  a.actor_id = id;
  a.kind = scenario::ActorKind::kPedestrian;
  a.x = x;
  a.y = y;
  a.width = 0.5;
  a.length = 0.5;
  return a;
}

}  // namespace

TEST_CASE("default sensor suite matches the two-radar setup") {
  const auto suite = default_sensor_suite();
  REQUIRE(suite.size() == 2);
  CHECK(suite[0].max_range == 100.0);
  CHECK(suite[0].field_of_view == doctest::Approx(20.0 * kDeg));
  CHECK(suite[1].field_of_view == doctest::Approx(90.0 * kDeg));
  CHECK(suite[1].max_range == 60.0);
  for (const RadarConfig& c : suite) CHECK_NOTHROW(c.validate());
}

TEST_CASE("out-of-range targets produce no detection") {
  const RadarConfig mid = noiseless(default_sensor_suite()[1]);  // 60 m
  const auto ego = ego_at_rest();
  const auto target = point_actor(1, mid.mount_x + 120.0, 0.0);
  RandomStream rng(1);
  CHECK(sense(mid, ego, {&target, 1}, 0.0, rng).empty());
}

TEST_CASE("on-axis target measures exact polar coordinates") {
  const RadarConfig mid = noiseless(default_sensor_suite()[1]);
  auto ego = ego_at_rest();
  ego.speed = 12.0;  // closing on a stationary target
  const auto target = point_actor(1, mid.mount_x + 30.0, 0.0);
  RandomStream rng(1);
  const auto detections = sense(mid, ego, {&target, 1}, 0.25, rng);
  REQUIRE(detections.size() == 1);
  CHECK(detections[0].sensor_id == mid.sensor_id);
  CHECK(detections[0].timestamp == 0.25);
  CHECK(detections[0].range == doctest::Approx(30.0));
  CHECK(detections[0].azimuth == doctest::Approx(0.0));
  CHECK(detections[0].range_rate == doctest::Approx(-12.0));
}

TEST_CASE("vehicles are detected at the closest rear-face point") {
  const RadarConfig mid = noiseless(default_sensor_suite()[1]);
  const auto ego = ego_at_rest();
  scenario::ActorState lead;
  lead.actor_id = 1;
  lead.kind = scenario::ActorKind::kVehicle;
  lead.x = mid.mount_x + 20.0 + lead.length / 2.0;  // rear face 20 m from sensor
  RandomStream rng(1);
  const auto detections = sense(mid, ego, {&lead, 1}, 0.0, rng);
  REQUIRE(detections.size() == 1);
  CHECK(detections[0].range == doctest::Approx(20.0));
}

TEST_CASE("wide-FOV radar sees a 40 degree bearing, narrow one does not") {
  const auto suite = default_sensor_suite();
  const RadarConfig narrow = noiseless(suite[0]);
  const RadarConfig wide = noiseless(suite[1]);
  const auto ego = ego_at_rest();

  const double bearing = 40.0 * kDeg;
  const auto target = point_actor(1, narrow.mount_x + 40.0 * std::cos(bearing),
                                  40.0 * std::sin(bearing));

  RandomStream rng(1);
  CHECK(sense(narrow, ego, {&target, 1}, 0.0, rng).empty());
  const auto detections = sense(wide, ego, {&target, 1}, 0.0, rng);
  REQUIRE(detections.size() == 1);
  CHECK(detections[0].sensor_id == wide.sensor_id);
  CHECK(detections[0].azimuth == doctest::Approx(bearing));
}

TEST_CASE("noisy detections stay inside the coverage wedge") {
  RadarConfig config = default_sensor_suite()[1];
  config.range_noise_std = 2.0;  // exaggerate to exercise the rejection path
  config.azimuth_noise_std = 5.0 * kDeg;
  const auto ego = ego_at_rest();
  // Near the range and azimuth edges of the wedge.
  const auto edge = point_actor(1, config.mount_x + 59.0 * std::cos(43.0 * kDeg),
                                59.0 * std::sin(43.0 * kDeg));
  RandomStream rng(99);
  int emitted = 0;
  for (int i = 0; i < 500; ++i) {
    for (const Detection& d : sense(config, ego, {&edge, 1}, i * 0.05, rng)) {
      ++emitted;
      CHECK(d.range >= 0.0);
      CHECK(d.range <= config.max_range);
      CHECK(std::abs(d.azimuth) <= config.field_of_view / 2.0);
    }
  }
  CHECK(emitted > 0);
  CHECK(emitted < 500);  // some draws must fall outside and be discarded
}

TEST_CASE("union coverage equals the union of per-sensor wedges") {
  const auto suite = default_sensor_suite();
  std::vector<RadarConfig> sensors{noiseless(suite[0]), noiseless(suite[1])};
  const auto ego = ego_at_rest();

  RandomStream rng(123);
  for (int i = 0; i < 300; ++i) {
    const double x = -20.0 + 160.0 * rng.uniform();
    const double y = -80.0 + 160.0 * rng.uniform();
    const auto target = point_actor(1, x, y);

    bool detected = false;
    for (const RadarConfig& s : sensors) {
      RandomStream draw(1);
      if (!sense(s, ego, {&target, 1}, 0.0, draw).empty()) detected = true;
    }

    bool in_union = false;
    for (const RadarConfig& s : sensors) {
      const double dx = x - s.mount_x;
      const double dy = y - s.mount_y;
      const double range = std::hypot(dx, dy);
      const double bearing = std::atan2(dy, dx) - s.mount_yaw;
      if (range > 1e-9 && range <= s.max_range &&
          std::abs(std::remainder(bearing, 2 * std::numbers::pi)) <= s.field_of_view / 2.0)
        in_union = true;
    }
    CHECK(detected == in_union);
  }
}

TEST_CASE("sensing is deterministic under a fixed stream") {
  const RadarConfig config = default_sensor_suite()[1];
  const auto ego = ego_at_rest();
  const auto target = point_actor(1, 25.0, 1.0);

  RandomStream rng_a(7);
  RandomStream rng_b(7);
  for (int i = 0; i < 50; ++i) {
    const auto da = sense(config, ego, {&target, 1}, i * 0.05, rng_a);
    const auto db = sense(config, ego, {&target, 1}, i * 0.05, rng_b);
    REQUIRE(da.size() == db.size());
    for (std::size_t j = 0; j < da.size(); ++j) {
      CHECK(da[j].range == db[j].range);
      CHECK(da[j].azimuth == db[j].azimuth);
      CHECK(da[j].range_rate == db[j].range_rate);
    }
  }
}
