#include "aebsim/scenario.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace aebsim::scenario {

namespace {

constexpr double kSpeed50Kph = 50.0 / 3.6;
constexpr double kSpeed20Kph = 20.0 / 3.6;
constexpr double kPedestrianWalkSpeed = 1.5;  // m/s
constexpr double kPedestrianSize = 0.5;        // m, square footprint

ActorSpec lead_vehicle(double gap, double speed, double decel = 0.0, double trigger = 0.0) {
  ActorSpec a;
  a.kind = ActorKind::kVehicle;
  a.initial_gap = gap;
  a.initial_speed = speed;
  a.deceleration = decel;
  a.decel_trigger_time = trigger;
  return a;
}

/// Effective axis-aligned half-extents of an actor's footprint. Actors whose
/// heading is closer to the lateral axis (the crossing pedestrian) have their
/// footprint axes swapped.
void half_extents(const ActorState& a, double& half_len_x, double& half_wid_y) {
  if (std::abs(std::sin(a.yaw)) > std::abs(std::cos(a.yaw))) {
    half_len_x = a.width / 2.0;
    half_wid_y = a.length / 2.0;
  } else {
    half_len_x = a.length / 2.0;
    half_wid_y = a.width / 2.0;
  }
}

}  // namespace

const char* to_string(ActorKind kind) {
  switch (kind) {
    case ActorKind::kEgo: return "ego";
    case ActorKind::kVehicle: return "vehicle";
    case ActorKind::kPedestrian: return "pedestrian";
  }
  return "unknown";
}

ActorKind actor_kind_from_string(const std::string& s) {
  if (s == "ego") return ActorKind::kEgo;
  if (s == "vehicle") return ActorKind::kVehicle;
  if (s == "pedestrian") return ActorKind::kPedestrian;
  throw std::invalid_argument("unknown actor kind: " + s);
}

void ScenarioSpec::validate() const {
  if (duration <= 0.0) throw std::invalid_argument("scenario duration must be positive");
  if (ego_initial_speed < 0.0) throw std::invalid_argument("ego speed must be non-negative");
  if (ego_width <= 0.0 || ego_length <= 0.0)
    throw std::invalid_argument("ego footprint must be positive");
  for (const ActorSpec& a : actors) {
    if (a.initial_gap < 0.0) throw std::invalid_argument("actor gap must be non-negative");
    if (a.initial_speed < 0.0) throw std::invalid_argument("actor speed must be non-negative");
    if (a.width <= 0.0 || a.length <= 0.0)
      throw std::invalid_argument("actor footprint must be positive");
  }
  if (overlap_fraction && (*overlap_fraction < 0.0 || *overlap_fraction > 1.0))
    throw std::invalid_argument("overlap_fraction must lie in [0, 1]");
  if (crossing_fraction && (*crossing_fraction < 0.0 || *crossing_fraction > 1.0))
    throw std::invalid_argument("crossing_fraction must lie in [0, 1]");
}

std::vector<ScenarioSpec> catalog() {
  std::vector<ScenarioSpec> specs;

  {
    ScenarioSpec s;
    s.name = "AEB_CCRs_50overlap";
    s.ego_initial_speed = kSpeed50Kph;
    s.actors.push_back(lead_vehicle(80.0, 0.0));
    s.overlap_fraction = 0.5;
    specs.push_back(std::move(s));
  }
  {
    ScenarioSpec s;
    s.name = "AEB_CCRm_50overlap";
    s.ego_initial_speed = kSpeed50Kph;
    s.actors.push_back(lead_vehicle(40.0, kSpeed20Kph));
    s.overlap_fraction = 0.5;
    specs.push_back(std::move(s));
  }
  {
    ScenarioSpec s;
    s.name = "AEB_CCRb_6_initialGap_12m";
    s.ego_initial_speed = kSpeed50Kph;
    s.actors.push_back(lead_vehicle(12.0, kSpeed50Kph, 6.0, 1.0));
    s.overlap_fraction = 1.0;
    specs.push_back(std::move(s));
  }
  {
    ScenarioSpec s;
    s.name = "AEB_Pedestrian_Nearside_25width";
    s.ego_initial_speed = kSpeed50Kph;
    ActorSpec ped;
    ped.kind = ActorKind::kPedestrian;
    ped.initial_gap = 50.0;
    ped.initial_speed = kPedestrianWalkSpeed;
    ped.width = kPedestrianSize;
    ped.length = kPedestrianSize;
    s.actors.push_back(ped);
    s.crossing_fraction = 0.25;
    specs.push_back(std::move(s));
  }
  {
    ScenarioSpec s;
    s.name = "AEB_CCRb_2_initialGap_40m";
    s.ego_initial_speed = kSpeed50Kph;
    s.actors.push_back(lead_vehicle(40.0, kSpeed50Kph, 2.0, 1.0));
    s.overlap_fraction = 1.0;
    specs.push_back(std::move(s));
  }
  return specs;
}

std::optional<ScenarioSpec> catalog_scenario(const std::string& name) {
  for (ScenarioSpec& s : catalog())
    if (s.name == name) return std::move(s);
  return std::nullopt;
}

double lateral_offset_for_overlap(double overlap_fraction, double ego_width,
                                  double target_width) {
  if (overlap_fraction < 0.0 || overlap_fraction > 1.0)
    throw std::invalid_argument("overlap_fraction must lie in [0, 1]");
  if (ego_width <= 0.0 || target_width <= 0.0)
    throw std::invalid_argument("widths must be positive");
  return (ego_width + target_width) / 2.0 - overlap_fraction * target_width;
}

ActorState step_actor(const ActorState& a, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  ActorState next = a;
  const double v1 = a.speed + a.acceleration * dt;
  double advance = 0.0;
  if (v1 <= 0.0 && a.acceleration < 0.0) {
    // Stops within this step: distance to standstill.
    next.speed = 0.0;
    advance = a.speed * a.speed / (2.0 * -a.acceleration);
  } else {
    next.speed = std::max(0.0, v1);
    advance = 0.5 * (a.speed + next.speed) * dt;
  }
  next.x = a.x + advance * std::cos(a.yaw);
  next.y = a.y + advance * std::sin(a.yaw);
  return next;
}

CollisionCheck check_collision(const ActorState& ego, std::span<const ActorState> others) {
  CollisionCheck result;
  result.headway = std::numeric_limits<double>::infinity();

  double ego_hl = 0.0, ego_hw = 0.0;
  half_extents(ego, ego_hl, ego_hw);
  const double ego_vx = ego.speed * std::cos(ego.yaw);

  for (const ActorState& o : others) {
    if (o.actor_id == ego.actor_id) continue;
    double hl = 0.0, hw = 0.0;
    half_extents(o, hl, hw);
    const double dx = o.x - ego.x;
    const double dy = o.y - ego.y;
    const bool lat_overlap = std::abs(dy) <= ego_hw + hw;
    const bool lon_overlap = std::abs(dx) <= ego_hl + hl;
    if (lat_overlap && lon_overlap) {
      result.collided = true;
      const double o_vx = o.speed * std::cos(o.yaw);
      result.impact_speed = std::max(result.impact_speed, std::max(0.0, ego_vx - o_vx));
    }
    if (lat_overlap && dx > 0.0) {
      const double gap = std::max(0.0, dx - (ego_hl + hl));
      result.headway = std::min(result.headway, gap);
    }
  }
  return result;
}

std::vector<ActorState> initial_world(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<ActorState> world;

  ActorState ego;
  ego.actor_id = 0;
  ego.kind = ActorKind::kEgo;
  ego.speed = spec.ego_initial_speed;
  ego.width = spec.ego_width;
  ego.length = spec.ego_length;
  world.push_back(ego);

  int id = 1;
  for (const ActorSpec& a : spec.actors) {
    ActorState s;
    s.actor_id = id++;
    s.kind = a.kind;
    s.speed = a.initial_speed;
    s.width = a.width;
    s.length = a.length;
    if (a.kind == ActorKind::kPedestrian) {
      // Near-side crossing: starts right of the road (y < 0), walks left, and
      // absent ego braking reaches crossing_fraction of the ego width past the
      // right edge exactly when the ego front bumper arrives.
      s.x = spec.ego_length / 2.0 + a.initial_gap;
      s.yaw = std::numbers::pi / 2.0;
      const double fraction = spec.crossing_fraction.value_or(0.5);
      const double y_cross = -spec.ego_width / 2.0 + fraction * spec.ego_width;
      const double nominal_time =
          spec.ego_initial_speed > 0.0 ? a.initial_gap / spec.ego_initial_speed : 0.0;
      s.y = y_cross - a.initial_speed * nominal_time;
    } else {
      s.x = spec.ego_length / 2.0 + a.initial_gap + a.length / 2.0;
      s.yaw = 0.0;
      if (spec.overlap_fraction)
        s.y = lateral_offset_for_overlap(*spec.overlap_fraction, spec.ego_width, a.width);
    }
    world.push_back(s);
  }
  return world;
}

double scheduled_acceleration(const ActorSpec& spec, double t) {
  if (spec.deceleration > 0.0 && t >= spec.decel_trigger_time) return -spec.deceleration;
  return 0.0;
}

}  // namespace aebsim::scenario
