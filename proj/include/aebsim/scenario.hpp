#ifndef AEBSIM_SCENARIO_HPP
#define AEBSIM_SCENARIO_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aebsim::scenario {

enum class ActorKind { kEgo, kVehicle, kPedestrian };

const char* to_string(ActorKind kind);
ActorKind actor_kind_from_string(const std::string& s);

/// Ground-truth state of one traffic participant. Positions are the footprint
/// center in the world frame (x longitudinal, y lateral); speed is along yaw.
struct ActorState {
  int actor_id = 0;
  ActorKind kind = ActorKind::kVehicle;
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double speed = 0.0;          // m/s, never negative
  double acceleration = 0.0;   // m/s^2, signed along yaw
  double width = 1.8;
  double length = 4.7;
};

/// One scripted actor of a scenario. initial_gap is the longitudinal
/// bumper-to-bumper gap to the ego front bumper for vehicles, and the
/// front-bumper-to-center gap for pedestrians.
struct ActorSpec {
  ActorKind kind = ActorKind::kVehicle;
  double initial_gap = 0.0;
  double initial_speed = 0.0;
  double deceleration = 0.0;        // magnitude applied from trigger time
  double decel_trigger_time = 0.0;  // s
  double width = 1.8;
  double length = 4.7;
};

/// Executable scenario description.
struct ScenarioSpec {
  std::string name;
  double duration = 10.0;
  double ego_initial_speed = 0.0;
  double ego_width = 1.8;
  double ego_length = 4.7;
  std::vector<ActorSpec> actors;
  /// Fraction of the target's width covered by the ego frontal width at the
  /// collision point (car-to-car scenarios).
  std::optional<double> overlap_fraction;
  /// Pedestrian crossing progress across the ego width at nominal collision
  /// time, measured from the near (right) edge.
  std::optional<double> crossing_fraction;

  void validate() const;
};

struct CollisionReport {
  bool collided = false;
  std::optional<double> time;
  std::optional<double> impact_speed;
  double min_headway = 0.0;
};

/// The five Euro NCAP scenarios, 10 s each.
std::vector<ScenarioSpec> catalog();

/// Find a catalog scenario by name; nullopt when unknown.
std::optional<ScenarioSpec> catalog_scenario(const std::string& name);

/// Centerline offset that leaves overlap_fraction of the target's width
/// covered by the ego frontal width:
///   offset = (ego_width + target_width)/2 - overlap_fraction * target_width.
/// Throws std::invalid_argument for a fraction outside [0, 1].
double lateral_offset_for_overlap(double overlap_fraction, double ego_width,
                                  double target_width);

/// Constant-acceleration step with trapezoidal position update; speed clamps
/// at zero (a braking actor stops, it does not reverse).
ActorState step_actor(const ActorState& a, double dt);

/// Collision/headway fragment for one instant. Axis-aligned rectangle
/// intersection (catalog actors travel axis-aligned); headway is the
/// longitudinal bumper-to-bumper gap to the nearest laterally-overlapping
/// actor ahead, +inf when none.
struct CollisionCheck {
  bool collided = false;
  double impact_speed = 0.0;  // relative closing speed along x at contact
  double headway = 0.0;
};
CollisionCheck check_collision(const ActorState& ego, std::span<const ActorState> others);

/// Initial world state: element 0 is the ego at the origin, followed by the
/// scripted actors placed per the spec's gaps and lateral rules.
std::vector<ActorState> initial_world(const ScenarioSpec& spec);

/// Scheduled acceleration command of scripted actor `index` at time t.
double scheduled_acceleration(const ActorSpec& spec, double t);

}  // namespace aebsim::scenario

#endif  // AEBSIM_SCENARIO_HPP
