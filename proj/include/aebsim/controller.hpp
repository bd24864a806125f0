#ifndef AEBSIM_CONTROLLER_HPP
#define AEBSIM_CONTROLLER_HPP

#include <optional>
#include <string>

#include "aebsim/tracking.hpp"

namespace aebsim::controller {

/// Escalating controller stages. The order is the escalation order.
enum class AebState { kDefault = 0, kFcw = 1, kPb1 = 2, kPb2 = 3, kFb = 4 };

const char* to_string(AebState s);
AebState aeb_state_from_string(const std::string& s);

struct ControllerParams {
  double tau_react = 1.2;           // s, driver reaction delay
  double a_driver = 4.0;            // m/s^2, assumed driver braking
  double a_pb1 = 3.8;               // m/s^2, first-stage partial braking
  double a_pb2 = 5.3;               // m/s^2, second-stage partial braking
  double a_fb = 9.8;                // m/s^2, full braking
  double release_hysteresis = 1.2;  // >= 1, FCW release factor
  double sample_time = 0.05;        // s

  void validate() const;
};

struct Thresholds {
  double t_fcw = 0.0;
  double t_pb1 = 0.0;
  double t_pb2 = 0.0;
  double t_fb = 0.0;
};

struct ControllerOutput {
  AebState state = AebState::kDefault;
  bool fcw_active = false;
  double commanded_deceleration = 0.0;  // m/s^2, >= 0
  std::optional<double> ttc;
  Thresholds thresholds;
};

/// Stopping time at constant deceleration: tau_stop = v_ego / a_brake.
/// Throws std::domain_error for a_brake <= 0 or negative speed.
double stopping_time(double v_ego, double a_brake);

/// FCW activation threshold: T_FCW = tau_react + v_ego / a_driver.
double fcw_threshold(double v_ego, const ControllerParams& p);

/// Time-to-collision: distance / closing speed, or nullopt when the gap is
/// not closing (no predicted collision).
std::optional<double> ttc(const tracking::MioReport& mio);

/// One controller tick.
///
/// Thresholds are evaluated at the current ego speed; the target stage is the
/// highest stage whose threshold exceeds the TTC, and escalation to it is
/// immediate. Braking stages latch while a closing MIO persists (releasing on
/// a TTC rise mid-stop causes brake chatter); the FCW warning releases when
/// ttc > release_hysteresis * t_fcw. The state resets to Default when the MIO
/// is absent, the gap is not closing, or the ego is at standstill.
ControllerOutput step(AebState state, const tracking::MioReport& mio, double v_ego,
                      const ControllerParams& p);

}  // namespace aebsim::controller

#endif  // AEBSIM_CONTROLLER_HPP
