#include "aebsim/controller.hpp"

#include <stdexcept>

namespace aebsim::controller {

namespace {

AebState target_stage(const std::optional<double>& ttc_value, const Thresholds& thr) {
  if (!ttc_value) return AebState::kDefault;
  const double t = *ttc_value;
  if (t < thr.t_fb) return AebState::kFb;
  if (t < thr.t_pb2) return AebState::kPb2;
  if (t < thr.t_pb1) return AebState::kPb1;
  if (t < thr.t_fcw) return AebState::kFcw;
  return AebState::kDefault;
}

double stage_deceleration(AebState s, const ControllerParams& p) {
  switch (s) {
    case AebState::kPb1: return p.a_pb1;
    case AebState::kPb2: return p.a_pb2;
    case AebState::kFb: return p.a_fb;
    default: return 0.0;
  }
}

}  // namespace

const char* to_string(AebState s) {
  switch (s) {
    case AebState::kDefault: return "Default";
    case AebState::kFcw: return "FCW";
    case AebState::kPb1: return "PB1";
    case AebState::kPb2: return "PB2";
    case AebState::kFb: return "FB";
  }
  return "unknown";
}

AebState aeb_state_from_string(const std::string& s) {
  if (s == "Default") return AebState::kDefault;
  if (s == "FCW") return AebState::kFcw;
  if (s == "PB1") return AebState::kPb1;
  if (s == "PB2") return AebState::kPb2;
  if (s == "FB") return AebState::kFb;
  throw std::invalid_argument("unknown AEB state: " + s);
}

void ControllerParams::validate() const {
  if (tau_react < 0.0) throw std::invalid_argument("tau_react must be non-negative");
  if (a_driver <= 0.0) throw std::invalid_argument("a_driver must be positive");
  if (!(0.0 < a_pb1 && a_pb1 <= a_pb2 && a_pb2 <= a_fb))
    throw std::invalid_argument("braking stages must satisfy 0 < a_pb1 <= a_pb2 <= a_fb");
  if (release_hysteresis < 1.0)
    throw std::invalid_argument("release_hysteresis must be >= 1");
  if (sample_time <= 0.0) throw std::invalid_argument("sample_time must be positive");
}

double stopping_time(double v_ego, double a_brake) {
  if (a_brake <= 0.0) throw std::domain_error("braking deceleration must be positive");
  if (v_ego < 0.0) throw std::domain_error("ego speed must be non-negative");
  return v_ego / a_brake;
}

double fcw_threshold(double v_ego, const ControllerParams& p) {
  return p.tau_react + stopping_time(v_ego, p.a_driver);
}

std::optional<double> ttc(const tracking::MioReport& mio) {
  if (!mio.track_id) return std::nullopt;
  if (mio.relative_velocity >= 0.0) return std::nullopt;  // opening gap
  return mio.relative_distance / -mio.relative_velocity;
}

ControllerOutput step(AebState state, const tracking::MioReport& mio, double v_ego,
                      const ControllerParams& p) {
  ControllerOutput out;
  out.thresholds = Thresholds{fcw_threshold(v_ego, p), stopping_time(v_ego, p.a_pb1),
                              stopping_time(v_ego, p.a_pb2), stopping_time(v_ego, p.a_fb)};
  out.ttc = ttc(mio);

  AebState next = state;
  if (!mio.track_id || !out.ttc || v_ego <= 0.0) {
    next = AebState::kDefault;
  } else {
    const AebState target = target_stage(out.ttc, out.thresholds);
    if (target > state) {
      next = target;
    } else if (target < state) {
      if (state == AebState::kFcw && *out.ttc > p.release_hysteresis * out.thresholds.t_fcw)
        next = target;
      // Braking stages stay latched while the MIO keeps closing.
    }
  }

  out.state = next;
  out.fcw_active = next >= AebState::kFcw;
  out.commanded_deceleration = stage_deceleration(next, p);
  return out;
}

}  // namespace aebsim::controller
