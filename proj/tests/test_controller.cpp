#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "aebsim/controller.hpp"
#include "aebsim/rng.hpp"

using namespace aebsim;
using namespace aebsim::controller;

namespace {

tracking::MioReport mio_at(double distance, double velocity) {
  tracking::MioReport mio;
  mio.track_id = 1;
  mio.relative_distance = distance;
  mio.relative_velocity = velocity;
  return mio;
}

tracking::MioReport no_mio() { return {}; }

/// MIO placed so that ttc() returns exactly the requested value.
tracking::MioReport mio_with_ttc(double ttc_value) { return mio_at(10.0 * ttc_value, -10.0); }

}  // namespace

TEST_CASE("stopping time follows v/a") {
  CHECK(stopping_time(0.0, 9.8) == 0.0);
  CHECK(stopping_time(13.89, 9.8) == doctest::Approx(1.417).epsilon(1e-3));
  CHECK(stopping_time(13.89, 4.9) == doctest::Approx(2.0 * stopping_time(13.89, 9.8)));
  CHECK_THROWS_AS(stopping_time(10.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(stopping_time(10.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(stopping_time(-1.0, 9.8), std::domain_error);
}

TEST_CASE("FCW threshold adds the reaction delay to the driver stopping time") {
  ControllerParams p;
  CHECK(fcw_threshold(0.0, p) == doctest::Approx(p.tau_react));
  CHECK(fcw_threshold(13.89, p) == doctest::Approx(4.672).epsilon(1e-3));

  SUBCASE("dominates the PB1 stopping time whenever a_driver <= a_pb1") {
    ControllerParams gentle = p;
    gentle.a_driver = 3.0;  // below a_pb1, so dominance holds for every speed
    RandomStream rng(5);
    for (int i = 0; i < 200; ++i) {
      const double v = 200.0 * rng.uniform();
      CHECK(fcw_threshold(v, gentle) > stopping_time(v, gentle.a_pb1));
    }
  }

  SUBCASE("default parameters keep the ordering across the operating range") {
    // a_driver (4.0) slightly exceeds a_pb1 (3.8); tau_react still keeps
    // t_fcw above t_pb1 for every speed below ~91 m/s.
    RandomStream rng(6);
    for (int i = 0; i < 200; ++i) {
      const double v = 60.0 * rng.uniform();
      CHECK(fcw_threshold(v, p) > stopping_time(v, p.a_pb1));
    }
  }
}

TEST_CASE("TTC from the MIO report") {
  CHECK(*ttc(mio_at(24.0, -12.0)) == doctest::Approx(2.0));
  CHECK(!ttc(mio_at(24.0, 3.0)).has_value());
  CHECK(!ttc(mio_at(24.0, 0.0)).has_value());
  CHECK(*ttc(mio_at(0.0, -5.0)) == 0.0);
  CHECK(!ttc(no_mio()).has_value());
}

TEST_CASE("controller step") {
  ControllerParams p;
  const double v50 = 13.89;

  SUBCASE("no MIO is Default with zero deceleration") {
    const ControllerOutput out = step(AebState::kFb, no_mio(), v50, p);
    CHECK(out.state == AebState::kDefault);
    CHECK(out.commanded_deceleration == 0.0);
    CHECK(!out.fcw_active);
    CHECK(!out.ttc.has_value());
  }

  SUBCASE("ttc between the PB1 and PB2 thresholds engages PB1") {
    // Thresholds at 13.89 m/s: (4.672, 3.655, 2.621, 1.417).
    const ControllerOutput out = step(AebState::kDefault, mio_with_ttc(3.0), v50, p);
    CHECK(out.thresholds.t_fcw == doctest::Approx(4.672).epsilon(1e-3));
    CHECK(out.thresholds.t_pb1 == doctest::Approx(3.655).epsilon(1e-3));
    CHECK(out.thresholds.t_pb2 == doctest::Approx(2.621).epsilon(1e-3));
    CHECK(out.thresholds.t_fb == doctest::Approx(1.417).epsilon(1e-3));
    CHECK(out.state == AebState::kPb1);
    CHECK(out.commanded_deceleration == p.a_pb1);
    CHECK(out.fcw_active);
  }

  SUBCASE("ttc below the FB threshold engages full braking") {
    const ControllerOutput out = step(AebState::kDefault, mio_with_ttc(1.0), v50, p);
    CHECK(out.state == AebState::kFb);
    CHECK(out.commanded_deceleration == doctest::Approx(9.8));
  }

  SUBCASE("escalation is immediate, braking stays latched while closing") {
    ControllerOutput out = step(AebState::kDefault, mio_with_ttc(4.0), v50, p);
    CHECK(out.state == AebState::kFcw);
    out = step(out.state, mio_with_ttc(2.0), v50, p);
    CHECK(out.state == AebState::kPb2);
    // TTC recovers while still closing: the braking stage holds.
    out = step(out.state, mio_with_ttc(8.0), v50, p);
    CHECK(out.state == AebState::kPb2);
  }

  SUBCASE("FCW releases only beyond the hysteresis margin") {
    const double t_fcw = fcw_threshold(v50, p);
    ControllerOutput out = step(AebState::kFcw, mio_with_ttc(1.1 * t_fcw), v50, p);
    CHECK(out.state == AebState::kFcw);  // above threshold but inside hysteresis
    out = step(AebState::kFcw, mio_with_ttc(1.3 * t_fcw), v50, p);
    CHECK(out.state == AebState::kDefault);
  }

  SUBCASE("opening gap or standstill resets to Default") {
    CHECK(step(AebState::kFb, mio_at(5.0, 2.0), v50, p).state == AebState::kDefault);
    CHECK(step(AebState::kFb, mio_with_ttc(1.0), 0.0, p).state == AebState::kDefault);
  }

  SUBCASE("step is a pure function of its arguments") {
    const ControllerOutput a = step(AebState::kPb1, mio_with_ttc(2.5), v50, p);
    const ControllerOutput b = step(AebState::kPb1, mio_with_ttc(2.5), v50, p);
    CHECK(a.state == b.state);
    CHECK(a.commanded_deceleration == b.commanded_deceleration);
    CHECK(a.thresholds.t_fcw == b.thresholds.t_fcw);
  }
}

TEST_CASE("threshold ordering holds across the speed range") {
  ControllerParams p;
  RandomStream rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = 1e-6 + 60.0 * rng.uniform();
    const ControllerOutput out = step(AebState::kDefault, no_mio(), v, p);
    CHECK(out.thresholds.t_fcw > out.thresholds.t_pb1);
    CHECK(out.thresholds.t_pb1 > out.thresholds.t_pb2);
    CHECK(out.thresholds.t_pb2 > out.thresholds.t_fb);
  }
}

TEST_CASE("commanded deceleration is non-decreasing in stage") {
  ControllerParams p;
  const double ttcs[] = {10.0, 4.0, 3.0, 2.0, 1.0};  // Default..FB at 13.89 m/s
  double prev = -1.0;
  for (double t : ttcs) {
    const ControllerOutput out = step(AebState::kDefault, mio_with_ttc(t), 13.89, p);
    CHECK(out.commanded_deceleration >= prev);
    CHECK(out.fcw_active == (out.state >= AebState::kFcw));
    prev = out.commanded_deceleration;
  }
}

TEST_CASE("parameter validation") {
  ControllerParams p;
  CHECK_NOTHROW(p.validate());
  p.a_pb1 = p.a_fb + 1.0;  // breaks the stage ordering
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
