#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>
#include <vector>

#include "aebsim/fmcw.hpp"
#include "aebsim/rng.hpp"

using namespace aebsim;
using namespace aebsim::fmcw;

namespace {

Waveform default_waveform() { return Waveform::automotive_77ghz(); }

/// Index of the strongest bin of one sweep's unpadded spectrum.
int sweep_peak_bin(const BeatCube& cube, const Waveform& w, int sweep) {
  std::vector<std::complex<double>> row(w.samples_per_sweep);
  for (int n = 0; n < w.samples_per_sweep; ++n) row[n] = cube.at(sweep, n);
  fft_inplace(row, false);
  int best = 0;
  for (int n = 1; n < w.samples_per_sweep; ++n)
    if (std::abs(row[n]) > std::abs(row[best])) best = n;
  return best;
}

}  // namespace

TEST_CASE("sweep slope is bandwidth over sweep time") {
  Waveform w = default_waveform();
  // 150 MHz / 7.33 us, by hand: 2.0463847203...e13 Hz/s.
  CHECK(sweep_slope(w) == doctest::Approx(2.0464e13).epsilon(1e-4));

  w.sweep_time_s = 150e-6;
  CHECK(sweep_slope(w) == doctest::Approx(1.0e12).epsilon(1e-12));
}

TEST_CASE("slope times sweep time recovers the bandwidth") {
  RandomStream rng(7);
  for (int i = 0; i < 50; ++i) {
    Waveform w = default_waveform();
    w.bandwidth_hz = 50e6 + 400e6 * rng.uniform();
    w.sweep_time_s = 1e-6 + 100e-6 * rng.uniform();
    CHECK(sweep_slope(w) * w.sweep_time_s == doctest::Approx(w.bandwidth_hz).epsilon(1e-12));
  }
}

TEST_CASE("range from beat frequency") {
  const double slope = 2.0464e13;
  CHECK(range_from_beat(0.0, slope) == 0.0);
  // Inverting f_b = slope * 2R/c for R = 50 m gives f_b = 6.8255 MHz.
  CHECK(range_from_beat(6.8255e6, slope) == doctest::Approx(50.0).epsilon(1e-4));
  CHECK_THROWS_AS(range_from_beat(-1.0, slope), std::domain_error);

  SUBCASE("round trip to 1e-9 relative") {
    RandomStream rng(11);
    for (int i = 0; i < 100; ++i) {
      const double f = 1e3 + 2e7 * rng.uniform();
      CHECK(beat_from_range(range_from_beat(f, slope), slope) ==
            doctest::Approx(f).epsilon(1e-9));
    }
  }
}

TEST_CASE("range resolution c over twice the bandwidth") {
  Waveform w = default_waveform();
  CHECK(range_resolution(w) == doctest::Approx(0.99931).epsilon(1e-4));
  CHECK(range_resolution(w) <= 1.0);  // resolves targets at least 1 m apart

  Waveform wide = w;
  wide.bandwidth_hz = 300e6;
  CHECK(range_resolution(wide) == doctest::Approx(0.4997).epsilon(1e-3));
  CHECK(range_resolution(wide) == doctest::Approx(range_resolution(w) / 2.0).epsilon(1e-12));
}

TEST_CASE("doppler from closing speed") {
  CHECK(doppler_from_speed(0.0, 77e9) == 0.0);
  // 230 km/h = 63.89 m/s at 77 GHz: 2 v / lambda.
  CHECK(doppler_from_speed(63.89, 77e9) == doctest::Approx(32.82e3).epsilon(1e-3));
  CHECK(doppler_from_speed(30.0, 77e9) == doctest::Approx(15.41e3).epsilon(1e-3));
  CHECK(speed_from_doppler(doppler_from_speed(12.3, 77e9), 77e9) ==
        doctest::Approx(12.3).epsilon(1e-12));
}

TEST_CASE("default waveform meets the coverage requirements") {
  const Waveform w = default_waveform();
  CHECK(w.carrier_hz == 77e9);
  CHECK(w.unambiguous_range() >= 100.0);
  CHECK(w.unambiguous_speed() >= 230.0 / 3.6);
  CHECK(w.sample_rate() >= 2.0 * beat_from_range(100.0, w.sweep_slope()));
}

TEST_CASE("synthesize_beat basics") {
  const Waveform w = default_waveform();

  SUBCASE("no targets and no noise gives the zero cube") {
    const BeatCube cube = synthesize_beat(w, {}, 0.0, 1);
    for (const auto& s : cube.samples()) CHECK(std::abs(s) == 0.0);
  }

  SUBCASE("single target is a pure tone peaking in the nearest bin") {
    const PointTarget target{50.0, 0.0, 1.0};
    const BeatCube cube = synthesize_beat(w, {&target, 1}, 0.0, 1);
    const double beat = beat_from_range(50.0, w.sweep_slope());
    const double bin_width = w.sample_rate() / w.samples_per_sweep;
    const int expected = static_cast<int>(std::lround(beat / bin_width));
    CHECK(sweep_peak_bin(cube, w, 0) == expected);
    CHECK(sweep_peak_bin(cube, w, w.num_sweeps - 1) == expected);
  }

  SUBCASE("identical seeds give bit-identical cubes") {
    const PointTarget target{30.0, 10.0, 1.0};
    const BeatCube a = synthesize_beat(w, {&target, 1}, 0.5, 42);
    const BeatCube b = synthesize_beat(w, {&target, 1}, 0.5, 42);
    const auto sa = a.samples();
    const auto sb = b.samples();
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i] == sb[i]);
  }

  SUBCASE("out-of-bounds targets are rejected") {
    const PointTarget far{w.unambiguous_range() + 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(synthesize_beat(w, {&far, 1}, 0.0, 1), std::invalid_argument);
    const PointTarget fast{10.0, w.unambiguous_speed() + 1.0, 1.0};
    CHECK_THROWS_AS(synthesize_beat(w, {&fast, 1}, 0.0, 1), std::invalid_argument);
  }
}

TEST_CASE("synthesis is linear in the target set") {
  const Waveform w = default_waveform();
  const PointTarget a{30.0, 5.0, 1.0};
  const PointTarget b{60.0, -10.0, 0.7};
  const BeatCube cube_a = synthesize_beat(w, {&a, 1}, 0.0, 1);
  const BeatCube cube_b = synthesize_beat(w, {&b, 1}, 0.0, 1);
  const std::vector<PointTarget> both{a, b};
  const BeatCube cube_ab = synthesize_beat(w, both, 0.0, 1);

  double max_abs = 0.0;
  for (const auto& s : cube_ab.samples()) max_abs = std::max(max_abs, std::abs(s));
  for (std::size_t i = 0; i < cube_ab.samples().size(); ++i) {
    const std::complex<double> sum = cube_a.samples()[i] + cube_b.samples()[i];
    CHECK(std::abs(cube_ab.samples()[i] - sum) <= 1e-12 * max_abs);
  }
}

TEST_CASE("FFT round trip is the identity") {
  RandomStream rng(3);
  std::vector<std::complex<double>> data(1024);
  for (auto& x : data) x = {rng.normal(), rng.normal()};
  const std::vector<std::complex<double>> original = data;
  fft_inplace(data, false);
  fft_inplace(data, true);
  double max_abs = 0.0;
  for (const auto& x : original) max_abs = std::max(max_abs, std::abs(x));
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(std::abs(data[i] - original[i]) <= 1e-9 * max_abs);
}

TEST_CASE("range-Doppler estimation") {
  const Waveform w = default_waveform();

  SUBCASE("single target round trip") {
    const PointTarget target{50.0, 20.0, 1.0};
    const BeatCube cube = synthesize_beat(w, {&target, 1}, 0.0, 1);
    const auto estimates = estimate_range_doppler(cube, w);
    REQUIRE(estimates.size() == 1);
    CHECK(std::abs(estimates[0].range_m - 50.0) <= range_resolution(w) / 2.0);
    CHECK(std::abs(estimates[0].radial_speed_mps - 20.0) <= w.speed_bin_width() / 2.0);
  }

  SUBCASE("two targets more than a resolution cell apart resolve") {
    const std::vector<PointTarget> targets{{50.0, 0.0, 1.0}, {52.0, 0.0, 1.0}};
    const auto estimates = estimate_range_doppler(synthesize_beat(w, targets, 0.0, 1), w);
    REQUIRE(estimates.size() == 2);
    const double lo = std::min(estimates[0].range_m, estimates[1].range_m);
    const double hi = std::max(estimates[0].range_m, estimates[1].range_m);
    CHECK(std::abs(lo - 50.0) <= 0.5);
    CHECK(std::abs(hi - 52.0) <= 0.5);
  }

  SUBCASE("empty cube yields an empty list") {
    const BeatCube cube = synthesize_beat(w, {}, 0.0, 1);
    CHECK(estimate_range_doppler(cube, w).empty());
  }

  SUBCASE("dimension mismatch is rejected") {
    const BeatCube cube(8, 32);
    CHECK_THROWS_AS(estimate_range_doppler(cube, w), std::invalid_argument);
  }
}

TEST_CASE("round-trip property over random in-bounds targets") {
  const Waveform w = default_waveform();
  const double range_tol = kSpeedOfLight / (4.0 * w.bandwidth_hz);
  const double speed_tol = w.speed_bin_width() / 2.0;

  RandomStream rng(2024);
  for (int i = 0; i < 25; ++i) {
    const PointTarget target{1.0 + 99.0 * rng.uniform(), -63.9 + 127.8 * rng.uniform(), 1.0};
    const BeatCube cube = synthesize_beat(w, {&target, 1}, 0.0, 1);
    const auto estimates = estimate_range_doppler(cube, w);
    REQUIRE_MESSAGE(!estimates.empty(), "target at range ", target.range_m);
    CHECK(std::abs(estimates[0].range_m - target.range_m) <= range_tol);
    CHECK(std::abs(estimates[0].radial_speed_mps - target.radial_speed_mps) <= speed_tol);
  }
}
