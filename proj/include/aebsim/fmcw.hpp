#ifndef AEBSIM_FMCW_HPP
#define AEBSIM_FMCW_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace aebsim::fmcw {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Sawtooth (up-sweep) FMCW waveform parameters.
///
/// The sweep slope bandwidth/sweep_time maps a target's round-trip delay to a
/// constant beat frequency inside each sweep; the Doppler shift is read from
/// the phase rotation across sweeps.
struct Waveform {
  double carrier_hz = 77.0e9;
  double bandwidth_hz = 150.0e6;
  double sweep_time_s = 7.33e-6;
  int num_sweeps = 64;
  int samples_per_sweep = 256;

  double sweep_slope() const { return bandwidth_hz / sweep_time_s; }
  double sample_rate() const { return samples_per_sweep / sweep_time_s; }
  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  /// Largest range whose beat frequency stays below half the sample rate.
  double unambiguous_range() const;
  /// Largest |radial speed| whose Doppler stays below half the sweep rate.
  double unambiguous_speed() const;
  /// Doppler bin width expressed as radial speed (one FFT bin across sweeps).
  double speed_bin_width() const;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// Default forward automotive radar: 77 GHz carrier, 150 MHz bandwidth
  /// (1 m range resolution), 100 m+ unambiguous range, 230+ km/h unambiguous
  /// closing speed.
  static Waveform automotive_77ghz() { return Waveform{}; }
};

/// Idealized point reflector. radial_speed > 0 means closing.
struct PointTarget {
  double range_m = 0.0;
  double radial_speed_mps = 0.0;
  double reflect_amplitude = 1.0;
};

/// Dechirped receive buffer: complex samples indexed [sweep][sample].
class BeatCube {
 public:
  BeatCube(int num_sweeps, int samples_per_sweep)
      : num_sweeps_(num_sweeps),
        samples_per_sweep_(samples_per_sweep),
        data_(static_cast<std::size_t>(num_sweeps) * samples_per_sweep) {}

  int num_sweeps() const { return num_sweeps_; }
  int samples_per_sweep() const { return samples_per_sweep_; }

  std::complex<double>& at(int sweep, int sample) {
    return data_[static_cast<std::size_t>(sweep) * samples_per_sweep_ + sample];
  }
  const std::complex<double>& at(int sweep, int sample) const {
    return data_[static_cast<std::size_t>(sweep) * samples_per_sweep_ + sample];
  }

  std::span<const std::complex<double>> samples() const { return data_; }
  std::span<std::complex<double>> samples() { return data_; }

 private:
  int num_sweeps_;
  int samples_per_sweep_;
  std::vector<std::complex<double>> data_;
};

/// One detected reflector in the range-Doppler map. radial_speed > 0 closing.
struct RangeDopplerEstimate {
  double range_m = 0.0;
  double radial_speed_mps = 0.0;
  double peak_magnitude = 0.0;
};

/// Sweep slope (Hz/s) = bandwidth / sweep_time.
double sweep_slope(const Waveform& w);

/// Range from beat frequency: R = c * f_b / (2 * slope).
/// Throws std::domain_error for negative beat frequency or non-positive slope.
double range_from_beat(double beat_hz, double slope_hz_per_s);

/// Beat frequency of a target at the given range: f_b = slope * 2R / c.
double beat_from_range(double range_m, double slope_hz_per_s);

/// Range resolution: dR = c / (2 * bandwidth).
double range_resolution(const Waveform& w);

/// Doppler shift of a closing speed v: f_d = 2 v / lambda = 2 v f_c / c.
double doppler_from_speed(double radial_speed_mps, double carrier_hz);

/// Inverse of doppler_from_speed.
double speed_from_doppler(double doppler_hz, double carrier_hz);

/// Synthesize the dechirped receive cube for a set of point targets.
///
/// Each target contributes a tone at beat frequency slope*2R/c within every
/// sweep, a Doppler phase rotation 2*pi*f_d*sweep_time across sweeps, and the
/// carrier phase of its round-trip delay. Circularly-symmetric Gaussian noise
/// of the given standard deviation is added per sample. Deterministic for a
/// fixed seed. Throws std::invalid_argument when a target lies outside the
/// waveform's unambiguous range/speed bounds.
BeatCube synthesize_beat(const Waveform& w, std::span<const PointTarget> targets,
                         double noise_std, std::uint64_t seed);

/// Range-Doppler estimation: 2-D FFT (fast dimension -> range, slow dimension
/// -> Doppler) with 4x zero-padding, then peak extraction (8x median
/// threshold, strict 3x3 local maximum on the padded grid, sidelobe floor at
/// 0.35x the strongest peak). Estimates are returned strongest first.
/// Throws std::invalid_argument when the cube does not match the waveform.
std::vector<RangeDopplerEstimate> estimate_range_doppler(const BeatCube& cube,
                                                         const Waveform& w);

/// Padded range-Doppler magnitude map (row-major, rows = Doppler bins in
/// [-PRF/2, PRF/2) order, columns = range bins covering [0, unambiguous
/// range]). Used by the CLI demo dump; shares the estimator's FFT path.
struct RangeDopplerMap {
  int num_doppler_bins = 0;
  int num_range_bins = 0;
  std::vector<double> magnitude;        // num_doppler_bins * num_range_bins
  std::vector<double> range_axis_m;     // per column
  std::vector<double> speed_axis_mps;   // per row
};
RangeDopplerMap range_doppler_map(const BeatCube& cube, const Waveform& w);

/// In-place iterative radix-2 FFT. Length must be a power of two.
void fft_inplace(std::span<std::complex<double>> data, bool inverse);

}  // namespace aebsim::fmcw

#endif  // AEBSIM_FMCW_HPP
