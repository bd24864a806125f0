#include "aebsim/fmcw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aebsim/rng.hpp"

namespace aebsim::fmcw {

namespace {

constexpr int kPaddingFactor = 4;
constexpr double kMedianThresholdFactor = 8.0;
// Rejects rectangular-window sidelobes (first sidelobe 0.217 of the peak) and
// two-tone interference shoulders (measured <= 0.29) while keeping genuine
// peaks of comparable reflectivity.
constexpr double kSidelobeFloor = 0.35;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void Waveform::validate() const {
  if (carrier_hz <= 0.0) throw std::invalid_argument("carrier frequency must be positive");
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (sweep_time_s <= 0.0) throw std::invalid_argument("sweep time must be positive");
  if (num_sweeps <= 0) throw std::invalid_argument("num_sweeps must be positive");
  if (!is_power_of_two(samples_per_sweep))
    throw std::invalid_argument("samples_per_sweep must be a power of two");
}

double Waveform::unambiguous_range() const {
  // Beat frequencies up to fs/2 map one-to-one onto range.
  return kSpeedOfLight * (sample_rate() / 2.0) / (2.0 * sweep_slope());
}

double Waveform::unambiguous_speed() const {
  const double max_doppler = 0.5 / sweep_time_s;  // +-PRF/2
  return speed_from_doppler(max_doppler, carrier_hz);
}

double Waveform::speed_bin_width() const {
  return speed_from_doppler(1.0 / (sweep_time_s * num_sweeps), carrier_hz);
}

double sweep_slope(const Waveform& w) {
  w.validate();
  return w.sweep_slope();
}

double range_from_beat(double beat_hz, double slope_hz_per_s) {
  if (beat_hz < 0.0) throw std::domain_error("beat frequency must be non-negative");
  if (slope_hz_per_s <= 0.0) throw std::domain_error("sweep slope must be positive");
  return kSpeedOfLight * beat_hz / (2.0 * slope_hz_per_s);
}

double beat_from_range(double range_m, double slope_hz_per_s) {
  if (range_m < 0.0) throw std::domain_error("range must be non-negative");
  if (slope_hz_per_s <= 0.0) throw std::domain_error("sweep slope must be positive");
  return slope_hz_per_s * 2.0 * range_m / kSpeedOfLight;
}

double range_resolution(const Waveform& w) {
  w.validate();
  return kSpeedOfLight / (2.0 * w.bandwidth_hz);
}

double doppler_from_speed(double radial_speed_mps, double carrier_hz) {
  if (carrier_hz <= 0.0) throw std::domain_error("carrier frequency must be positive");
  return 2.0 * radial_speed_mps * carrier_hz / kSpeedOfLight;
}

double speed_from_doppler(double doppler_hz, double carrier_hz) {
  if (carrier_hz <= 0.0) throw std::domain_error("carrier frequency must be positive");
  return doppler_hz * kSpeedOfLight / (2.0 * carrier_hz);
}

void fft_inplace(std::span<std::complex<double>> data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0) throw std::invalid_argument("FFT length must be a power of two");

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[i + k];
        const std::complex<double> v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= scale;
  }
}

BeatCube synthesize_beat(const Waveform& w, std::span<const PointTarget> targets,
                         double noise_std, std::uint64_t seed) {
  w.validate();
  if (noise_std < 0.0) throw std::invalid_argument("noise_std must be non-negative");

  const double slope = w.sweep_slope();
  const double fs = w.sample_rate();
  const double r_max = w.unambiguous_range();
  const double v_max = w.unambiguous_speed();

  for (const PointTarget& t : targets) {
    if (t.range_m < 0.0 || t.range_m > r_max)
      throw std::invalid_argument("target range outside unambiguous bounds");
    if (std::abs(t.radial_speed_mps) > v_max)
      throw std::invalid_argument("target speed outside unambiguous bounds");
  }

  BeatCube cube(w.num_sweeps, w.samples_per_sweep);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  for (const PointTarget& t : targets) {
    const double beat = beat_from_range(t.range_m, slope);
    const double doppler = doppler_from_speed(t.radial_speed_mps, w.carrier_hz);
    // Carrier phase of the round-trip delay; keeps multi-target interference
    // physical. Reduced mod 1 cycle before the 2*pi multiply to preserve
    // precision (77 GHz * delay is ~1e4 cycles).
    const double cycles = w.carrier_hz * 2.0 * t.range_m / kSpeedOfLight;
    const double phi0 = kTwoPi * (cycles - std::floor(cycles));
    for (int m = 0; m < w.num_sweeps; ++m) {
      const double sweep_phase = phi0 + kTwoPi * doppler * w.sweep_time_s * m;
      for (int n = 0; n < w.samples_per_sweep; ++n) {
        const double phase = sweep_phase + kTwoPi * beat * (n / fs);
        cube.at(m, n) += t.reflect_amplitude *
                         std::complex<double>(std::cos(phase), std::sin(phase));
      }
    }
  }

  if (noise_std > 0.0) {
    RandomStream rng(seed);
    const double per_component = noise_std / std::sqrt(2.0);
    for (auto& sample : cube.samples()) {
      const double re = rng.normal(0.0, per_component);
      const double im = rng.normal(0.0, per_component);
      sample += std::complex<double>(re, im);
    }
  }
  return cube;
}

namespace {

/// Zero-padded 2-D FFT magnitude of the cube. Rows are Doppler bins in FFT
/// order (0..pad_sweeps-1, wrap-around), columns are range bins.
struct PaddedSpectrum {
  int rows = 0;
  int cols = 0;
  std::vector<double> mag;

  double at(int d, int r) const { return mag[static_cast<std::size_t>(d) * cols + r]; }
};

PaddedSpectrum padded_spectrum(const BeatCube& cube, const Waveform& w) {
  if (cube.num_sweeps() != w.num_sweeps || cube.samples_per_sweep() != w.samples_per_sweep)
    throw std::invalid_argument("beat cube dimensions do not match the waveform");

  const int nr = next_power_of_two(kPaddingFactor * w.samples_per_sweep);
  const int nd = next_power_of_two(kPaddingFactor * w.num_sweeps);

  // Range FFT per sweep.
  std::vector<std::complex<double>> stage(static_cast<std::size_t>(w.num_sweeps) * nr);
  std::vector<std::complex<double>> row(nr);
  for (int m = 0; m < w.num_sweeps; ++m) {
    std::fill(row.begin(), row.end(), std::complex<double>(0.0, 0.0));
    for (int n = 0; n < w.samples_per_sweep; ++n) row[n] = cube.at(m, n);
    fft_inplace(row, false);
    std::copy(row.begin(), row.end(), stage.begin() + static_cast<std::size_t>(m) * nr);
  }

  // Doppler FFT per range column.
  PaddedSpectrum spec;
  spec.rows = nd;
  spec.cols = nr;
  spec.mag.resize(static_cast<std::size_t>(nd) * nr);
  std::vector<std::complex<double>> col(nd);
  for (int r = 0; r < nr; ++r) {
    std::fill(col.begin(), col.end(), std::complex<double>(0.0, 0.0));
    for (int m = 0; m < w.num_sweeps; ++m) col[m] = stage[static_cast<std::size_t>(m) * nr + r];
    fft_inplace(col, false);
    for (int d = 0; d < nd; ++d)
      spec.mag[static_cast<std::size_t>(d) * nr + r] = std::abs(col[d]);
  }
  return spec;
}

}  // namespace

std::vector<RangeDopplerEstimate> estimate_range_doppler(const BeatCube& cube,
                                                         const Waveform& w) {
  w.validate();
  const PaddedSpectrum spec = padded_spectrum(cube, w);
  const int nd = spec.rows;
  const int nr = spec.cols;

  std::vector<double> sorted(spec.mag);
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double threshold = kMedianThresholdFactor * median;
  const double global_max = *std::max_element(spec.mag.begin(), spec.mag.end());

  const double slope = w.sweep_slope();
  const double fs = w.sample_rate();
  const double prf = 1.0 / w.sweep_time_s;
  const int max_range_bin = nr / 2;  // beat frequencies in [0, fs/2]

  std::vector<RangeDopplerEstimate> estimates;
  for (int d = 0; d < nd; ++d) {
    for (int r = 0; r <= max_range_bin; ++r) {
      const double v = spec.at(d, r);
      if (v <= threshold || v < kSidelobeFloor * global_max) continue;
      bool local_max = true;
      for (int dd = -1; dd <= 1 && local_max; ++dd) {
        for (int dr = -1; dr <= 1; ++dr) {
          if (dd == 0 && dr == 0) continue;
          const int rr = r + dr;
          if (rr < 0 || rr >= nr) continue;  // range does not wrap
          const int dw = (d + dd + nd) % nd;  // Doppler wraps
          if (spec.at(dw, rr) >= v) {
            local_max = false;
            break;
          }
        }
      }
      if (!local_max) continue;

      const double beat = r * fs / nr;
      const int d_signed = (d < nd / 2) ? d : d - nd;
      const double doppler = d_signed * prf / nd;
      estimates.push_back({range_from_beat(beat, slope),
                           speed_from_doppler(doppler, w.carrier_hz), v});
    }
  }
  std::sort(estimates.begin(), estimates.end(),
            [](const RangeDopplerEstimate& a, const RangeDopplerEstimate& b) {
              return a.peak_magnitude > b.peak_magnitude;
            });
  return estimates;
}

RangeDopplerMap range_doppler_map(const BeatCube& cube, const Waveform& w) {
  w.validate();
  const PaddedSpectrum spec = padded_spectrum(cube, w);
  const int nd = spec.rows;
  const int nr = spec.cols;
  const int cols = nr / 2 + 1;

  RangeDopplerMap map;
  map.num_doppler_bins = nd;
  map.num_range_bins = cols;
  map.magnitude.resize(static_cast<std::size_t>(nd) * cols);
  map.range_axis_m.resize(cols);
  map.speed_axis_mps.resize(nd);

  const double slope = w.sweep_slope();
  const double fs = w.sample_rate();
  const double prf = 1.0 / w.sweep_time_s;

  for (int r = 0; r < cols; ++r) map.range_axis_m[r] = range_from_beat(r * fs / nr, slope);
  // Rows ordered from -PRF/2 to +PRF/2 (fftshift).
  for (int i = 0; i < nd; ++i) {
    const int d = (i + nd / 2) % nd;
    const int d_signed = (d < nd / 2) ? d : d - nd;
    map.speed_axis_mps[i] = speed_from_doppler(d_signed * prf / nd, w.carrier_hz);
    for (int r = 0; r < cols; ++r)
      map.magnitude[static_cast<std::size_t>(i) * cols + r] = spec.at(d, r);
  }
  return map;
}

}  // namespace aebsim::fmcw
