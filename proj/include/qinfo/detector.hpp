#ifndef QINFO_DETECTOR_HPP
#define QINFO_DETECTOR_HPP

// Synthetic detector pipeline: heat-current noise synthesis, tone
// injection, Welch spectral estimation, and excess-power detection.
//
// Spectral densities are one-sided and per Hz. A model density given as a
// function of angular frequency w is sampled at f = w / (2 pi).

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qinfo/errors.hpp"
#include "qinfo/infocore.hpp"
#include "qinfo/random_source.hpp"
#include "qinfo/signal.hpp"

namespace qinfo {

inline constexpr std::size_t kMinSynthSamples = 64;

struct TimeSeries {
  double sample_rate = 1.0;  // Hz
  std::vector<double> samples;
  double start_time = 0.0;  // s

  void validate() const {
    detail::require<ValidationError>(sample_rate > 0.0 && std::isfinite(sample_rate), "sample rate must be positive");
    detail::require<ValidationError>(samples.size() >= 2, "time series needs at least 2 samples");
  }

  double time_at(std::size_t n) const { return start_time + static_cast<double>(n) / sample_rate; }
  std::size_t size() const { return samples.size(); }
};

/// Gaussian noise with one-sided PSD `psd_per_hz(f)`, made by shaping the
/// spectrum of white Gaussian noise bin by bin. DC carries no power.
inline TimeSeries synthesize_from_psd(const std::function<double(double)>& psd_per_hz, double duration,
                                      double sample_rate, RandomSource& source) {
  detail::require<ValidationError>(sample_rate > 0.0 && duration > 0.0, "duration and sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  detail::require<ValidationError>(n >= kMinSynthSamples,
                                   "synthesis needs at least " + std::to_string(kMinSynthSamples) + " samples");

  std::vector<double> white(n);
  for (auto& w : white) w = source.gaussian();

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, white);

  const double df = sample_rate / static_cast<double>(n);
  std::vector<double> gain(n / 2 + 1, 0.0);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double s = psd_per_hz(static_cast<double>(k) * df);
    detail::require<ValidationError>(s >= 0.0 && std::isfinite(s), "target PSD must be finite and non-negative");
    const bool nyquist = (n % 2 == 0) && k == n / 2;
    gain[k] = std::sqrt(s * sample_rate * (nyquist ? 1.0 : 0.5));
  }
  for (std::size_t k = 0; k < n; ++k) spec[k] *= gain[std::min(k, n - k)];

  std::vector<std::complex<double>> shaped;
  fft.inv(shaped, spec);
  TimeSeries out{sample_rate, std::vector<double>(n), 0.0};
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = shaped[i].real() + 0.0;  // no negative zeros
  return out;
}

/// Noise whose one-sided PSD is M X(w). M = 0 gives an all-zero series.
inline TimeSeries synthesize_noise(const NoiseModel& model, double M, double duration, double sample_rate,
                                   RandomSource& source) {
  model.validate();
  detail::require<ValidationError>(M >= 0.0, "noise amplitude M must be non-negative");
  return synthesize_from_psd(
      [&](double f) { return M == 0.0 ? 0.0 : M * noise_psd(kTwoPi * f, model); }, duration, sample_rate, source);
}

/// a_k = sqrt(2 E_k rate_scale), E_k = Z_k kB T.
inline double tone_amplitude(const Tone& tone, const SignalModel& model) {
  const double e = information_energy(tone.z, model.temperature(), model.noise.constants);
  return std::sqrt(2.0 * e * model.rate_scale);
}

/// Phase of tone k, drawn from the model's phase seed.
inline double tone_phase(const SignalModel& model, std::size_t k) {
  return kTwoPi * RandomSource(model.phase_seed).derive(k).uniform();
}

/// Adds sum_k a_k sin(w_k t + phi_k).
inline TimeSeries inject_tones(TimeSeries series, const SignalModel& model) {
  series.validate();
  model.validate();
  for (const auto& tone : model.tones)
    if (tone.omega / kTwoPi >= 0.5 * series.sample_rate)
      throw DomainError("tone at " + std::to_string(tone.omega / kTwoPi) + " Hz is at or above Nyquist");
  for (std::size_t k = 0; k < model.tones.size(); ++k) {
    const double a = tone_amplitude(model.tones[k], model);
    const double phi = tone_phase(model, k);
    const double w = model.tones[k].omega;
    for (std::size_t n = 0; n < series.size(); ++n) series.samples[n] += a * std::sin(w * series.time_at(n) + phi);
  }
  return series;
}

enum class WindowKind { rectangular, hann };

inline WindowKind parse_window(const std::string& name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "rectangular" || name == "boxcar") return WindowKind::rectangular;
  throw ValidationError("unknown window '" + name + "' (expected hann or rectangular)");
}

inline std::string to_string(WindowKind w) { return w == WindowKind::hann ? "hann" : "rectangular"; }

/// Periodic (DFT-even) window of length n.
inline std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::hann)
    for (std::size_t i = 0; i < n; ++i)
      w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

struct PsdEstimate {
  std::vector<double> frequencies;  // Hz, k fs / segment_length
  std::vector<double> densities;    // power per Hz
  std::size_t segment_length = 0;
  double overlap = 0.0;
  WindowKind window = WindowKind::hann;
  std::size_t n_segments = 0;
  double sample_rate = 0.0;

  double bin_width() const { return sample_rate / static_cast<double>(segment_length); }
};

/// Averaged one-sided periodogram. Each segment is windowed and scaled by
/// 1 / (fs sum w^2), doubled for bins strictly between DC and Nyquist, so
/// sum(psd) * df recovers the variance of white input.
inline PsdEstimate welch_psd(const TimeSeries& series, std::size_t segment_length, double overlap,
                             WindowKind window = WindowKind::hann) {
  series.validate();
  const std::size_t n = series.size();
  detail::require<ValidationError>(segment_length >= 2 && std::has_single_bit(segment_length),
                                   "segment length must be a power of two >= 2");
  detail::require<ValidationError>(segment_length <= n, "segment length exceeds series length");
  detail::require<ValidationError>(overlap >= 0.0 && overlap <= 0.9, "overlap must lie in [0, 0.9]");

  const auto overlap_samples = static_cast<std::size_t>(std::floor(overlap * static_cast<double>(segment_length)));
  const std::size_t step = std::max<std::size_t>(1, segment_length - overlap_samples);
  const std::size_t n_segments = 1 + (n - segment_length) / step;
  const auto w = make_window(window, segment_length);
  double w2 = 0.0;
  for (double x : w) w2 += x * x;

  const std::size_t bins = segment_length / 2 + 1;
  std::vector<double> acc(bins, 0.0);
  Eigen::FFT<double> fft;
  std::vector<double> buf(segment_length);
  std::vector<std::complex<double>> spec;
  for (std::size_t s = 0; s < n_segments; ++s) {
    const std::size_t off = s * step;
    for (std::size_t i = 0; i < segment_length; ++i) buf[i] = series.samples[off + i] * w[i];
    fft.fwd(spec, buf);
    for (std::size_t k = 0; k < bins; ++k) acc[k] += std::norm(spec[k]);
  }

  PsdEstimate out;
  out.segment_length = segment_length;
  out.overlap = overlap;
  out.window = window;
  out.n_segments = n_segments;
  out.sample_rate = series.sample_rate;
  const double scale = 1.0 / (series.sample_rate * w2 * static_cast<double>(n_segments));
  out.frequencies.resize(bins);
  out.densities.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const bool edge = k == 0 || k == bins - 1;
    out.frequencies[k] = static_cast<double>(k) * out.bin_width();
    out.densities[k] = acc[k] * scale * (edge ? 1.0 : 2.0);
  }
  return out;
}

/// Converts integrated excess power back into energy and information.
/// With T = 0 the information estimate is NaN.
struct EnergyCalibration {
  double rate_scale = 1.0;
  double T = 1.0;
  PhysicalConstants constants = PhysicalConstants::natural();
};

struct Detection {
  std::size_t bin;
  double freq_hz;
  double power;  // measured density at the peak bin
  double floor;  // floor density at the peak bin
  double snr;
  double energy_est;
  double z_est;
};

struct DetectionReport {
  std::vector<Detection> detections;
  double threshold_sigma = 0.0;
  std::size_t n_segments = 0;
};

/// Bins beyond each flagged run included when integrating excess power.
inline constexpr std::size_t kIntegrationMargin = 2;

/// Excess power against a floor sampled on the same grid. The floor's
/// fluctuation is taken from chi-square statistics: floor / sqrt(n_segments).
/// Flagged bins are grouped into contiguous runs; each run yields one
/// detection at its highest-SNR bin. DC and Nyquist are never flagged.
inline DetectionReport detect_excess_power(const PsdEstimate& psd, std::span<const double> floor,
                                           double threshold_sigma, const EnergyCalibration& calib = {}) {
  detail::require<ShapeError>(floor.size() == psd.densities.size(), "noise floor and PSD grids differ in size");
  detail::require<ValidationError>(threshold_sigma > 0.0, "threshold must be positive");
  detail::require<ValidationError>(psd.n_segments >= 1, "PSD reports no averaged segments");

  DetectionReport report;
  report.threshold_sigma = threshold_sigma;
  report.n_segments = psd.n_segments;
  const std::size_t bins = psd.densities.size();
  if (bins < 3) return report;
  const double root_k = std::sqrt(static_cast<double>(psd.n_segments));
  const double df = psd.bin_width();

  auto snr_at = [&](std::size_t k) {
    return floor[k] > 0.0 ? (psd.densities[k] - floor[k]) / (floor[k] / root_k) : 0.0;
  };

  std::size_t k = 1;
  while (k < bins - 1) {
    if (snr_at(k) < threshold_sigma) {
      ++k;
      continue;
    }
    std::size_t lo = k, hi = k, peak = k;
    while (hi + 1 < bins - 1 && snr_at(hi + 1) >= threshold_sigma) {
      ++hi;
      if (snr_at(hi) > snr_at(peak)) peak = hi;
    }
    const std::size_t a = lo > kIntegrationMargin ? lo - kIntegrationMargin : 1;
    const std::size_t b = std::min(hi + kIntegrationMargin, bins - 2);
    double excess = 0.0;
    for (std::size_t j = a; j <= b; ++j) excess += (psd.densities[j] - floor[j]) * df;
    const double energy = excess / calib.rate_scale;
    report.detections.push_back(Detection{peak, psd.frequencies[peak], psd.densities[peak], floor[peak], snr_at(peak),
                                          energy, calib.T > 0.0 ? invert_information(energy, calib.T, calib.constants)
                                                                : std::numeric_limits<double>::quiet_NaN()});
    k = hi + 1;
  }
  return report;
}

inline DetectionReport detect_excess_power(const PsdEstimate& psd, const PsdEstimate& floor, double threshold_sigma,
                                           const EnergyCalibration& calib = {}) {
  detail::require<ShapeError>(floor.frequencies.size() == psd.frequencies.size(),
                              "noise floor and PSD grids differ in size");
  for (std::size_t k = 0; k < psd.frequencies.size(); ++k)
    detail::require<ShapeError>(std::abs(floor.frequencies[k] - psd.frequencies[k]) <=
                                    1e-9 * std::max(1.0, std::abs(psd.frequencies[k])),
                                "noise floor and PSD frequency grids differ");
  return detect_excess_power(psd, std::span<const double>(floor.densities), threshold_sigma, calib);
}

/// M X(2 pi f) on the PSD grid; the DC entry is 0.
inline std::vector<double> analytic_floor(const PsdEstimate& psd, const NoiseModel& model, double M) {
  std::vector<double> out(psd.frequencies.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k)
    if (psd.frequencies[k] > 0.0) out[k] = M * noise_psd(kTwoPi * psd.frequencies[k], model);
  return out;
}

inline DetectionReport detect_excess_power(const PsdEstimate& psd, const NoiseModel& model, double M,
                                           double threshold_sigma, const EnergyCalibration& calib = {}) {
  auto floor = analytic_floor(psd, model, M);
  return detect_excess_power(psd, std::span<const double>(floor), threshold_sigma, calib);
}

}  // namespace qinfo

#endif  // QINFO_DETECTOR_HPP
