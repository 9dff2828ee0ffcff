#include "emgtrf/preprocess.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "emgtrf/kernels.hpp"

namespace emgtrf::preprocess {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread safe; execution of independent plans is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

void require_even_order(int order) {
  if (order < 2 || order % 2 != 0) {
    throw std::invalid_argument("butterworth order must be a positive even integer, got " +
                                std::to_string(order));
  }
}

// Butterworth prototype section quality factors: Q_k = 1 / (2 sin(theta_k))
// with theta_k = pi (2k - 1) / (2n), k = 1..n/2.
std::vector<double> butterworth_qs(int order) {
  std::vector<double> qs;
  for (int k = 1; k <= order / 2; ++k) {
    qs.push_back(1.0 / (2.0 * std::sin(kPi * (2.0 * k - 1.0) / (2.0 * order))));
  }
  return qs;
}

void check_cutoff(double cutoff_hz, double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
    throw std::invalid_argument("cutoff " + std::to_string(cutoff_hz) +
                                " Hz outside (0, Nyquist) for rate " +
                                std::to_string(sample_rate_hz));
  }
}

}  // namespace

void FilterSpec::validate(double sample_rate_hz) const {
  require_even_order(butterworth_order);
  if (!(band_low_hz > 0.0) || !(band_low_hz < band_high_hz)) {
    throw std::invalid_argument("band edges must satisfy 0 < low < high");
  }
  if (!(band_high_hz < sample_rate_hz / 2.0)) {
    throw std::invalid_argument("band_high_hz " + std::to_string(band_high_hz) +
                                " at or above Nyquist for rate " + std::to_string(sample_rate_hz));
  }
  if (!(notch_base_hz > 0.0)) throw std::invalid_argument("notch_base_hz must be positive");
  if (!(notch_q > 0.0)) throw std::invalid_argument("notch_q must be positive");
}

double SosFilter::magnitude_at(double f_hz) const {
  const std::complex<double> z_inv = std::polar(1.0, -2.0 * kPi * f_hz / sample_rate_hz);
  std::complex<double> h = 1.0;
  for (const Biquad& s : sections) {
    const std::complex<double> num = s.b0 + z_inv * (s.b1 + z_inv * s.b2);
    const std::complex<double> den = 1.0 + z_inv * (s.a1 + z_inv * s.a2);
    h *= num / den;
  }
  return std::abs(h);
}

SosFilter design_butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz) {
  require_even_order(order);
  check_cutoff(cutoff_hz, sample_rate_hz);
  // Bilinear transform of the analog prototype 1/(s^2 + s/Q + 1) with the
  // cutoff prewarped to K = tan(pi fc / fs).
  const double k = std::tan(kPi * cutoff_hz / sample_rate_hz);
  SosFilter f;
  f.sample_rate_hz = sample_rate_hz;
  for (const double q : butterworth_qs(order)) {
    const double norm = k * k + k / q + 1.0;
    Biquad s;
    s.b0 = k * k / norm;
    s.b1 = 2.0 * s.b0;
    s.b2 = s.b0;
    s.a1 = 2.0 * (k * k - 1.0) / norm;
    s.a2 = (k * k - k / q + 1.0) / norm;
    f.sections.push_back(s);
  }
  return f;
}

SosFilter design_butterworth_highpass(int order, double cutoff_hz, double sample_rate_hz) {
  require_even_order(order);
  check_cutoff(cutoff_hz, sample_rate_hz);
  const double k = std::tan(kPi * cutoff_hz / sample_rate_hz);
  SosFilter f;
  f.sample_rate_hz = sample_rate_hz;
  for (const double q : butterworth_qs(order)) {
    const double norm = k * k + k / q + 1.0;
    Biquad s;
    s.b0 = 1.0 / norm;
    s.b1 = -2.0 * s.b0;
    s.b2 = s.b0;
    s.a1 = 2.0 * (k * k - 1.0) / norm;
    s.a2 = (k * k - k / q + 1.0) / norm;
    f.sections.push_back(s);
  }
  return f;
}

SosFilter design_bandpass(const FilterSpec& spec, double sample_rate_hz) {
  spec.validate(sample_rate_hz);
  SosFilter hp = design_butterworth_highpass(spec.butterworth_order, spec.band_low_hz,
                                             sample_rate_hz);
  const SosFilter lp = design_butterworth_lowpass(spec.butterworth_order, spec.band_high_hz,
                                                  sample_rate_hz);
  hp.sections.insert(hp.sections.end(), lp.sections.begin(), lp.sections.end());
  return hp;
}

SosFilter design_notch_comb(const FilterSpec& spec, double sample_rate_hz) {
  if (!(spec.notch_base_hz > 0.0) || !(spec.notch_q > 0.0)) {
    throw std::invalid_argument("notch frequency and Q must be positive");
  }
  const double nyquist = sample_rate_hz / 2.0;
  SosFilter f;
  f.sample_rate_hz = sample_rate_hz;
  for (double f0 = spec.notch_base_hz; f0 <= spec.notch_max_hz; f0 += spec.notch_base_hz) {
    if (!(f0 < nyquist)) {
      throw std::invalid_argument("notch at " + std::to_string(f0) + " Hz not below Nyquist");
    }
    const double w0 = 2.0 * kPi * f0 / sample_rate_hz;
    const double alpha = std::sin(w0) / (2.0 * spec.notch_q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    s.b0 = 1.0 / a0;
    s.b1 = -2.0 * std::cos(w0) / a0;
    s.b2 = 1.0 / a0;
    s.a1 = -2.0 * std::cos(w0) / a0;
    s.a2 = (1.0 - alpha) / a0;
    f.sections.push_back(s);
  }
  return f;
}

namespace {

// Steady-state direct form II transposed state for a unit step, scaled by the
// first sample before each pass to suppress the start-up transient.
void step_state(const Biquad& s, double u, double& s1, double& s2) {
  const double denom = 1.0 + s.a1 + s.a2;
  const double gain = (s.b0 + s.b1 + s.b2) / denom;
  s1 = u * (gain - s.b0);
  s2 = u * (gain * (1.0 + s.a1) - s.b0 - s.b1);
}

void run_biquad(const Biquad& s, std::vector<double>& x) {
  double s1, s2;
  step_state(s, x.empty() ? 0.0 : x.front(), s1, s2);
  for (double& v : x) {
    const double y = s.b0 * v + s1;
    s1 = s.b1 * v - s.a1 * y + s2;
    s2 = s.b2 * v - s.a2 * y;
    v = y;
  }
}

}  // namespace

std::vector<double> filtfilt(const SosFilter& filter, const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("filtfilt: empty input");
  const std::size_t n = x.size();
  const std::size_t ntaps = 2 * filter.sections.size() + 1;
  std::size_t pad = 3 * (ntaps - 1);
  if (pad >= n) pad = n - 1;

  // Odd reflection about the end samples.
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x.back() - x[n - 1 - i]);

  for (const Biquad& s : filter.sections) run_biquad(s, ext);
  std::reverse(ext.begin(), ext.end());
  for (const Biquad& s : filter.sections) run_biquad(s, ext);
  std::reverse(ext.begin(), ext.end());

  return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                             ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

MultiChannelSeries filtfilt(const SosFilter& filter, const MultiChannelSeries& x) {
  MultiChannelSeries out = x;
  for (std::size_t c = 0; c < x.channels(); ++c) {
    std::vector<double> chan = extract_channel(x, c);
    chan = filtfilt(filter, chan);
    for (std::size_t t = 0; t < x.frames(); ++t) out.data(t, c) = chan[t];
  }
  return out;
}

MultiChannelSeries bandpass_filter(const MultiChannelSeries& x, const FilterSpec& spec) {
  spec.validate(x.sample_rate_hz);
  return filtfilt(design_bandpass(spec, x.sample_rate_hz), x);
}

MultiChannelSeries notch_comb(const MultiChannelSeries& x, const FilterSpec& spec) {
  return filtfilt(design_notch_comb(spec, x.sample_rate_hz), x);
}

MultiChannelSeries hilbert_envelope(const MultiChannelSeries& x) {
  const std::size_t n = x.frames();
  if (n == 0) throw std::invalid_argument("hilbert_envelope: empty input");

  fftw_complex* buf;
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    buf = fftw_alloc_complex(n);
    fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  MultiChannelSeries out = x;
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (std::size_t t = 0; t < n; ++t) {
      buf[t][0] = x.data(t, c);
      buf[t][1] = 0.0;
    }
    fftw_execute(fwd);
    // Analytic-signal spectrum: keep DC (and Nyquist when n is even), double
    // positive frequencies, zero negative ones.
    const std::size_t half = n / 2;
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) {
      buf[k][0] *= 2.0;
      buf[k][1] *= 2.0;
    }
    for (std::size_t k = half + 1; k < n; ++k) {
      buf[k][0] = 0.0;
      buf[k][1] = 0.0;
    }
    fftw_execute(bwd);
    for (std::size_t t = 0; t < n; ++t) {
      out.data(t, c) = std::hypot(buf[t][0], buf[t][1]) / static_cast<double>(n);
    }
  }

  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  return out;
}

MultiChannelSeries decimate(const MultiChannelSeries& x, double target_rate_hz) {
  if (!(target_rate_hz > 0.0)) throw std::invalid_argument("decimate: target rate must be positive");
  const double ratio = x.sample_rate_hz / target_rate_hz;
  const auto k = static_cast<std::size_t>(std::llround(ratio));
  if (k < 1 || std::fabs(ratio - static_cast<double>(k)) > 1e-9) {
    throw std::invalid_argument("decimate: rate " + std::to_string(x.sample_rate_hz) +
                                " is not an integer multiple of target " +
                                std::to_string(target_rate_hz));
  }
  MultiChannelSeries filtered = x;
  if (k > 1) {
    const double cutoff = 0.8 * (target_rate_hz / 2.0);
    filtered = filtfilt(design_butterworth_lowpass(8, cutoff, x.sample_rate_hz), x);
  }
  const std::size_t out_frames = (x.frames() + k - 1) / k;
  Matrix m(out_frames, x.channels());
  for (std::size_t t = 0; t < out_frames; ++t) {
    for (std::size_t c = 0; c < x.channels(); ++c) m(t, c) = filtered.data(t * k, c);
  }
  MultiChannelSeries out(std::move(m), target_rate_hz, x.channel_names);
  return out;
}

MultiChannelSeries zscore_per_channel(const MultiChannelSeries& x) {
  const std::size_t n = x.frames();
  if (n == 0) throw std::invalid_argument("zscore: empty input");
  MultiChannelSeries out = x;
  for (std::size_t c = 0; c < x.channels(); ++c) {
    std::vector<double> chan = extract_channel(x, c);
    const double mean = kernels::sum(chan.data(), n) / static_cast<double>(n);
    for (double& v : chan) v -= mean;
    const double var = kernels::sumsq(chan.data(), n) / static_cast<double>(n);
    if (var <= 0.0) {
      throw std::invalid_argument("zscore: channel '" + x.channel_names[c] + "' is constant");
    }
    const double inv_std = 1.0 / std::sqrt(var);
    for (std::size_t t = 0; t < n; ++t) out.data(t, c) = chan[t] * inv_std;
  }
  return out;
}

}  // namespace emgtrf::preprocess
