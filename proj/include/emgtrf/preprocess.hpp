#pragma once

#include <cstddef>
#include <vector>

#include "emgtrf/series.hpp"

namespace emgtrf::preprocess {

/// Band-pass and mains-notch settings for raw EMG.
struct FilterSpec {
  double band_low_hz = 10.0;
  double band_high_hz = 450.0;
  double notch_base_hz = 60.0;
  double notch_max_hz = 450.0;
  double notch_q = 30.0;
  int butterworth_order = 4;  // per band edge, must be even

  /// Throws std::invalid_argument when edges are out of range for the rate.
  void validate(double sample_rate_hz) const;
};

/// One second-order section, direct form II transposed, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Cascade of second-order sections with its design rate.
struct SosFilter {
  std::vector<Biquad> sections;
  double sample_rate_hz = 0.0;

  /// |H(e^{j 2 pi f / fs})| of the cascade (single pass).
  double magnitude_at(double f_hz) const;

  int order() const { return static_cast<int>(sections.size()) * 2; }
};

SosFilter design_butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz);
SosFilter design_butterworth_highpass(int order, double cutoff_hz, double sample_rate_hz);

/// Band-pass as a high-pass/low-pass Butterworth cascade, order
/// `spec.butterworth_order` per edge.
SosFilter design_bandpass(const FilterSpec& spec, double sample_rate_hz);

/// Second-order notches at notch_base_hz and its harmonics up to
/// min(notch_max_hz, Nyquist), quality factor notch_q.
SosFilter design_notch_comb(const FilterSpec& spec, double sample_rate_hz);

/// Zero-phase (forward-backward) application of a cascade, with odd
/// reflection padding of 3x the filter's tap count and step-response initial
/// conditions, so edge transients stay small.
std::vector<double> filtfilt(const SosFilter& filter, const std::vector<double>& x);
MultiChannelSeries filtfilt(const SosFilter& filter, const MultiChannelSeries& x);

MultiChannelSeries bandpass_filter(const MultiChannelSeries& x, const FilterSpec& spec);
MultiChannelSeries notch_comb(const MultiChannelSeries& x, const FilterSpec& spec);

/// Per-channel magnitude of the analytic signal, computed through a
/// frequency-domain Hilbert transform. Output is nonnegative, same shape.
MultiChannelSeries hilbert_envelope(const MultiChannelSeries& x);

/// Anti-alias low-pass (cutoff 0.8x the target Nyquist, zero-phase) followed
/// by keeping every k-th sample. The input rate must be an integer multiple
/// of the target rate.
MultiChannelSeries decimate(const MultiChannelSeries& x, double target_rate_hz);

/// Zero mean, unit population standard deviation per channel. Throws on a
/// constant channel, naming it.
MultiChannelSeries zscore_per_channel(const MultiChannelSeries& x);

}  // namespace emgtrf::preprocess
