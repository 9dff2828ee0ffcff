#pragma once

#include <string>
#include <vector>

#include "emgtrf/matrix.hpp"

namespace emgtrf {

/// Uniformly sampled multichannel signal. Carries raw EMG, envelopes and
/// feature streams alike; data is time x channel.
struct MultiChannelSeries {
  Matrix data;
  double sample_rate_hz = 0.0;
  std::vector<std::string> channel_names;

  MultiChannelSeries() = default;
  MultiChannelSeries(Matrix d, double rate, std::vector<std::string> names = {});

  std::size_t frames() const { return data.rows; }
  std::size_t channels() const { return data.cols; }

  double* channel_frame(std::size_t t) { return data.row(t); }
  const double* channel_frame(std::size_t t) const { return data.row(t); }

  /// Throws std::invalid_argument on rate <= 0, name/column mismatch, or any
  /// non-finite sample.
  void validate() const;
};

/// Copies one channel out as a flat vector.
std::vector<double> extract_channel(const MultiChannelSeries& x, std::size_t channel);

}  // namespace emgtrf
