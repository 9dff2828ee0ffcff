#include "emgtrf/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emgtrf {

MultiChannelSeries::MultiChannelSeries(Matrix d, double rate, std::vector<std::string> names)
    : data(std::move(d)), sample_rate_hz(rate), channel_names(std::move(names)) {
  if (channel_names.empty()) {
    for (std::size_t c = 0; c < data.cols; ++c) channel_names.push_back("ch" + std::to_string(c + 1));
  }
}

void MultiChannelSeries::validate() const {
  if (!(sample_rate_hz > 0.0)) {
    throw std::invalid_argument("series: sample rate must be positive");
  }
  if (channel_names.size() != data.cols) {
    throw std::invalid_argument("series: channel name count does not match column count");
  }
  for (std::size_t i = 0; i < data.data.size(); ++i) {
    if (!std::isfinite(data.data[i])) {
      throw std::invalid_argument("series: non-finite sample at flat index " + std::to_string(i));
    }
  }
}

std::vector<double> extract_channel(const MultiChannelSeries& x, std::size_t channel) {
  std::vector<double> out(x.frames());
  for (std::size_t t = 0; t < x.frames(); ++t) out[t] = x.data(t, channel);
  return out;
}

}  // namespace emgtrf
