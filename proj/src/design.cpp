#include "emgtrf/design.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace emgtrf::design {

void LagSpec::validate() const {
  if (!(sample_rate_hz > 0.0) || !(step_ms > 0.0)) {
    throw std::invalid_argument("lag spec: rate and step must be positive");
  }
  if (std::fabs(step_ms * sample_rate_hz - 1000.0) > 1e-9) {
    throw std::invalid_argument("lag spec: step_ms must equal one sample period");
  }
  if (!(min_ms <= 0.0) || !(max_ms >= 0.0)) {
    throw std::invalid_argument("lag spec: window must contain lag 0");
  }
  const double count = (max_ms - min_ms) / step_ms;
  if (std::fabs(count - std::llround(count)) > 1e-9) {
    throw std::invalid_argument("lag spec: window is not a whole number of steps");
  }
}

std::size_t LagSpec::lag_count() const {
  return static_cast<std::size_t>(std::llround((max_ms - min_ms) / step_ms)) + 1;
}

double LagSpec::lag_ms(std::size_t lag_index) const {
  return min_ms + static_cast<double>(lag_index) * step_ms;
}

long LagSpec::lag_samples(std::size_t lag_index) const {
  return std::lround(lag_ms(lag_index) / step_ms);
}

LaggedDesign build_lagged(const features::FeatureMatrix& x, const LagSpec& spec) {
  spec.validate();
  const std::size_t n_lags = spec.lag_count();
  const std::size_t frames = x.frames();
  const std::size_t f_count = x.feature_count();
  if (frames <= n_lags) {
    throw std::invalid_argument("build_lagged: need more than " + std::to_string(n_lags) +
                                " frames, got " + std::to_string(frames));
  }

  LaggedDesign d;
  d.feature_count = f_count;
  d.lags = spec;
  d.matrix = Matrix(frames, f_count * n_lags);
  for (std::size_t l = 0; l < n_lags; ++l) {
    const long shift = spec.lag_samples(l);
    for (std::size_t t = 0; t < frames; ++t) {
      const long src = static_cast<long>(t) - shift;
      if (src < 0 || src >= static_cast<long>(frames)) continue;
      const double* in = x.data.row(static_cast<std::size_t>(src));
      double* out = d.matrix.row(t) + l * f_count;
      for (std::size_t f = 0; f < f_count; ++f) out[f] = in[f];
    }
  }
  return d;
}

Matrix reshape_weights(const std::vector<double>& w, std::size_t feature_count,
                       const LagSpec& spec) {
  const std::size_t n_lags = spec.lag_count();
  if (w.size() != feature_count * n_lags) {
    throw std::invalid_argument("reshape_weights: expected " +
                                std::to_string(feature_count * n_lags) + " entries, got " +
                                std::to_string(w.size()));
  }
  Matrix out(feature_count, n_lags);
  for (std::size_t l = 0; l < n_lags; ++l) {
    for (std::size_t f = 0; f < feature_count; ++f) out(f, l) = w[l * feature_count + f];
  }
  return out;
}

std::vector<double> flatten_weights(const Matrix& w) {
  std::vector<double> out(w.rows * w.cols);
  for (std::size_t l = 0; l < w.cols; ++l) {
    for (std::size_t f = 0; f < w.rows; ++f) out[l * w.rows + f] = w(f, l);
  }
  return out;
}

}  // namespace emgtrf::design
