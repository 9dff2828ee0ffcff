#pragma once

#include <cstddef>
#include <vector>

#include "emgtrf/features.hpp"
#include "emgtrf/matrix.hpp"

namespace emgtrf::design {

/// Lag window for the lagged design matrix. The step must equal one sample
/// period, so lags map one-to-one onto integer sample shifts.
struct LagSpec {
  double min_ms = -300.0;
  double max_ms = 300.0;
  double step_ms = 20.0;
  double sample_rate_hz = 50.0;

  void validate() const;

  std::size_t lag_count() const;

  /// Lag in milliseconds at a lag index (0 = min_ms).
  double lag_ms(std::size_t lag_index) const;

  /// Signed sample shift for a lag index. Positive lags read the feature
  /// stream earlier in time (column holds x[t - shift]).
  long lag_samples(std::size_t lag_index) const;
};

/// T x (F * |L|) design matrix with lag-major column blocks:
/// [X(t - tau_1) | ... | X(t - tau_|L|)], zero-padded outside the utterance.
struct LaggedDesign {
  Matrix matrix;
  std::size_t feature_count = 0;
  LagSpec lags;

  std::size_t column_count() const { return matrix.cols; }
  std::size_t frames() const { return matrix.rows; }

  /// Column index of (feature f, lag index l): l * F + f.
  std::size_t column(std::size_t feature, std::size_t lag_index) const {
    return lag_index * feature_count + feature;
  }
};

LaggedDesign build_lagged(const features::FeatureMatrix& x, const LagSpec& spec);

/// Inverse of the design's column map: reshapes a flat weight vector to
/// (feature x lag-index). Throws on length mismatch.
Matrix reshape_weights(const std::vector<double>& w, std::size_t feature_count,
                       const LagSpec& spec);

/// Flattens a (feature x lag) matrix back onto the design's column order.
std::vector<double> flatten_weights(const Matrix& w);

}  // namespace emgtrf::design
