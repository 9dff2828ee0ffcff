#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "emgtrf/series.hpp"

namespace emgtrf::dtw {

/// Monotone alignment between two series. Pairs are (a_index, b_index); in
/// the pipeline `a` is the aloud reference and `b` the silent trial.
struct WarpPath {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double cost = 0.0;

  /// Checks the path starts at (0,0), ends at (len_a-1, len_b-1), and each
  /// step advances either index by at most one, at least one in total.
  void validate(std::size_t len_a, std::size_t len_b) const;
};

struct DtwConfig {
  int radius = 30;
  int fallback_radius = 20;
  std::uint64_t cell_budget = 50'000'000;  // windowed cost-matrix cells

  void validate() const;
};

/// Globally optimal path under Euclidean local cost on frame vectors.
/// Cost is the sum of local costs over every path cell.
WarpPath dtw_exact(const MultiChannelSeries& a, const MultiChannelSeries& b);

/// Multiresolution approximation: series are halved by pairwise averaging
/// until max length <= 2*radius (where the radius window covers the whole
/// matrix and the solve is exact), then paths are refined level by level
/// inside the projected window widened by `radius`. Falls back to
/// fallback_radius when the window would exceed cell_budget.
WarpPath fastdtw(const MultiChannelSeries& a, const MultiChannelSeries& b, const DtwConfig& cfg);

/// Resamples `b` onto the reference axis of the path: output frame i is the
/// mean of all b frames the path maps to a-index i. ref_len must equal the
/// path's a-length.
MultiChannelSeries warp_to_reference(const MultiChannelSeries& b, const WarpPath& path,
                                     std::size_t ref_len);

}  // namespace emgtrf::dtw
