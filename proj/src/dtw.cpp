#include "emgtrf/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "emgtrf/kernels.hpp"

namespace emgtrf::dtw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double local_cost(const MultiChannelSeries& a, std::size_t i, const MultiChannelSeries& b,
                  std::size_t j) {
  return std::sqrt(kernels::sqdist(a.data.row(i), b.data.row(j), a.channels()));
}

void check_inputs(const MultiChannelSeries& a, const MultiChannelSeries& b) {
  if (a.frames() == 0 || b.frames() == 0) throw std::invalid_argument("dtw: empty input series");
  if (a.channels() != b.channels()) {
    throw std::invalid_argument("dtw: channel count mismatch (" + std::to_string(a.channels()) +
                                " vs " + std::to_string(b.channels()) + ")");
  }
}

// Per-row inclusive column intervals of the search window.
struct Window {
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;

  std::uint64_t cells() const {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) total += hi[i] - lo[i] + 1;
    return total;
  }
};

Window full_window(std::size_t rows, std::size_t cols) {
  Window w;
  w.lo.assign(rows, 0);
  w.hi.assign(rows, cols - 1);
  return w;
}

// DP over the window; cells outside are treated as +inf. Backtrack prefers
// diagonal, then (i-1,j), then (i,j-1) on ties.
WarpPath windowed_dtw(const MultiChannelSeries& a, const MultiChannelSeries& b, const Window& w) {
  const std::size_t rows = a.frames();
  std::vector<std::size_t> offset(rows + 1, 0);
  for (std::size_t i = 0; i < rows; ++i) offset[i + 1] = offset[i] + (w.hi[i] - w.lo[i] + 1);
  std::vector<double> d(offset[rows], kInf);

  auto cell = [&](std::size_t i, std::size_t j) -> double {
    if (j < w.lo[i] || j > w.hi[i]) return kInf;
    return d[offset[i] + (j - w.lo[i])];
  };

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = w.lo[i]; j <= w.hi[i]; ++j) {
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = kInf;
        if (i > 0 && j > 0) best = std::min(best, cell(i - 1, j - 1));
        if (i > 0) best = std::min(best, cell(i - 1, j));
        if (j > 0) best = std::min(best, cell(i, j - 1));
      }
      if (best < kInf) d[offset[i] + (j - w.lo[i])] = best + local_cost(a, i, b, j);
    }
  }

  WarpPath path;
  std::size_t i = rows - 1;
  std::size_t j = b.frames() - 1;
  path.cost = cell(i, j);
  if (!std::isfinite(path.cost)) {
    throw std::runtime_error("dtw: window disconnects the end points");
  }
  std::vector<std::pair<std::size_t, std::size_t>> rev;
  rev.emplace_back(i, j);
  while (i != 0 || j != 0) {
    const double diag = (i > 0 && j > 0) ? cell(i - 1, j - 1) : kInf;
    const double up = i > 0 ? cell(i - 1, j) : kInf;
    const double left = j > 0 ? cell(i, j - 1) : kInf;
    const double best = std::min({diag, up, left});
    if (diag == best) {
      --i;
      --j;
    } else if (up == best) {
      --i;
    } else {
      --j;
    }
    rev.emplace_back(i, j);
  }
  path.pairs.assign(rev.rbegin(), rev.rend());
  return path;
}

MultiChannelSeries coarsen(const MultiChannelSeries& x) {
  const std::size_t out_frames = (x.frames() + 1) / 2;
  Matrix m(out_frames, x.channels());
  for (std::size_t t = 0; t < out_frames; ++t) {
    const std::size_t t0 = 2 * t;
    const std::size_t t1 = std::min(t0 + 1, x.frames() - 1);
    for (std::size_t c = 0; c < x.channels(); ++c) {
      m(t, c) = 0.5 * (x.data(t0, c) + x.data(t1, c));
    }
  }
  return MultiChannelSeries(std::move(m), x.sample_rate_hz / 2.0, x.channel_names);
}

// Projects a coarse path onto the doubled grid and widens it by `radius`
// rows and columns.
Window project_and_expand(const WarpPath& coarse, std::size_t rows, std::size_t cols, int radius) {
  std::vector<std::size_t> lo(rows, cols), hi(rows, 0);
  auto touch = [&](std::size_t i, std::size_t j) {
    if (i >= rows) return;
    j = std::min(j, cols - 1);
    lo[i] = std::min(lo[i], j);
    hi[i] = std::max(hi[i], j);
  };
  for (const auto& [ci, cj] : coarse.pairs) {
    for (std::size_t di = 0; di < 2; ++di) {
      for (std::size_t dj = 0; dj < 2; ++dj) touch(2 * ci + di, 2 * cj + dj);
    }
  }
  // Rows beyond the projected path (odd-length tails) inherit the last span.
  for (std::size_t i = 0; i < rows; ++i) {
    if (lo[i] > hi[i]) {
      lo[i] = i > 0 ? lo[i - 1] : 0;
      hi[i] = i > 0 ? hi[i - 1] : 0;
    }
  }

  const auto r = static_cast<std::size_t>(radius);
  Window w;
  w.lo.resize(rows);
  w.hi.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t row_lo = i > r ? i - r : 0;
    const std::size_t row_hi = std::min(i + r, rows - 1);
    std::size_t mn = cols, mx = 0;
    for (std::size_t ii = row_lo; ii <= row_hi; ++ii) {
      mn = std::min(mn, lo[ii]);
      mx = std::max(mx, hi[ii]);
    }
    w.lo[i] = mn > r ? mn - r : 0;
    w.hi[i] = std::min(mx + r, cols - 1);
  }
  w.lo.front() = 0;
  w.hi.back() = cols - 1;
  return w;
}

WarpPath fastdtw_at_radius(const MultiChannelSeries& a, const MultiChannelSeries& b, int radius,
                           std::uint64_t cell_budget, bool* budget_ok) {
  const std::size_t max_len = std::max(a.frames(), b.frames());
  if (max_len <= 2 * static_cast<std::size_t>(radius)) return dtw_exact(a, b);

  const WarpPath coarse =
      fastdtw_at_radius(coarsen(a), coarsen(b), radius, cell_budget, budget_ok);
  if (!*budget_ok) return coarse;  // caller restarts with the fallback radius
  const Window w = project_and_expand(coarse, a.frames(), b.frames(), radius);
  if (w.cells() > cell_budget) {
    *budget_ok = false;
    return coarse;
  }
  return windowed_dtw(a, b, w);
}

}  // namespace

void WarpPath::validate(std::size_t len_a, std::size_t len_b) const {
  if (pairs.empty()) throw std::invalid_argument("warp path: empty");
  if (pairs.front() != std::pair<std::size_t, std::size_t>{0, 0}) {
    throw std::invalid_argument("warp path: must start at (0,0)");
  }
  if (pairs.back() != std::pair<std::size_t, std::size_t>{len_a - 1, len_b - 1}) {
    throw std::invalid_argument("warp path: must end at (len_a-1, len_b-1)");
  }
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    const auto [pi, pj] = pairs[k - 1];
    const auto [i, j] = pairs[k];
    const bool step_ok = i >= pi && j >= pj && i - pi <= 1 && j - pj <= 1 && (i > pi || j > pj);
    if (!step_ok) throw std::invalid_argument("warp path: non-monotone or skipping step");
  }
  if (cost < 0.0) throw std::invalid_argument("warp path: negative cost");
}

void DtwConfig::validate() const {
  if (radius < 1 || fallback_radius < 1) throw std::invalid_argument("dtw: radius must be >= 1");
  if (fallback_radius > radius) {
    throw std::invalid_argument("dtw: fallback_radius must not exceed radius");
  }
  if (cell_budget == 0) throw std::invalid_argument("dtw: cell budget must be positive");
}

WarpPath dtw_exact(const MultiChannelSeries& a, const MultiChannelSeries& b) {
  check_inputs(a, b);
  return windowed_dtw(a, b, full_window(a.frames(), b.frames()));
}

WarpPath fastdtw(const MultiChannelSeries& a, const MultiChannelSeries& b, const DtwConfig& cfg) {
  check_inputs(a, b);
  cfg.validate();
  bool budget_ok = true;
  WarpPath path = fastdtw_at_radius(a, b, cfg.radius, cfg.cell_budget, &budget_ok);
  if (!budget_ok) {
    budget_ok = true;
    path = fastdtw_at_radius(a, b, cfg.fallback_radius, cfg.cell_budget, &budget_ok);
    if (!budget_ok) {
      throw std::runtime_error("fastdtw: cell budget exceeded even at the fallback radius");
    }
  }
  return path;
}

MultiChannelSeries warp_to_reference(const MultiChannelSeries& b, const WarpPath& path,
                                     std::size_t ref_len) {
  if (ref_len == 0) throw std::invalid_argument("warp_to_reference: ref_len must be positive");
  for (const auto& [i, j] : path.pairs) {
    if (i >= ref_len || j >= b.frames()) {
      throw std::invalid_argument("warp_to_reference: path index out of range");
    }
  }
  path.validate(ref_len, b.frames());

  Matrix m(ref_len, b.channels());
  std::vector<std::size_t> counts(ref_len, 0);
  for (const auto& [i, j] : path.pairs) {
    kernels::axpy(1.0, b.data.row(j), m.row(i), b.channels());
    ++counts[i];
  }
  for (std::size_t i = 0; i < ref_len; ++i) {
    const double inv = 1.0 / static_cast<double>(counts[i]);
    for (std::size_t c = 0; c < b.channels(); ++c) m(i, c) *= inv;
  }
  return MultiChannelSeries(std::move(m), b.sample_rate_hz, b.channel_names);
}

}  // namespace emgtrf::dtw
