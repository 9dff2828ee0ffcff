#include "emgtrf/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstring>

namespace emgtrf::kernels {

namespace {

double scalar_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void scalar_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double scalar_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double scalar_sumsq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double scalar_sumabs(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double scalar_sqdist(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void scalar_soft_threshold(const double* v, double t, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::fabs(v[i]) - t;
    out[i] = m > 0.0 ? std::copysign(m, v[i]) : 0.0;
  }
}

constexpr Backend kScalar = {
    "scalar",      scalar_dot,    scalar_axpy,          scalar_sum,
    scalar_sumsq,  scalar_sumabs, scalar_sqdist,        scalar_soft_threshold,
};

const Backend* pick_default() {
  if (const Backend* b = avx2_backend()) return b;
  if (const Backend* b = neon_backend()) return b;
  return &kScalar;
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& scalar_backend() { return kScalar; }

#if !defined(EMGTRF_WITH_AVX2)
const Backend* avx2_backend() { return nullptr; }
#endif
#if !defined(EMGTRF_WITH_NEON)
const Backend* neon_backend() { return nullptr; }
#endif

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = pick_default();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

bool set_active(std::string_view name) {
  const Backend* b = nullptr;
  if (name == "scalar") b = &kScalar;
  else if (name == "avx2") b = avx2_backend();
  else if (name == "neon") b = neon_backend();
  if (!b) return false;
  g_active.store(b, std::memory_order_release);
  return true;
}

void gram_accumulate_upper(const double* panel, std::size_t frames, std::size_t n, double* c) {
  // For each output row i, stream the panel once and accumulate the tail of
  // the frame row scaled by its i-th entry. The c row stays hot across the
  // frame loop.
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = c + i * n + i;
    for (std::size_t t = 0; t < frames; ++t) {
      const double* p = panel + t * n;
      const double v = p[i];
      if (v != 0.0) axpy(v, p + i, crow, n - i);
    }
  }
}

void symmetrize_from_upper(double* c, std::size_t n) {
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) c[i * n + j] = c[j * n + i];
  }
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(a + i * cols, x, cols);
}

void matvec_transposed(const double* a, std::size_t rows, std::size_t cols, const double* x,
                       double* y) {
  std::memset(y, 0, cols * sizeof(double));
  for (std::size_t i = 0; i < rows; ++i) {
    if (x[i] != 0.0) axpy(x[i], a + i * cols, y, cols);
  }
}

}  // namespace emgtrf::kernels
