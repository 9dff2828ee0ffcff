// NEON variants (aarch64). Same contract as the scalar backend; selected at
// startup since NEON is baseline on aarch64.

#include "emgtrf/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace emgtrf::kernels {

namespace {

double neon_dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void neon_axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double neon_sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

double neon_sumsq(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i] * x[i];
  return out;
}

double neon_sumabs(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += std::fabs(x[i]);
  return out;
}

double neon_sqdist(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    out += d * d;
  }
  return out;
}

void neon_soft_threshold(const double* v, double t, double* out, std::size_t n) {
  const float64x2_t tv = vdupq_n_f64(t);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const uint64x2_t sign_mask = vdupq_n_u64(0x8000000000000000ull);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(v + i);
    const float64x2_t mag = vmaxq_f64(vsubq_f64(vabsq_f64(x), tv), zero);
    const uint64x2_t sign = vandq_u64(vreinterpretq_u64_f64(x), sign_mask);
    vst1q_f64(out + i, vreinterpretq_f64_u64(vorrq_u64(vreinterpretq_u64_f64(mag), sign)));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(v[i]) - t;
    out[i] = m > 0.0 ? std::copysign(m, v[i]) : 0.0;
  }
}

constexpr Backend kNeon = {
    "neon",      neon_dot,    neon_axpy,   neon_sum,
    neon_sumsq,  neon_sumabs, neon_sqdist, neon_soft_threshold,
};

}  // namespace

const Backend* neon_backend() { return &kNeon; }

}  // namespace emgtrf::kernels
