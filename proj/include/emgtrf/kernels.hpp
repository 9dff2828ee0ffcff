#pragma once

#include <cstddef>
#include <string_view>

namespace emgtrf::kernels {

/// Function table for the arithmetic inner loops everything else is built on.
/// A backend is selected once at startup from the CPU's capabilities; tests
/// pin specific backends to check that the variants agree.
struct Backend {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sumsq)(const double* x, std::size_t n);
  double (*sumabs)(const double* x, std::size_t n);
  double (*sqdist)(const double* a, const double* b, std::size_t n);
  void (*soft_threshold)(const double* v, double t, double* out, std::size_t n);
};

const Backend& scalar_backend();

/// Null when the build or the running CPU lacks the instruction set.
const Backend* avx2_backend();
const Backend* neon_backend();

const Backend& active();

/// Selects a backend by name ("scalar", "avx2", "neon"). Returns false and
/// leaves the selection unchanged if the backend is unavailable. Not meant to
/// be called concurrently with compute.
bool set_active(std::string_view name);

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double sumsq(const double* x, std::size_t n) { return active().sumsq(x, n); }
inline double sumabs(const double* x, std::size_t n) { return active().sumabs(x, n); }
inline double sqdist(const double* a, const double* b, std::size_t n) {
  return active().sqdist(a, b, n);
}
inline void soft_threshold(const double* v, double t, double* out, std::size_t n) {
  active().soft_threshold(v, t, out, n);
}

// Composite loops layered on the backend primitives.

/// c (n x n, row-major) upper triangle += panel^T panel, where panel is
/// frames x n row-major. Callers chunk frames so a panel stays cache-resident.
void gram_accumulate_upper(const double* panel, std::size_t frames, std::size_t n, double* c);

/// Copies the upper triangle onto the lower one.
void symmetrize_from_upper(double* c, std::size_t n);

/// y = A x, A rows x cols row-major.
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);

/// y = A^T x.
void matvec_transposed(const double* a, std::size_t rows, std::size_t cols, const double* x,
                       double* y);

}  // namespace emgtrf::kernels
