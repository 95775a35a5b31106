// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here may run unless avx2_supported() returned true.

#include "fbu/simd/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace fbu::simd::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

double a_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double a_dot3(const double* w, const double* x, const double* y,
              std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc0 = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

double a_nrm2sq(const double* x, std::size_t n) { return a_dot(x, x, n); }

double a_sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += x[i];
  return acc;
}

void a_axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void a_scal(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void a_mul_ew(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void a_gemv_row(const double* A, const double* x, double* y, std::size_t rows,
                std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = a_dot(A + r * cols, x, cols);
}

// One 4-wide load per stencil: the four source values are contiguous.
inline double stencil_one(const double* w, const double* v) {
  __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(w), _mm256_loadu_pd(v));
  return hsum(prod);
}

void a_stencil4(const std::int32_t* idx, const double* w4, const double* src,
                double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    const std::int32_t j = idx[t];
    out[t] = (j < 0) ? 0.0 : stencil_one(w4 + 4 * t, src + j);
  }
}

void a_stencil4_acc(const std::int32_t* idx, const double* w4,
                    const double* src, double c, double* acc, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    const std::int32_t j = idx[t];
    if (j >= 0) acc[t] += c * stencil_one(w4 + 4 * t, src + j);
  }
}

}  // namespace

const Table& avx2_table() {
  static const Table t = {a_dot,    a_dot3,     a_nrm2sq,   a_sum,
                          a_axpy,   a_scal,     a_mul_ew,   a_gemv_row,
                          a_stencil4, a_stencil4_acc};
  return t;
}

}  // namespace fbu::simd::detail

#else  // non-x86 fallback: alias the scalar table

namespace fbu::simd::detail {
const Table& avx2_table() { return scalar_table(); }
}  // namespace fbu::simd::detail

#endif
