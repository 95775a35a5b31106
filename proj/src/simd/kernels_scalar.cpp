#include "fbu/simd/simd.hpp"

namespace fbu::simd::detail {

namespace {

double s_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double s_dot3(const double* w, const double* x, const double* y,
              std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

double s_nrm2sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_scal(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_mul_ew(const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

void s_gemv_row(const double* A, const double* x, double* y, std::size_t rows,
                std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = s_dot(A + r * cols, x, cols);
}

void s_stencil4(const std::int32_t* idx, const double* w4, const double* src,
                double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    const std::int32_t j = idx[t];
    if (j < 0) {
      out[t] = 0.0;
      continue;
    }
    const double* v = src + j;
    const double* w = w4 + 4 * t;
    out[t] = w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3];
  }
}

void s_stencil4_acc(const std::int32_t* idx, const double* w4,
                    const double* src, double c, double* acc, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    const std::int32_t j = idx[t];
    if (j < 0) continue;
    const double* v = src + j;
    const double* w = w4 + 4 * t;
    acc[t] += c * (w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3]);
  }
}

}  // namespace

const Table& scalar_table() {
  static const Table t = {s_dot,    s_dot3,     s_nrm2sq,   s_sum,
                          s_axpy,   s_scal,     s_mul_ew,   s_gemv_row,
                          s_stencil4, s_stencil4_acc};
  return t;
}

}  // namespace fbu::simd::detail
