#ifndef FBU_SIMD_SIMD_HPP
#define FBU_SIMD_SIMD_HPP

#include <cstddef>
#include <cstdint>

// Vectorized inner loops used by the solvers. Every routine has a scalar
// reference implementation and an AVX2 variant; the active backend is chosen
// at runtime from CPUID and can be overridden for equivalence testing.
//
// SIMD variants reassociate reductions, so results may differ from the scalar
// path at the level of floating-point roundoff. Equivalence tests pin the
// allowed divergence. Within one backend all routines are deterministic.

namespace fbu::simd {

enum class Backend { Scalar, Avx2 };

/// True if the running CPU supports the AVX2+FMA kernels.
bool avx2_supported();

/// Backend currently in use.
Backend active_backend();

/// Override the backend (no-op if unsupported on this CPU; returns the
/// backend actually selected). Intended for tests and benchmarking.
Backend set_backend(Backend b);

const char* backend_name(Backend b);

// sum_i x[i]*y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i w[i]*x[i]*y[i]  (quadrature inner products)
double dot3(const double* w, const double* x, const double* y, std::size_t n);

// sum_i x[i]^2
double nrm2sq(const double* x, std::size_t n);

// sum_i x[i]
double sum(const double* x, std::size_t n);

// y[i] += a*x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// x[i] *= a
void scal(double a, double* x, std::size_t n);

// y[i] = a[i]*b[i]
void mul_ew(const double* a, const double* b, double* y, std::size_t n);

// y = A*x with A row-major (rows x cols)
void gemv_row(const double* A, const double* x, double* y, std::size_t rows,
              std::size_t cols);

// out[t] = sum_{r<4} w4[4t+r] * src[idx[t]+r]; idx[t] < 0 means out[t] = 0.
// Four-point interpolation stencils gathered from a contiguous source array.
void stencil4(const std::int32_t* idx, const double* w4, const double* src,
              double* out, std::size_t n);

// acc[t] += c * sum_{r<4} w4[4t+r] * src[idx[t]+r]; idx[t] < 0 contributes 0.
void stencil4_acc(const std::int32_t* idx, const double* w4, const double* src,
                  double c, double* acc, std::size_t n);

namespace detail {
struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  double (*nrm2sq)(const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*mul_ew)(const double*, const double*, double*, std::size_t);
  void (*gemv_row)(const double*, const double*, double*, std::size_t,
                   std::size_t);
  void (*stencil4)(const std::int32_t*, const double*, const double*, double*,
                   std::size_t);
  void (*stencil4_acc)(const std::int32_t*, const double*, const double*,
                       double, double*, std::size_t);
};
const Table& scalar_table();
const Table& avx2_table();  // only valid to call through if avx2_supported()
}  // namespace detail

}  // namespace fbu::simd

#endif
