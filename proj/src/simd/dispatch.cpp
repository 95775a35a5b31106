#include "fbu/simd/simd.hpp"

#include <atomic>

namespace fbu::simd {

namespace {

bool detect_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const detail::Table*>& table_slot() {
  static std::atomic<const detail::Table*> slot{
      detect_avx2() ? &detail::avx2_table() : &detail::scalar_table()};
  return slot;
}

inline const detail::Table& tab() {
  return *table_slot().load(std::memory_order_relaxed);
}

}  // namespace

bool avx2_supported() {
  static const bool ok = detect_avx2();
  return ok;
}

Backend active_backend() {
  return table_slot().load() == &detail::scalar_table() ? Backend::Scalar
                                                        : Backend::Avx2;
}

Backend set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) b = Backend::Scalar;
  table_slot().store(b == Backend::Avx2 ? &detail::avx2_table()
                                        : &detail::scalar_table());
  return b;
}

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

double dot(const double* x, const double* y, std::size_t n) {
  return tab().dot(x, y, n);
}
double dot3(const double* w, const double* x, const double* y, std::size_t n) {
  return tab().dot3(w, x, y, n);
}
double nrm2sq(const double* x, std::size_t n) { return tab().nrm2sq(x, n); }
double sum(const double* x, std::size_t n) { return tab().sum(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) {
  tab().axpy(a, x, y, n);
}
void scal(double a, double* x, std::size_t n) { tab().scal(a, x, n); }
void mul_ew(const double* a, const double* b, double* y, std::size_t n) {
  tab().mul_ew(a, b, y, n);
}
void gemv_row(const double* A, const double* x, double* y, std::size_t rows,
              std::size_t cols) {
  tab().gemv_row(A, x, y, rows, cols);
}
void stencil4(const std::int32_t* idx, const double* w4, const double* src,
              double* out, std::size_t n) {
  tab().stencil4(idx, w4, src, out, n);
}
void stencil4_acc(const std::int32_t* idx, const double* w4, const double* src,
                  double c, double* acc, std::size_t n) {
  tab().stencil4_acc(idx, w4, src, c, acc, n);
}

}  // namespace fbu::simd
