#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fbu/simd/simd.hpp"

using namespace fbu;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

struct BackendGuard {
  simd::Backend saved;
  BackendGuard() : saved(simd::active_backend()) {}
  ~BackendGuard() { simd::set_backend(saved); }
};

}  // namespace

TEST_CASE("scalar and avx2 backends agree within roundoff") {
  if (!simd::avx2_supported()) {
    MESSAGE("avx2 not supported on this machine; dispatch test skipped");
    return;
  }
  BackendGuard guard;
  std::mt19937 rng(12345);
  for (std::size_t n : {1u, 3u, 7u, 8u, 33u, 256u, 1001u}) {
    auto x = random_vec(n, rng);
    auto y = random_vec(n, rng);
    auto w = random_vec(n, rng);

    simd::set_backend(simd::Backend::Scalar);
    const double d_s = simd::dot(x.data(), y.data(), n);
    const double d3_s = simd::dot3(w.data(), x.data(), y.data(), n);
    const double n_s = simd::nrm2sq(x.data(), n);
    const double s_s = simd::sum(x.data(), n);
    auto ax_s = y;
    simd::axpy(0.37, x.data(), ax_s.data(), n);

    simd::set_backend(simd::Backend::Avx2);
    const double d_a = simd::dot(x.data(), y.data(), n);
    const double d3_a = simd::dot3(w.data(), x.data(), y.data(), n);
    const double n_a = simd::nrm2sq(x.data(), n);
    const double s_a = simd::sum(x.data(), n);
    auto ax_a = y;
    simd::axpy(0.37, x.data(), ax_a.data(), n);

    const double scale = std::max(1.0, std::abs(d_s));
    CHECK(std::abs(d_s - d_a) < 1e-12 * scale);
    CHECK(std::abs(d3_s - d3_a) < 1e-12 * scale);
    CHECK(std::abs(n_s - n_a) < 1e-12 * std::max(1.0, n_s));
    CHECK(std::abs(s_s - s_a) < 1e-12 * std::max(1.0, std::abs(s_s)));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(ax_s[i] == doctest::Approx(ax_a[i]).epsilon(1e-14));
  }
}

TEST_CASE("gemv matches naive loops on both backends") {
  BackendGuard guard;
  std::mt19937 rng(99);
  const std::size_t rows = 17, cols = 23;
  auto A = random_vec(rows * cols, rng);
  auto x = random_vec(cols, rng);
  std::vector<double> want(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) want[r] += A[r * cols + c] * x[c];

  for (auto b : {simd::Backend::Scalar, simd::Backend::Avx2}) {
    if (b == simd::Backend::Avx2 && !simd::avx2_supported()) continue;
    simd::set_backend(b);
    std::vector<double> y(rows);
    simd::gemv_row(A.data(), x.data(), y.data(), rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      CHECK(y[r] == doctest::Approx(want[r]).epsilon(1e-13));
  }
}

TEST_CASE("stencil4 gathers contiguous 4-point stencils") {
  BackendGuard guard;
  std::mt19937 rng(7);
  const std::size_t n_src = 40, n_t = 21;
  auto src = random_vec(n_src, rng);
  std::vector<std::int32_t> idx(n_t);
  std::vector<double> w4(4 * n_t);
  std::uniform_int_distribution<int> pick(-1, static_cast<int>(n_src) - 4);
  std::uniform_real_distribution<double> wd(-1.0, 1.0);
  for (std::size_t t = 0; t < n_t; ++t) {
    idx[t] = pick(rng);
    for (int r = 0; r < 4; ++r) w4[4 * t + r] = wd(rng);
  }
  std::vector<double> want(n_t, 0.0);
  for (std::size_t t = 0; t < n_t; ++t) {
    if (idx[t] < 0) continue;
    for (int r = 0; r < 4; ++r) want[t] += w4[4 * t + r] * src[idx[t] + r];
  }
  for (auto b : {simd::Backend::Scalar, simd::Backend::Avx2}) {
    if (b == simd::Backend::Avx2 && !simd::avx2_supported()) continue;
    simd::set_backend(b);
    std::vector<double> out(n_t, -7.0);
    simd::stencil4(idx.data(), w4.data(), src.data(), out.data(), n_t);
    std::vector<double> acc(n_t, 1.0);
    simd::stencil4_acc(idx.data(), w4.data(), src.data(), 2.0, acc.data(), n_t);
    for (std::size_t t = 0; t < n_t; ++t) {
      CHECK(out[t] == doctest::Approx(want[t]).epsilon(1e-13));
      CHECK(acc[t] == doctest::Approx(1.0 + 2.0 * want[t]).epsilon(1e-13));
    }
  }
}
