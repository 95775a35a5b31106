#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fbu/numerics/eigenpairs.hpp"
#include "fbu/numerics/quadrature.hpp"
#include "fbu/parallel.hpp"

using namespace fbu;

TEST_CASE("diagonal operator: top eigenvalue") {
  auto op = [](const double* x, double* y) {
    y[0] = 3.0 * x[0];
    y[1] = 2.0 * x[1];
    y[2] = 1.0 * x[2];
  };
  const EigenResult r = leading_eigenpairs(op, 1, 3, 1e-12);
  CHECK(r.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.residuals[0] < 1e-11);
}

TEST_CASE("rank-1 operator: single nonzero eigenvalue <w,u>") {
  const int n = 50;
  std::vector<double> u(n), w(n);
  for (int i = 0; i < n; ++i) {
    u[i] = std::sin(0.1 * (i + 1));
    w[i] = std::cos(0.07 * i) + 0.2;
  }
  double want = 0.0;
  for (int i = 0; i < n; ++i) want += w[i] * u[i];
  auto op = [&](const double* x, double* y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * x[i];
    for (int i = 0; i < n; ++i) y[i] = u[i] * s;
  };
  const EigenResult r = leading_eigenpairs(op, 1, n, 1e-11);
  CHECK(r.eigenvalues[0] == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("discretized contact kernel: lambda_max = 1 at E = -v0^2/2") {
  // two-body contact kernel, symmetrized: rank-1 with trace -v0/(2pi) sum w D
  const double v0 = -0.5;
  const double E = -v0 * v0 / 2.0;
  const MomentumGrid g = build_grid(200, -v0);
  const int n = static_cast<int>(g.size());
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i)
    s[i] = std::sqrt(g.weights[i] / (0.5 * g.nodes[i] * g.nodes[i] - E));
  auto op = [&](const double* x, double* y) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += s[i] * x[i];
    acc *= -v0 / (2.0 * M_PI);
    for (int i = 0; i < n; ++i) y[i] = s[i] * acc;
  };
  const EigenResult r = leading_eigenpairs(op, 1, n, 1e-12);
  CHECK(std::abs(r.eigenvalues[0] - 1.0) < 1e-8);
}

TEST_CASE("residual contract holds for a dense nonsymmetric operator") {
  const int n = 60;
  std::vector<double> A(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      A[i * n + j] = std::exp(-0.1 * std::abs(i - j)) + (i == j ? 0.5 * i : 0.0) +
                     0.01 * std::sin(3.0 * i + 7.0 * j);
  auto op = [&](const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += A[i * n + j] * x[j];
      y[i] = acc;
    }
  };
  const EigenResult r = leading_eigenpairs(op, 3, n, 1e-10);
  for (double res : r.residuals) CHECK(res < 1e-9);
  CHECK(r.eigenvalues[0] >= r.eigenvalues[1]);
  CHECK(r.eigenvalues[1] >= r.eigenvalues[2]);
  // dense validation route agrees
  const EigenResult d = eigenpairs_dense(op, 3, n);
  for (int i = 0; i < 3; ++i)
    CHECK(r.eigenvalues[i] == doctest::Approx(d.eigenvalues[i]).epsilon(1e-9));
}

TEST_CASE("complex hermitian path returns real leading eigenvalue") {
  const int n = 40;
  std::vector<std::complex<double>> A(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::complex<double> z(std::exp(-0.2 * std::abs(i - j)),
                                   0.1 * (i - j));
      A[i * n + j] = z;
    }
  // hermitize
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) A[j * n + i] = std::conj(A[i * n + j]);
  auto op = [&](const std::complex<double>* x, std::complex<double>* y) {
    for (int i = 0; i < n; ++i) {
      std::complex<double> acc{};
      for (int j = 0; j < n; ++j) acc += A[i * n + j] * x[j];
      y[i] = acc;
    }
  };
  const EigenResultC r = leading_eigenpairs_c(op, 2, n, 1e-10);
  CHECK(std::abs(r.eigenvalues[0].imag()) < 1e-9);
  CHECK(r.residuals[0] < 1e-9);
}

TEST_CASE("eigenvalues independent of thread count") {
  const int n = 300;
  auto op = [&](const double* x, double* y) {
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
          acc += x[j] * std::exp(-0.05 * std::abs(static_cast<int>(i) - j));
        y[i] = acc;
      }
    });
  };
  set_thread_count(1);
  const double e1 = leading_eigenpairs(op, 1, n, 1e-11).eigenvalues[0];
  set_thread_count(4);
  const double e4 = leading_eigenpairs(op, 1, n, 1e-11).eigenvalues[0];
  set_thread_count(1);
  CHECK(e1 == e4);  // bitwise: disjoint output ranges, no shared reductions
}

TEST_CASE("thick-restart lanczos: lowest eigenvalues of a 1D laplacian") {
  const int n = 400;
  auto op = [&](const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
      double acc = 2.0 * x[i];
      if (i > 0) acc -= x[i - 1];
      if (i + 1 < n) acc -= x[i + 1];
      y[i] = acc - 3.0 * std::exp(-0.002 * (i - 200) * (i - 200)) * x[i];
    }
  };
  const std::vector<double> lo = lowest_eigenvalues_symmetric(op, n, 2, 1e-9, 600);
  CHECK(lo.size() == 2);
  CHECK(lo[0] < lo[1]);
  // compare against the dense route
  const EigenResult dense = eigenpairs_dense(
      [&](const double* x, double* y) {
        op(x, y);
        for (int i = 0; i < n; ++i) y[i] = -y[i];  // largest of -H = lowest of H
      },
      2, n);
  CHECK(lo[0] == doctest::Approx(-dense.eigenvalues[0]).epsilon(1e-8));
  CHECK(lo[1] == doctest::Approx(-dense.eigenvalues[1]).epsilon(1e-8));
}
