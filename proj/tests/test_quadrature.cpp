#include <doctest.h>

#include <cmath>
#include <complex>

#include "fbu/errors.hpp"
#include "fbu/numerics/interp.hpp"
#include "fbu/numerics/quadrature.hpp"

using namespace fbu;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double s0 = 0, s2 = 0, s14 = 0;
  for (int i = 0; i < 8; ++i) {
    s0 += w[i];
    s2 += w[i] * x[i] * x[i];
    s14 += w[i] * std::pow(x[i], 14);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));  // degree 14 < 16
}

TEST_CASE("build_grid: symmetry and positive weights") {
  const MomentumGrid g = build_grid(8, 1.0);
  REQUIRE(g.size() == 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.nodes[i] == -g.nodes[g.mirror_index(i)]);
    CHECK(g.weights[i] > 0.0);
    if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  }
}

TEST_CASE("build_grid: gaussian integral accuracy vs closed form") {
  // derived from the closed form sqrt(pi): 2.05e-4 at N=16, 5.9e-7 at N=32
  const double e16 = std::abs(
      integrate_grid(build_grid(16, 1.0),
                     [](double p) { return std::exp(-p * p); }) -
      kSqrtPi);
  const double e32 = std::abs(
      integrate_grid(build_grid(32, 1.0),
                     [](double p) { return std::exp(-p * p); }) -
      kSqrtPi);
  CHECK(e16 < 3e-4);
  CHECK(e32 < 1e-6);
}

TEST_CASE("build_grid: narrow Lorentzian resolved when map scale matches") {
  const double c = 0.01;
  const MomentumGrid g = build_grid(64, c);
  const double got = integrate_grid(
      g, [c](double p) { return 2.0 * c / (c * c + p * p) / (2.0 * M_PI); });
  CHECK(std::abs(got - 1.0) < 1e-6);
}

TEST_CASE("build_grid: refinement reduces error >= 10x for smooth integrands") {
  auto err_gauss = [](int n) {
    const MomentumGrid g = build_grid(n, 1.0);
    return std::abs(
        integrate_grid(g, [](double p) { return std::exp(-p * p); }) - kSqrtPi);
  };
  auto err_lorentz = [](int n) {
    const double w = 0.5;  // unit-integral Lorentzian of width 0.5
    const MomentumGrid g = build_grid(n, 1.0);
    return std::abs(integrate_grid(g,
                                   [w](double p) {
                                     return (w / M_PI) / (w * w + p * p);
                                   }) -
                    1.0);
  };
  CHECK(err_gauss(16) / err_gauss(32) >= 10.0);
  CHECK(err_lorentz(16) / err_lorentz(32) >= 10.0);
}

TEST_CASE("build_grid rejects bad orders") {
  CHECK_THROWS_AS(build_grid(7, 1.0), DomainError);
  CHECK_THROWS_AS(build_grid(6, 1.0), DomainError);
  CHECK_THROWS_AS(build_grid(16, -1.0), DomainError);
}

TEST_CASE("two-scale grid integrates both scales at once") {
  const double q = 1e-3;
  const MomentumGrid g = build_two_scale_grid(200, q, 1.0);
  REQUIRE(g.size() == 200);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(g.nodes[i] == -g.nodes[g.mirror_index(i)]);
  // narrow unit Lorentzian, its square, and a broad gaussian on one rule
  const double lor = integrate_grid(
      g, [q](double p) { return (q / M_PI) / (q * q + p * p); });
  CHECK(std::abs(lor - 1.0) < 1e-10);
  const double lor2 = integrate_grid(g, [q](double p) {
    const double d = q * q + p * p;
    return (2.0 * q * q * q / M_PI) / (d * d);
  });
  CHECK(std::abs(lor2 - 1.0) < 1e-10);
  const double gauss = integrate_grid(g, [](double p) { return std::exp(-p * p); });
  CHECK(std::abs(gauss - kSqrtPi) < 1e-10);
}

TEST_CASE("adaptive quadrature hits closed forms") {
  const double a = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                      M_PI, 1e-12);
  CHECK(a == doctest::Approx(2.0).epsilon(1e-12));
  const double b =
      integrate_line([](double x) { return std::exp(-x * x); }, 1e-12);
  CHECK(b == doctest::Approx(kSqrtPi).epsilon(1e-12));
  // oscillatory transform: integral of cos(5 xi) exp(-xi^2) = sqrt(pi) e^{-25/4}
  const std::complex<double> c = integrate_line_c(
      [](double xi) {
        return std::exp(std::complex<double>(0.0, -5.0 * xi)) *
               std::exp(-xi * xi);
      },
      1e-11, 1.0, 1e-14);
  CHECK(c.real() == doctest::Approx(kSqrtPi * std::exp(-25.0 / 4.0)).epsilon(1e-9));
  CHECK(std::abs(c.imag()) < 1e-12);
}

TEST_CASE("cubic interpolation is exact on cubics and zero outside") {
  std::vector<double> nodes{-2.0, -1.2, -0.3, 0.4, 1.1, 2.5};
  auto f = [](double x) { return 1.0 + x * (0.5 + x * (-0.25 + 0.125 * x)); };
  std::vector<double> vals;
  for (double x : nodes) vals.push_back(f(x));
  for (double q : {-1.9, -0.7, 0.11, 0.9, 2.2})
    CHECK(interp_cubic(nodes, vals, q) == doctest::Approx(f(q)).epsilon(1e-13));
  CHECK(interp_cubic(nodes, vals, -2.1) == 0.0);
  CHECK(interp_cubic(nodes, vals, 2.6) == 0.0);
}
