#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fbu/errors.hpp"
#include "fbu/potential.hpp"

using namespace fbu;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt2Pi = 2.5066282746310005024;
}  // namespace

TEST_CASE("contact transform is identically one") {
  const auto s = PotentialShape::make("contact");
  CHECK(s.kind() == ShapeKind::Contact);
  CHECK(s.transform(3.7).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.transform(3.7).imag() == 0.0);
  CHECK_THROWS_AS(s.f(0.1), DomainError);
}

TEST_CASE("gaussian transform: closed form and quadrature agree") {
  const auto s = PotentialShape::make("gaussian");
  CHECK(s.transform(0.0).real() == doctest::Approx(kSqrtPi).epsilon(1e-12));
  // quadrature route through a custom shape without registered closed form
  const auto q = PotentialShape::custom(
      "gaussian-by-quadrature", [](double xi) { return std::exp(-xi * xi); },
      nullptr);
  for (double p : {0.0, 0.5, 2.0, 7.0}) {
    const auto a = s.transform(p);
    const auto b = q.transform(p);
    CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
  }
  CHECK(q.kind() == ShapeKind::TypeI);
}

TEST_CASE("mexican hat: zero-integral shape, F(0) = 0") {
  const auto s = PotentialShape::make("mexican-hat");
  CHECK(std::abs(s.transform(0.0)) < 1e-15);
  CHECK(s.kind() == ShapeKind::TypeII);
  // F(p) = sqrt(pi) p^2/2 e^{-p^2/4}
  const double p = 1.3;
  CHECK(s.transform(p).real() ==
        doctest::Approx(kSqrtPi * p * p / 2 * std::exp(-p * p / 4)).epsilon(1e-13));
}

TEST_CASE("conjugate symmetry F(-p) = conj F(p) for all shapes") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (const auto& name : PotentialShape::catalog_names()) {
    const auto s = PotentialShape::make(name);
    for (int t = 0; t < 50; ++t) {
      const double p = dist(rng);
      const auto a = s.transform(-p);
      const auto b = std::conj(s.transform(p));
      CHECK(std::abs(a - b) < 1e-12);
    }
  }
}

TEST_CASE("classification of the catalog") {
  CHECK(classify(PotentialShape::make("gaussian")) == ShapeKind::TypeI);
  CHECK(classify(PotentialShape::make("exponential")) == ShapeKind::TypeI);
  CHECK(classify(PotentialShape::make("skew-gaussian")) == ShapeKind::TypeI);
  CHECK(classify(PotentialShape::make("mexican-hat")) == ShapeKind::TypeII);
  CHECK(classify(PotentialShape::make("shifted-mexican-hat", {{"shift", 0.3}})) ==
        ShapeKind::TypeII);
  CHECK(classify(PotentialShape::make("contact")) == ShapeKind::Contact);
}

TEST_CASE("classification stable under tol_zero halving") {
  for (const auto& name : PotentialShape::catalog_names()) {
    const auto s = PotentialShape::make(name);
    CHECK(classify(s, 1e-12) == classify(s, 0.5e-12));
  }
}

TEST_CASE("divergent |F|^2/p^2 with F(0)=0 is a classification error") {
  // F(p) = sqrt(|p|) e^{-p^2}: vanishes at zero but |F|^2/p^2 = e^{-2p^2}/|p|
  auto make_bad = [] {
    return PotentialShape::custom("sqrt-cusp", nullptr, [](double p) {
      return std::complex<double>(std::sqrt(std::abs(p)) * std::exp(-p * p),
                                  0.0);
    });
  };
  CHECK_THROWS_AS(make_bad(), DomainError);
}

TEST_CASE("moment_J: mexican hat closed form pi sqrt(2 pi)/4") {
  const auto s = PotentialShape::make("mexican-hat");
  const double want = M_PI * kSqrt2Pi / 4.0;
  CHECK(moment_J(s) == doctest::Approx(want).epsilon(1e-8));
  CHECK(want == doctest::Approx(1.968701).epsilon(1e-6));
}

TEST_CASE("moment_J invariant under shift; scales as width^3") {
  const auto s0 = PotentialShape::make("mexican-hat");
  const auto s3 = PotentialShape::make("shifted-mexican-hat", {{"shift", 0.3}});
  CHECK(moment_J(s3) == doctest::Approx(moment_J(s0)).epsilon(1e-10));
  // substitution rule for f(xi/2): J(w) = w^3 J(1); cross-check by quadrature
  const auto s2 = PotentialShape::make("mexican-hat", {{"width", 2.0}});
  CHECK(moment_J(s2) == doctest::Approx(8.0 * moment_J(s0)).epsilon(1e-8));
}

TEST_CASE("moment_J rejects type-I and contact shapes") {
  CHECK_THROWS_AS(moment_J(PotentialShape::make("gaussian")), DomainError);
  CHECK_THROWS_AS(moment_J(PotentialShape::make("contact")), DomainError);
}

TEST_CASE("translation leaves |F| unchanged") {
  const auto s0 = PotentialShape::make("gaussian");
  const auto s1 = PotentialShape::make("shifted-gaussian", {{"shift", 0.7}});
  for (double p = -6.0; p <= 6.0; p += 0.5)
    CHECK(std::abs(std::abs(s1.transform(p)) - std::abs(s0.transform(p))) <
          1e-10);
}

TEST_CASE("short-range check passes for the catalog") {
  for (const auto& name : PotentialShape::catalog_names())
    CHECK(short_range_ok(PotentialShape::make(name)));
}

TEST_CASE("unknown shape and bad parameters are domain errors") {
  CHECK_THROWS_AS(PotentialShape::make("square-well"), DomainError);
  CHECK_THROWS_AS(PotentialShape::make("gaussian", {{"width", -1.0}}),
                  DomainError);
}
