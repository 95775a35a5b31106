#include <doctest.h>

#include <cmath>

#include "fbu/errors.hpp"
#include "fbu/numerics/rootfind.hpp"

using namespace fbu;

TEST_CASE("bracket_root: sqrt(2)") {
  const double r = bracket_root([](double x) { return x * x - 2.0; }, 1.0, 2.0,
                                1e-10);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("bracket_root: odd function through zero") {
  const double r = bracket_root([](double x) { return x; }, -1.0, 1.0, 1e-12);
  CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("bracket_root: invariant under endpoint swap") {
  auto fn = [](double x) { return std::cos(x) - x; };
  const double a = bracket_root(fn, 0.0, 1.5, 1e-12);
  const double b = bracket_root(fn, 1.5, 0.0, 1e-12);
  CHECK(a == b);
}

TEST_CASE("bracket_root: no sign change reports both endpoints") {
  try {
    bracket_root([](double x) { return x * x + 1.0; }, -1.0, 2.0, 1e-8);
    FAIL("expected BracketError");
  } catch (const BracketError& e) {
    CHECK(e.f_lo() == doctest::Approx(2.0));
    CHECK(e.f_hi() == doctest::Approx(5.0));
  }
}

TEST_CASE("bracket_root: flat-side function still converges") {
  // nearly flat on the left of the root; stalls plain secant
  auto fn = [](double x) { return x < 0.9 ? -1.0 + 1e-14 * x : (x - 0.95) * 20.0 - 1.0 + 1e-14; };
  const double r = bracket_root(fn, 0.0, 2.0, 1e-9);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-6));
}
