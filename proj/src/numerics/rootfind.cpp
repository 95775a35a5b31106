#include "fbu/numerics/rootfind.hpp"

#include <algorithm>
#include <cmath>

#include "fbu/errors.hpp"

namespace fbu {

double bracket_root(const std::function<double(double)>& fn, double lo,
                    double hi, double tol) {
  if (lo > hi) std::swap(lo, hi);
  double f_lo = fn(lo);
  double f_hi = fn(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi))
    throw BracketError("bracket_root: no sign change on bracket", f_lo, f_hi);

  const int max_iter = 400;
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    // Secant proposal on odd steps, accepted only if it lands safely inside
    // the bracket; every even step bisects so the width provably shrinks.
    double x = 0.5 * (lo + hi);
    const double denom = f_hi - f_lo;
    if (it % 2 == 1 && denom != 0.0) {
      const double xs = lo - f_lo * (hi - lo) / denom;
      const double margin = 0.01 * (hi - lo);
      if (xs > lo + margin && xs < hi - margin) x = xs;
    }
    const double fx = fn(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(f_lo)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fbu
