#ifndef FBU_NUMERICS_ROOTFIND_HPP
#define FBU_NUMERICS_ROOTFIND_HPP

#include <functional>

namespace fbu {

/// Bracketed root of a continuous function: bisection with secant
/// acceleration, deterministic, insensitive to the order of (lo, hi).
/// Requires fn(lo) and fn(hi) of opposite sign, else throws BracketError.
/// Returns the bracket midpoint once the bracket width is below tol.
double bracket_root(const std::function<double(double)>& fn, double lo,
                    double hi, double tol);

}  // namespace fbu

#endif
