#ifndef FBU_MASS_HPP
#define FBU_MASS_HPP

#include "fbu/errors.hpp"

namespace fbu {

/// Heavy-light mass ratio alpha = M/m >= 1 and the kinetic coefficients of
/// the three-body Green function. They satisfy alpha_p + alpha_k/4 = 1.
struct MassConfig {
  double alpha;
  double alpha_p;
  double alpha_k;

  explicit MassConfig(double a) : alpha(a) {
    if (!(a >= 1.0)) throw DomainError("MassConfig: alpha >= 1 required");
    alpha_p = (1.0 + 2.0 * a) / (2.0 * (1.0 + a));
    alpha_k = 2.0 / (1.0 + a);
  }
};

}  // namespace fbu

#endif
