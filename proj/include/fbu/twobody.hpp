#ifndef FBU_TWOBODY_HPP
#define FBU_TWOBODY_HPP

#include <complex>
#include <vector>

#include "fbu/numerics/quadrature.hpp"
#include "fbu/potential.hpp"

namespace fbu {

/// Bound-state solution of the heavy-light pair for v(xi) = v0 f(xi).
/// Momenta are in units 1/xi0, energies in hbar^2/(mu xi0^2).
struct TwoBodyResult {
  double v0 = 0.0;
  double q0 = 0.0;  // binding momentum sqrt(2|E0|)
  double E0 = 0.0;  // ground-state energy, = -q0^2/2 by construction
  MomentumGrid grid;
  std::vector<std::complex<double>> wavefunction;  // phi(p_i), unit norm
  double norm_residual = 0.0;        // ||K phi - phi|| at the solved energy
  double symmetric_fraction = 0.0;   // ||even part||^2 / ||phi||^2
};

/// Discretized kernel v0 F(p-p') / [2pi (E - p^2/2)] on a fixed grid,
/// symmetrized to a Hermitian operator so its spectrum is real. The
/// F-difference matrix is assembled once and reused for every energy.
class TwoBodyKernel {
 public:
  TwoBodyKernel(const PotentialShape& shape, double v0,
                const MomentumGrid& grid);

  /// Largest (algebraic) kernel eigenvalue at energy E < 0.
  double lambda_max(double E) const;

  /// Eigenvector of lambda_max mapped back to wave-function samples phi(p_i),
  /// normalized to sum w_i |phi_i|^2 / (2 pi) = 1, with residual output.
  std::vector<std::complex<double>> eigenvector(double E,
                                                double* residual) const;

  const MomentumGrid& grid() const { return grid_; }
  bool real_path() const { return real_path_; }

 private:
  void apply_real(double E, const double* x, double* y) const;
  void apply_split(double E, const double* xr, const double* xi, double* yr,
                   double* yi) const;
  void scaling(double E, std::vector<double>& s) const;

  MomentumGrid grid_;
  bool real_path_;
  std::vector<double> m_re_, m_im_;  // row-major symmetrized F matrix
};

struct TwoBodySolveOptions {
  int grid_n = 400;
  double tol = 1e-10;        // relative tolerance on |E0|
  double eigen_tol = 1e-11;  // Arnoldi residual tolerance
  bool rescale_iterate = true;
};

/// Root-finds lambda_max(E) = 1 on the given grid. Throws NoBoundState if no
/// crossing exists in the search window (deepest-first scan, window expanded
/// twice before giving up).
TwoBodyResult solve_bound_state(const PotentialShape& shape, double v0,
                                const MomentumGrid& grid, double tol);

/// Convenience driver: estimates q0 from the weak-coupling law, builds the
/// two-scale grid, solves, then rebuilds the grid at the solved q0 and
/// re-solves so the wave-function core is properly resolved.
TwoBodyResult solve_bound_state_auto(const PotentialShape& shape, double v0,
                                     const TwoBodySolveOptions& opt = {});

/// Contact-interaction ground-state wave function 2 q0^{3/2} / (q0^2 + p^2).
double contact_wavefunction(double q0, double p);

struct AsymptoticQ0 {
  double value = 0.0;
  bool exact = false;  // true for the contact shape (q0 = -v0 at all v0)
};

/// Weak-coupling binding momentum: -v0 F(0) for type I, v0^2 J / pi for
/// type II, -v0 exactly for contact.
AsymptoticQ0 asymptotic_q0(const PotentialShape& shape, double v0);

/// |<phi_delta(q0), phi>| with measure dp/(2 pi); both factors unit-normalized
/// on the result grid, so the value lies in [0, 1].
double lorentzian_overlap(const TwoBodyResult& result);

/// sup over (P,P'') in [-box,box]^2 of the gap between the once-iterated
/// kernel integral (1/pi) int dp' F(q0 P - p') F(p' - q0 P'') / (q0^2 + p'^2)
/// and its q0 -> 0 limit J/pi. Type-II shapes only. The supplied grid carries
/// the p' quadrature and must resolve both the q0 and range scales.
double iterated_kernel_residual(const PotentialShape& shape, double q0,
                                double box, const MomentumGrid& grid);

}  // namespace fbu

#endif
