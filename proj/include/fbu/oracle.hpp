#ifndef FBU_ORACLE_HPP
#define FBU_ORACLE_HPP

#include <optional>
#include <vector>

#include "fbu/mass.hpp"
#include "fbu/potential.hpp"

namespace fbu {

/// Uniform coordinate grid [-extent, extent] with n odd so xi = 0 is a node.
struct SpatialGrid {
  double extent = 20.0;
  int n = 2001;
  double spacing() const { return 2.0 * extent / (n - 1); }
};

struct OracleTwoBody {
  double energy = 0.0;           // lowest eigenvalue
  double error_bar = 0.0;        // discretization estimate (refined runs)
  std::vector<double> psi;       // normalized, sum h psi^2 = 1
  double spacing = 0.0;
};

/// Second-order finite-difference ground state of -(1/2) d^2/dxi^2 + v0 f.
/// The contact shape becomes an on-node point potential v0/h. Throws
/// NoBoundState when no negative eigenvalue exists.
OracleTwoBody two_body_coordinate(const PotentialShape& shape, double v0,
                                  const SpatialGrid& grid);

/// Richardson ladder over grid spacings h, h/2, h/4 at fixed extent; the
/// error bar is the spread of the last two extrapolants.
OracleTwoBody two_body_coordinate_refined(const PotentialShape& shape,
                                          double v0, const SpatialGrid& base,
                                          int levels = 3);

struct ThreeBodyOracleOptions {
  double extent_x = 20.0;
  double extent_y = 20.0;
  double hx = 0.1;  // y spacing is 2 hx so the contact lines pass through nodes
  int n_states = 1;
  double lanczos_tol = 1e-8;
  int max_cycles = 400;
};

struct OracleThreeBody {
  std::vector<double> energies;  // lowest eigenvalues, ascending
  double e2 = 0.0;               // matched two-body reference energy
  std::vector<double> epsilons;  // energies / |e2|
  double error_bar = 0.0;        // on epsilon[0] for refined runs
  int nx = 0, ny = 0;
};

/// Sparse finite-difference diagonalization of
///   -(alpha_p/2) d2/dx2 - (alpha_k/2) d2/dy2 + v0 [f(x-y/2) + f(x+y/2)]
/// restricted to the y-even (heavy-exchange even) sector; x-even symmetry is
/// exploited automatically for reflection-symmetric shapes. Plane waves on
/// this discrete Hamiltonian carry energy (alpha_p p^2 + alpha_k k^2)/2 up to
/// O(h^2), matching the momentum-space Green function.
OracleThreeBody three_body_coordinate(const PotentialShape& shape, double v0,
                                      const MassConfig& mass,
                                      const ThreeBodyOracleOptions& opt);

/// Richardson ladder over hx halvings; epsilons extrapolated, bar recorded.
OracleThreeBody three_body_coordinate_refined(const PotentialShape& shape,
                                              double v0,
                                              const MassConfig& mass,
                                              const ThreeBodyOracleOptions& opt,
                                              int levels = 2);

}  // namespace fbu

#endif
