#ifndef FBU_THREEBODY_HPP
#define FBU_THREEBODY_HPP

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fbu/mass.hpp"
#include "fbu/numerics/quadrature.hpp"
#include "fbu/potential.hpp"
#include "fbu/twobody.hpp"

namespace fbu {

enum class Parity { Even, Odd };
const char* parity_name(Parity p);

/// Free three-body Green function 1/(eps - alpha_p P^2 - alpha_k K^2),
/// strictly negative and nonsingular for eps < 0.
double assemble_green(const MassConfig& mass, double eps, double P, double K);

struct ThreeBodyGrids {
  MomentumGrid P;
  MomentumGrid K;
};

/// Tan-mapped grids scaled to the classically allowed region of a state near
/// energy ratio eps_guess.
ThreeBodyGrids default_grids(const MassConfig& mass, int np, int nk,
                             double eps_guess = -3.0);

struct ThreeBodyState {
  double epsilon = 0.0;   // < -1
  double residual = 0.0;  // |lambda - 1| + eigen residual at the root
  std::vector<double> wavefunction;  // full tensor grid, row i*NK+j, unit norm
};

struct ThreeBodySpectrum {
  double alpha = 1.0;
  Parity parity = Parity::Even;
  ThreeBodyGrids grids;
  std::vector<ThreeBodyState> states;  // ascending epsilon
  std::string note;                    // e.g. "window exhausted at n=2"
};

/// Momentum-space kernel of the three-body equation, discretized on tensor
/// grids with the heavy-exchange parity sector built in (states live on the
/// positive-K half grid). Off-grid K values are piecewise-cubic interpolated
/// and vanish beyond the grid edge. The scatter structure is independent of
/// the energy; eps enters only through the Green-function row scaling.
class ThreeBodyKernel {
 public:
  /// Contact interaction: no q0 enters anywhere by construction.
  ThreeBodyKernel(const MassConfig& mass, Parity parity,
                  const ThreeBodyGrids& grids);
  /// Finite range: coefficient (v0/q0) F[q0 (P - P')].
  ThreeBodyKernel(const MassConfig& mass, Parity parity,
                  const ThreeBodyGrids& grids, const PotentialShape& shape,
                  double v0, double q0);
  ~ThreeBodyKernel();
  ThreeBodyKernel(ThreeBodyKernel&&) noexcept;

  int dim() const;  // NP * NK/2
  bool complex_path() const;

  /// y = K(eps) x on the half grid. Deterministic for any thread count.
  void apply(double eps, const double* x, double* y) const;
  void apply_c(double eps, const std::complex<double>* x,
               std::complex<double>* y) const;

  /// Same discretization as an explicitly assembled dense matrix (for
  /// validating the matrix-free path; real path only).
  std::vector<double> dense_matrix(double eps) const;

  /// k leading eigenvalues at eps, descending real part.
  std::vector<double> eigenvalues(double eps, int k, double tol,
                                  bool use_dense = false) const;

  const ThreeBodyGrids& grids() const;
  const MassConfig& mass() const;
  Parity parity() const;

  /// Expands a half-grid state to the full (P,K) tensor grid and normalizes
  /// sum wP wK |Phi|^2 / (4 pi^2) = 1.
  std::vector<double> expand_normalize(const std::vector<double>& half) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SpectrumOptions {
  int n_states = 1;
  double eps_lo = -40.0;           // window deep edge, widened x4 on demand
  double eps_hi = -1.0 - 1e-6;     // threshold guard
  double tol = 1e-9;               // relative tolerance on epsilon roots
  double eigen_tol = 1e-10;
  int scan_points = 14;
  bool use_dense = false;          // validate via assembled-matrix path
};

/// All eps in the window where the n-th kernel eigenvalue crosses 1, found by
/// per-branch bracketing on a monotonicity-checked scan.
ThreeBodySpectrum solve_contact_spectrum(const MassConfig& mass,
                                         Parity parity,
                                         const ThreeBodyGrids& grids,
                                         const SpectrumOptions& opt);

/// Two-pass driver: coarse solve fixes the grid scales, then a full solve.
ThreeBodySpectrum solve_contact_auto(const MassConfig& mass, Parity parity,
                                     int np, int nk,
                                     const SpectrumOptions& opt);

/// Finite-range spectrum; solves the two-body problem first (or accepts a
/// precomputed result). Energy ratios are reported in units of |E0^(2)|.
struct FiniteRangeResult {
  ThreeBodySpectrum spectrum;
  TwoBodyResult two_body;
};
FiniteRangeResult solve_finite_range_spectrum(
    const PotentialShape& shape, double v0, const MassConfig& mass,
    Parity parity, int np, int nk, const SpectrumOptions& opt,
    const TwoBodyResult* precomputed = nullptr);

/// The two closed-form routes to absolute three-body energies: the
/// weak-coupling law for q0 versus the solved q0, both times eps_n*.
struct UniversalPrediction {
  int n = 0;
  double eps_star = 0.0;
  double energy_asymptotic = 0.0;  // eps_n* q0_asym^2 / 2
  double energy_solved = 0.0;      // eps_n* q0_solved^2 / 2
};
std::vector<UniversalPrediction> universal_prediction(
    const PotentialShape& shape, double v0, const ThreeBodySpectrum& contact,
    std::optional<double> q0_solved = std::nullopt);

/// Norms of the four once-iterated kernel terms, the bound on |A+-|/q0 over
/// the small-|p'| region, and the gap between the (I1+I4) action and the
/// contact kernel action on a trial state.
struct IterationDiagnostics {
  double q0 = 0.0;
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0;
  double A_pm_max = 0.0;
  double residual_to_contact = 0.0;
};
std::vector<IterationDiagnostics> iteration_diagnostics(
    const PotentialShape& shape, const std::vector<double>& q0_sequence,
    const MassConfig& mass, double eps, const ThreeBodySpectrum& trial);

}  // namespace fbu

#endif
