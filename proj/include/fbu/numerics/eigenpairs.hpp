#ifndef FBU_NUMERICS_EIGENPAIRS_HPP
#define FBU_NUMERICS_EIGENPAIRS_HPP

#include <complex>
#include <functional>
#include <vector>

namespace fbu {

/// y = K x for a deterministic linear operator on grid functions.
using LinearOp = std::function<void(const double*, double*)>;
using LinearOpC =
    std::function<void(const std::complex<double>*, std::complex<double>*)>;

struct EigenResult {
  std::vector<double> eigenvalues;  // real parts, descending
  std::vector<double> imag_parts;   // matching imaginary parts (flagged, kept)
  std::vector<std::vector<double>> vectors;
  std::vector<double> residuals;  // ||K v - lambda v|| / ||v||
  bool has_complex = false;       // any |imag| > 1e-8 relative
  bool has_degeneracy = false;    // leading eigenvalues closer than 1e-10
};

struct EigenResultC {
  std::vector<std::complex<double>> eigenvalues;  // descending real part
  std::vector<std::vector<std::complex<double>>> vectors;
  std::vector<double> residuals;
  bool has_degeneracy = false;
};

/// k eigenvalues of largest real part by restarted Arnoldi iteration with a
/// fixed all-ones start vector; falls back to dense factorization for
/// dim <= 2500 when the iteration stalls. Residuals are verified explicitly.
/// Throws ConvergenceError (carrying the best residual) on failure.
EigenResult leading_eigenpairs(const LinearOp& apply, int k, int dim,
                               double tol);

/// Complex-arithmetic variant (used for kernels of anisotropic shapes).
EigenResultC leading_eigenpairs_c(const LinearOpC& apply, int k, int dim,
                                  double tol);

/// Full dense spectrum route for validation at small dimension: applies the
/// operator to every unit vector and factorizes. O(dim^3).
EigenResult eigenpairs_dense(const LinearOp& apply, int k, int dim);

/// Lowest eigenvalues of a symmetric operator by thick-restart Lanczos with
/// full reorthogonalization (no shift-invert, deterministic all-ones start).
/// Returns ascending eigenvalues; throws ConvergenceError carrying the best
/// residual if max_cycles restarts do not reach tol (absolute residual).
std::vector<double> lowest_eigenvalues_symmetric(const LinearOp& apply,
                                                 int dim, int n_want,
                                                 double tol, int max_cycles);

}  // namespace fbu

#endif
