#ifndef FBU_NUMERICS_QUADRATURE_HPP
#define FBU_NUMERICS_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace fbu {

/// Gauss-Legendre rule on (-1,1): nodes ascending, weights positive.
/// Newton iteration on the Legendre recurrence, accurate to ~1e-15.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Quadrature rule for the whole momentum line. Nodes are strictly
/// increasing and symmetric about zero; weights are positive.
struct MomentumGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double map_scale = 1.0;  // L of the compactifying map
  int order = 0;           // total node count

  std::size_t size() const { return nodes.size(); }
  /// Index of the node at -nodes[i] (grids are built symmetric).
  std::size_t mirror_index(std::size_t i) const { return nodes.size() - 1 - i; }
};

/// Gauss-Legendre nodes t on (-1,1) mapped by p = L tan(pi t / 2), weights
/// carrying the Jacobian. N must be even and >= 8 so no node sits at p = 0
/// and the rule is symmetric.
MomentumGrid build_grid(int n, double map_scale);

/// Panel-composite rule resolving two momentum scales at once: a core panel
/// around zero at scale s_small, mid panels out to scale s_large, and
/// rational-mapped tail panels to infinity. Falls back to the plain tan map
/// when the scales are within a factor ~4 of each other.
MomentumGrid build_two_scale_grid(int n, double s_small, double s_large);

/// Sum w_i f(p_i) over a grid.
double integrate_grid(const MomentumGrid& g,
                      const std::function<double(double)>& f);

/// Adaptive Gauss quadrature (paired 7/15-point estimates, worst-interval
/// refinement) on [a, b]. Throws ConvergenceError with the residual estimate
/// if the interval budget is exhausted before reaching tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol = 0.0);

std::complex<double> integrate_adaptive_c(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double rel_tol, double abs_tol = 0.0);

/// Adaptive integral over the whole real line via the rational map
/// x = L t / (1 - t^2). Integrand must decay at infinity.
double integrate_line(const std::function<double(double)>& f, double rel_tol,
                      double map_scale = 1.0, double abs_tol = 0.0);

std::complex<double> integrate_line_c(
    const std::function<std::complex<double>(double)>& f, double rel_tol,
    double map_scale = 1.0, double abs_tol = 0.0);

}  // namespace fbu

#endif
