#include "fbu/twobody.hpp"

#include <algorithm>
#include <cmath>

#include "fbu/errors.hpp"
#include "fbu/numerics/eigenpairs.hpp"
#include "fbu/numerics/rootfind.hpp"
#include "fbu/simd/simd.hpp"

namespace fbu {

TwoBodyKernel::TwoBodyKernel(const PotentialShape& shape, double v0,
                             const MomentumGrid& grid)
    : grid_(grid), real_path_(shape.transform_is_real()) {
  if (v0 == 0.0) throw DomainError("two-body kernel: v0 must be nonzero");
  const std::size_t n = grid_.size();
  m_re_.assign(n * n, 0.0);
  if (!real_path_) m_im_.assign(n * n, 0.0);
  // Hermitian similarity form: M(i,j) = -(v0/2pi) sqrt(w_i w_j) F(p_i - p_j).
  std::vector<double> sw(n);
  for (std::size_t i = 0; i < n; ++i) sw[i] = std::sqrt(grid_.weights[i]);
  const double pref = -v0 / (2.0 * M_PI);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const std::complex<double> F =
          shape.transform(grid_.nodes[i] - grid_.nodes[j]);
      const double c = pref * sw[i] * sw[j];
      m_re_[i * n + j] = c * F.real();
      m_re_[j * n + i] = c * F.real();
      if (!real_path_) {
        m_im_[i * n + j] = c * F.imag();
        m_im_[j * n + i] = -c * F.imag();  // F(-p) = conj F(p)
      }
    }
  }
}

void TwoBodyKernel::scaling(double E, std::vector<double>& s) const {
  const std::size_t n = grid_.size();
  s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = 0.5 * grid_.nodes[i] * grid_.nodes[i] - E;
    s[i] = 1.0 / std::sqrt(d);
  }
}

void TwoBodyKernel::apply_real(double E, const double* x, double* y) const {
  const std::size_t n = grid_.size();
  thread_local std::vector<double> s, t;
  scaling(E, s);
  t.resize(n);
  simd::mul_ew(s.data(), x, t.data(), n);
  simd::gemv_row(m_re_.data(), t.data(), y, n, n);
  for (std::size_t i = 0; i < n; ++i) y[i] *= s[i];
}

void TwoBodyKernel::apply_split(double E, const double* xr, const double* xi,
                                double* yr, double* yi) const {
  const std::size_t n = grid_.size();
  thread_local std::vector<double> s, tr, ti, u;
  scaling(E, s);
  tr.resize(n);
  ti.resize(n);
  u.resize(n);
  simd::mul_ew(s.data(), xr, tr.data(), n);
  simd::mul_ew(s.data(), xi, ti.data(), n);
  // y = (M_re + i M_im)(tr + i ti), then scale by s
  simd::gemv_row(m_re_.data(), tr.data(), yr, n, n);
  simd::gemv_row(m_im_.data(), ti.data(), u.data(), n, n);
  simd::axpy(-1.0, u.data(), yr, n);
  simd::gemv_row(m_re_.data(), ti.data(), yi, n, n);
  simd::gemv_row(m_im_.data(), tr.data(), u.data(), n, n);
  simd::axpy(1.0, u.data(), yi, n);
  for (std::size_t i = 0; i < n; ++i) {
    yr[i] *= s[i];
    yi[i] *= s[i];
  }
}

namespace {
constexpr double kEigTol = 1e-11;
}

double TwoBodyKernel::lambda_max(double E) const {
  if (!(E < 0.0)) throw DomainError("two-body kernel: E < 0 required");
  const int n = static_cast<int>(grid_.size());
  if (real_path_) {
    auto op = [this, E](const double* x, double* y) { apply_real(E, x, y); };
    return leading_eigenpairs(op, 1, n, kEigTol).eigenvalues[0];
  }
  auto op = [this, E](const std::complex<double>* x, std::complex<double>* y) {
    thread_local std::vector<double> xr, xi, yr, yi;
    const std::size_t m = grid_.size();
    xr.resize(m); xi.resize(m); yr.resize(m); yi.resize(m);
    for (std::size_t q = 0; q < m; ++q) {
      xr[q] = x[q].real();
      xi[q] = x[q].imag();
    }
    apply_split(E, xr.data(), xi.data(), yr.data(), yi.data());
    for (std::size_t q = 0; q < m; ++q) y[q] = {yr[q], yi[q]};
  };
  return leading_eigenpairs_c(op, 1, n, kEigTol).eigenvalues[0].real();
}

std::vector<std::complex<double>> TwoBodyKernel::eigenvector(
    double E, double* residual) const {
  const int n = static_cast<int>(grid_.size());
  std::vector<std::complex<double>> u(n);
  double res = 0.0;
  if (real_path_) {
    auto op = [this, E](const double* x, double* y) { apply_real(E, x, y); };
    EigenResult er = leading_eigenpairs(op, 1, n, kEigTol);
    for (int i = 0; i < n; ++i) u[i] = er.vectors[0][i];
    res = er.residuals[0];
  } else {
    auto op = [this, E](const std::complex<double>* x,
                        std::complex<double>* y) {
      thread_local std::vector<double> xr, xi, yr, yi;
      const std::size_t m = grid_.size();
      xr.resize(m); xi.resize(m); yr.resize(m); yi.resize(m);
      for (std::size_t q = 0; q < m; ++q) {
        xr[q] = x[q].real();
        xi[q] = x[q].imag();
      }
      apply_split(E, xr.data(), xi.data(), yr.data(), yi.data());
      for (std::size_t q = 0; q < m; ++q) y[q] = {yr[q], yi[q]};
    };
    EigenResultC er = leading_eigenpairs_c(op, 1, n, kEigTol);
    u = er.vectors[0];
    res = er.residuals[0];
  }
  if (residual) *residual = res;
  // Undo the similarity scaling: phi_i = u_i sqrt(D_i / w_i).
  std::vector<double> s;
  scaling(E, s);
  for (int i = 0; i < n; ++i) u[i] *= s[i] / std::sqrt(grid_.weights[i]);
  // Normalize to sum w |phi|^2 / (2 pi) = 1.
  double nrm = 0.0;
  for (int i = 0; i < n; ++i) nrm += grid_.weights[i] * std::norm(u[i]);
  nrm = std::sqrt(nrm / (2.0 * M_PI));
  for (auto& c : u) c /= nrm;
  // Fix the global phase: overlap with the contact profile real positive.
  const double q0 = std::sqrt(-2.0 * E);
  std::complex<double> ov{};
  for (int i = 0; i < n; ++i)
    ov += grid_.weights[i] * contact_wavefunction(q0, grid_.nodes[i]) *
          std::conj(u[i]);
  const double mag = std::abs(ov);
  if (mag > 1e-12) {
    const std::complex<double> phase = std::conj(ov) / mag;
    for (auto& c : u) c *= phase;
  } else if (u[n / 2].real() < 0.0) {
    for (auto& c : u) c = -c;
  }
  return u;
}

double contact_wavefunction(double q0, double p) {
  if (!(q0 > 0.0)) throw DomainError("contact_wavefunction: q0 > 0 required");
  return 2.0 * q0 * std::sqrt(q0) / (q0 * q0 + p * p);
}

AsymptoticQ0 asymptotic_q0(const PotentialShape& shape, double v0) {
  switch (shape.kind()) {
    case ShapeKind::Contact:
      return {-v0, true};
    case ShapeKind::TypeI: {
      const double F0 = shape.transform(0.0).real();
      if (!(v0 * F0 < 0.0))
        throw DomainError(
            "asymptotic_q0: type-I law needs v0 F(0) < 0 (no weakly bound "
            "state for this sign)");
      return {-v0 * F0, false};
    }
    case ShapeKind::TypeII:
      return {v0 * v0 * moment_J(shape) / M_PI, false};
  }
  throw DomainError("asymptotic_q0: unknown kind");
}

namespace {

struct EnergyWindow {
  double deep, shallow;
};

// lambda_max - 1 as a function of y = log|E|; decreasing in y.
double root_energy(const TwoBodyKernel& kernel, double q_est, double tol) {
  const double shallow = -1e-12 * std::max(1.0, q_est * q_est * 1e6);
  double deep = -8.0 * q_est * q_est;
  auto g = [&kernel](double y) { return kernel.lambda_max(-std::exp(y)) - 1.0; };

  double y_hi = std::log(-deep);      // deep end (g < 0 expected)
  const double y_lo = std::log(-shallow);
  double g_hi = g(y_hi);
  int expansions = 0;
  while (g_hi > 0.0 && expansions < 2) {
    // window not deep enough: expand x4 in |E|
    y_hi += std::log(4.0);
    g_hi = g(y_hi);
    ++expansions;
  }
  if (g_hi > 0.0)
    throw NoBoundState(
        "two-body solve: kernel eigenvalue exceeds 1 at the deep window edge "
        "after two expansions");
  const double g_lo = g(y_lo);
  if (g_lo < 0.0)
    throw NoBoundState(
        "two-body solve: no lambda_max(E) = 1 crossing in the search window");
  const double y = bracket_root(g, y_lo, y_hi, tol);
  return -std::exp(y);
}

double estimate_q0(const PotentialShape& shape, double v0) {
  if (shape.kind() == ShapeKind::TypeI) return -v0 * shape.transform(0.0).real();
  if (shape.kind() == ShapeKind::TypeII)
    return v0 * v0 * moment_J(shape) / M_PI;
  return -v0;
}

}  // namespace

TwoBodyResult solve_bound_state(const PotentialShape& shape, double v0,
                                const MomentumGrid& grid, double tol) {
  if (v0 == 0.0) throw DomainError("solve_bound_state: v0 must be nonzero");
  if (shape.kind() == ShapeKind::TypeI) {
    const double F0 = shape.transform(0.0).real();
    if (!(v0 * F0 < 0.0))
      throw DomainError("solve_bound_state: type-I shape needs v0 F(0) < 0");
  }
  TwoBodyKernel kernel(shape, v0, grid);
  const double q_est = std::abs(estimate_q0(shape, v0));
  const double E = root_energy(kernel, q_est > 0 ? q_est : std::abs(v0), tol);

  TwoBodyResult r;
  r.v0 = v0;
  r.q0 = std::sqrt(-2.0 * E);
  r.E0 = -0.5 * r.q0 * r.q0;
  r.grid = grid;
  double eig_res = 0.0;
  r.wavefunction = kernel.eigenvector(r.E0, &eig_res);
  r.norm_residual = eig_res;

  // Even/odd split in p uses the exact mirror nodes of the symmetric grid.
  const std::size_t n = grid.size();
  double even = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> pe =
        0.5 * (r.wavefunction[i] + r.wavefunction[grid.mirror_index(i)]);
    even += grid.weights[i] * std::norm(pe);
    total += grid.weights[i] * std::norm(r.wavefunction[i]);
  }
  r.symmetric_fraction = total > 0 ? even / total : 0.0;
  return r;
}

TwoBodyResult solve_bound_state_auto(const PotentialShape& shape, double v0,
                                     const TwoBodySolveOptions& opt) {
  const double q_est = std::abs(estimate_q0(shape, v0));
  const double range = shape.is_contact() ? q_est : shape.range_scale();
  auto make_grid = [&](double q) {
    return shape.is_contact() ? build_grid(opt.grid_n, q)
                              : build_two_scale_grid(opt.grid_n, q, range);
  };
  TwoBodyResult first =
      solve_bound_state(shape, v0, make_grid(std::max(q_est, 1e-14)), opt.tol);
  if (!opt.rescale_iterate) return first;
  if (std::abs(first.q0 - q_est) <= 0.05 * first.q0) return first;
  return solve_bound_state(shape, v0, make_grid(first.q0), opt.tol);
}

double lorentzian_overlap(const TwoBodyResult& result) {
  const MomentumGrid& g = result.grid;
  const std::size_t n = g.size();
  std::vector<double> lor(n);
  double lnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lor[i] = contact_wavefunction(result.q0, g.nodes[i]);
    lnorm += g.weights[i] * lor[i] * lor[i];
  }
  lnorm = std::sqrt(lnorm);
  std::complex<double> ov{};
  double wnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ov += g.weights[i] * lor[i] * std::conj(result.wavefunction[i]);
    wnorm += g.weights[i] * std::norm(result.wavefunction[i]);
  }
  // Both factors normalized on the same grid: Cauchy-Schwarz bounds this by 1.
  return std::abs(ov) / (lnorm * std::sqrt(wnorm));
}

double iterated_kernel_residual(const PotentialShape& shape, double q0,
                                double box, const MomentumGrid& grid) {
  if (shape.kind() != ShapeKind::TypeII)
    throw DomainError("iterated_kernel_residual: type-II shapes only");
  if (!(q0 > 0.0) || !(box > 0.0))
    throw DomainError("iterated_kernel_residual: q0 > 0 and box > 0 required");

  const double target = moment_J(shape) / M_PI;
  const std::size_t n = grid.size();
  constexpr int kLat = 25;  // evaluation lattice per axis over [-box, box]
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = grid.nodes[i];
    c[i] = grid.weights[i] / (M_PI * (q0 * q0 + p * p));
  }
  // F(x_a - p_i) and F(p_i - x_b) for lattice values x = q0 P.
  std::vector<double> ar(kLat * n), ai(kLat * n), br(kLat * n), bi(kLat * n);
  const bool cplx = !shape.transform_is_real();
  for (int a = 0; a < kLat; ++a) {
    const double x = q0 * (-box + 2.0 * box * a / (kLat - 1));
    for (std::size_t i = 0; i < n; ++i) {
      const std::complex<double> Fa = shape.transform(x - grid.nodes[i]);
      const std::complex<double> Fb = shape.transform(grid.nodes[i] - x);
      ar[a * n + i] = Fa.real();
      br[a * n + i] = Fb.real();
      if (cplx) {
        ai[a * n + i] = Fa.imag();
        bi[a * n + i] = Fb.imag();
      }
    }
  }
  double worst = 0.0;
  for (int a = 0; a < kLat; ++a) {
    for (int b = 0; b < kLat; ++b) {
      const double re =
          simd::dot3(c.data(), &ar[a * n], &br[b * n], n) -
          (cplx ? simd::dot3(c.data(), &ai[a * n], &bi[b * n], n) : 0.0);
      double im = 0.0;
      if (cplx)
        im = simd::dot3(c.data(), &ar[a * n], &bi[b * n], n) +
             simd::dot3(c.data(), &ai[a * n], &br[b * n], n);
      const double gap = std::hypot(re - target, im);
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

}  // namespace fbu
