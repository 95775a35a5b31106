#include "fbu/threebody.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "fbu/errors.hpp"
#include "fbu/numerics/eigenpairs.hpp"
#include "fbu/numerics/interp.hpp"
#include "fbu/numerics/rootfind.hpp"
#include "fbu/parallel.hpp"
#include "fbu/simd/simd.hpp"

namespace fbu {

const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

double assemble_green(const MassConfig& mass, double eps, double P, double K) {
  if (!(eps < 0.0))
    throw DomainError("assemble_green: eps < 0 required (continuum otherwise)");
  return 1.0 / (eps - mass.alpha_p * P * P - mass.alpha_k * K * K);
}

ThreeBodyGrids default_grids(const MassConfig& mass, int np, int nk,
                             double eps_guess) {
  const double e = std::max(1.5, std::abs(eps_guess));
  ThreeBodyGrids g{build_grid(np, std::sqrt(e / mass.alpha_p)),
                   build_grid(nk, std::sqrt(e / mass.alpha_k))};
  return g;
}

// ---------------------------------------------------------------------------
// Kernel
// ---------------------------------------------------------------------------

struct ThreeBodyKernel::Impl {
  MassConfig mass;
  Parity parity;
  ThreeBodyGrids grids;
  int np = 0, nk = 0, nkh = 0;
  bool cplx = false;
  double parity_sign = 1.0;

  std::vector<double> coef_re, coef_im;  // np*np, quadrature+interaction factor
  std::vector<std::int32_t> idx_m, idx_p;  // np*np*nkh stencil starts
  std::vector<double> w4_m, w4_p;          // np*np*nkh*4 stencil weights

  mutable std::vector<double> dense_s;  // lazily assembled scatter matrix
  mutable std::once_flag dense_once;

  Impl(const MassConfig& m, Parity par, const ThreeBodyGrids& g)
      : mass(m), parity(par), grids(g) {
    np = static_cast<int>(grids.P.size());
    nk = static_cast<int>(grids.K.size());
    if (nk % 2 != 0)
      throw DomainError("three-body kernel: K grid order must be even");
    nkh = nk / 2;
    parity_sign = (parity == Parity::Even) ? 1.0 : -1.0;
  }

  int dim() const { return np * nkh; }

  void build_stencils() {
    const auto& kn = grids.K.nodes;
    const std::size_t per_pair = static_cast<std::size_t>(nkh);
    const std::size_t pairs = static_cast<std::size_t>(np) * np;
    idx_m.assign(pairs * per_pair, -1);
    idx_p.assign(pairs * per_pair, -1);
    w4_m.assign(pairs * per_pair * 4, 0.0);
    w4_p.assign(pairs * per_pair * 4, 0.0);
    parallel_for(static_cast<std::size_t>(np), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        for (int ip = 0; ip < np; ++ip) {
          const double s = 0.5 * (grids.P.nodes[i] - grids.P.nodes[ip]);
          const std::size_t base = (i * np + ip) * per_pair;
          for (int j = 0; j < nkh; ++j) {
            const double kj = kn[nkh + j];
            const CubicStencil sm = cubic_stencil(kn, kj - s);
            const CubicStencil sp = cubic_stencil(kn, kj + s);
            idx_m[base + j] = sm.start;
            idx_p[base + j] = sp.start;
            for (int r = 0; r < 4; ++r) {
              w4_m[(base + j) * 4 + r] = sm.w[r];
              w4_p[(base + j) * 4 + r] = sp.w[r];
            }
          }
        }
      }
    });
  }

  // Expand a half-grid state into per-P full K columns (row-major np x nk).
  void expand_columns(const double* x, std::vector<double>& full) const {
    full.resize(static_cast<std::size_t>(np) * nk);
    for (int ip = 0; ip < np; ++ip) {
      double* col = full.data() + static_cast<std::size_t>(ip) * nk;
      const double* xs = x + static_cast<std::size_t>(ip) * nkh;
      for (int j = 0; j < nkh; ++j) {
        col[nkh + j] = xs[j];
        col[nkh - 1 - j] = parity_sign * xs[j];
      }
    }
  }

  void apply_real(double eps, const double* x, double* y) const {
    std::vector<double> full;
    expand_columns(x, full);
    parallel_for(static_cast<std::size_t>(np), [&](std::size_t lo, std::size_t hi) {
      std::vector<double> acc(nkh);
      for (std::size_t i = lo; i < hi; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int ip = 0; ip < np; ++ip) {
          const std::size_t base = (i * np + ip) * static_cast<std::size_t>(nkh);
          const double c = coef_re[i * np + ip];
          const double* col = full.data() + static_cast<std::size_t>(ip) * nk;
          simd::stencil4_acc(idx_m.data() + base, w4_m.data() + base * 4, col,
                             c, acc.data(), nkh);
          simd::stencil4_acc(idx_p.data() + base, w4_p.data() + base * 4, col,
                             c, acc.data(), nkh);
        }
        const double Pi = grids.P.nodes[i];
        double* yr = y + i * nkh;
        for (int j = 0; j < nkh; ++j)
          yr[j] = assemble_green(mass, eps, Pi, grids.K.nodes[nkh + j]) * acc[j];
      }
    });
  }

  void apply_complex(double eps, const std::complex<double>* x,
                     std::complex<double>* y) const {
    const int d = dim();
    std::vector<double> xr(d), xi(d), fr, fi;
    for (int q = 0; q < d; ++q) {
      xr[q] = x[q].real();
      xi[q] = x[q].imag();
    }
    expand_columns(xr.data(), fr);
    expand_columns(xi.data(), fi);
    parallel_for(static_cast<std::size_t>(np), [&](std::size_t lo, std::size_t hi) {
      std::vector<double> ar(nkh), ai(nkh);
      for (std::size_t i = lo; i < hi; ++i) {
        std::fill(ar.begin(), ar.end(), 0.0);
        std::fill(ai.begin(), ai.end(), 0.0);
        for (int ip = 0; ip < np; ++ip) {
          const std::size_t base = (i * np + ip) * static_cast<std::size_t>(nkh);
          const double cr = coef_re[i * np + ip];
          const double ci = coef_im[i * np + ip];
          const double* cr_col = fr.data() + static_cast<std::size_t>(ip) * nk;
          const double* ci_col = fi.data() + static_cast<std::size_t>(ip) * nk;
          for (int pass = 0; pass < 2; ++pass) {
            const std::int32_t* idx = (pass ? idx_p : idx_m).data() + base;
            const double* w4 = (pass ? w4_p : w4_m).data() + base * 4;
            simd::stencil4_acc(idx, w4, cr_col, cr, ar.data(), nkh);
            simd::stencil4_acc(idx, w4, ci_col, -ci, ar.data(), nkh);
            simd::stencil4_acc(idx, w4, cr_col, ci, ai.data(), nkh);
            simd::stencil4_acc(idx, w4, ci_col, cr, ai.data(), nkh);
          }
        }
        const double Pi = grids.P.nodes[i];
        std::complex<double>* yr = y + i * nkh;
        for (int j = 0; j < nkh; ++j) {
          const double g =
              assemble_green(mass, eps, Pi, grids.K.nodes[nkh + j]);
          yr[j] = {g * ar[j], g * ai[j]};
        }
      }
    });
  }

  // Scatter matrix S with y = diag(G) S x; assembled once, real path only.
  void ensure_dense() const {
    std::call_once(dense_once, [this] {
      const std::size_t d = dim();
      dense_s.assign(d * d, 0.0);
      for (int i = 0; i < np; ++i) {
        for (int ip = 0; ip < np; ++ip) {
          const std::size_t base = (static_cast<std::size_t>(i) * np + ip) * nkh;
          const double c = coef_re[i * np + ip];
          for (int j = 0; j < nkh; ++j) {
            const std::size_t row = static_cast<std::size_t>(i) * nkh + j;
            for (int pass = 0; pass < 2; ++pass) {
              const std::int32_t st =
                  (pass ? idx_p : idx_m)[base + j];
              if (st < 0) continue;
              const double* w4 = (pass ? w4_p : w4_m).data() + (base + j) * 4;
              for (int r = 0; r < 4; ++r) {
                const int jf = st + r;
                double sgn = 1.0;
                int jh;
                if (jf >= nkh) {
                  jh = jf - nkh;
                } else {
                  jh = nkh - 1 - jf;
                  sgn = parity_sign;
                }
                dense_s[row * d + static_cast<std::size_t>(ip) * nkh + jh] +=
                    c * w4[r] * sgn;
              }
            }
          }
        }
      }
    });
  }

  void apply_dense(double eps, const double* x, double* y) const {
    ensure_dense();
    const int d = dim();
    simd::gemv_row(dense_s.data(), x, y, d, d);
    for (int i = 0; i < np; ++i) {
      const double Pi = grids.P.nodes[i];
      for (int j = 0; j < nkh; ++j)
        y[i * nkh + j] *=
            assemble_green(mass, eps, Pi, grids.K.nodes[nkh + j]);
    }
  }
};

ThreeBodyKernel::ThreeBodyKernel(const MassConfig& mass, Parity parity,
                                 const ThreeBodyGrids& grids)
    : impl_(std::make_unique<Impl>(mass, parity, grids)) {
  impl_->cplx = false;
  impl_->coef_re.resize(static_cast<std::size_t>(impl_->np) * impl_->np);
  for (int i = 0; i < impl_->np; ++i)
    for (int ip = 0; ip < impl_->np; ++ip)
      impl_->coef_re[i * impl_->np + ip] = -grids.P.weights[ip] / M_PI;
  impl_->build_stencils();
}

ThreeBodyKernel::ThreeBodyKernel(const MassConfig& mass, Parity parity,
                                 const ThreeBodyGrids& grids,
                                 const PotentialShape& shape, double v0,
                                 double q0)
    : impl_(std::make_unique<Impl>(mass, parity, grids)) {
  if (!(q0 > 0.0)) throw DomainError("three-body kernel: q0 > 0 required");
  impl_->cplx = !shape.transform_is_real();
  const int np = impl_->np;
  impl_->coef_re.resize(static_cast<std::size_t>(np) * np);
  if (impl_->cplx) impl_->coef_im.resize(static_cast<std::size_t>(np) * np);
  const double pref = v0 / q0;
  for (int i = 0; i < np; ++i) {
    for (int ip = 0; ip < np; ++ip) {
      const std::complex<double> F =
          shape.transform(q0 * (grids.P.nodes[i] - grids.P.nodes[ip]));
      const double w = grids.P.weights[ip] / M_PI;
      impl_->coef_re[i * np + ip] = pref * w * F.real();
      if (impl_->cplx) impl_->coef_im[i * np + ip] = pref * w * F.imag();
    }
  }
  impl_->build_stencils();
}

ThreeBodyKernel::~ThreeBodyKernel() = default;
ThreeBodyKernel::ThreeBodyKernel(ThreeBodyKernel&&) noexcept = default;

int ThreeBodyKernel::dim() const { return impl_->dim(); }
bool ThreeBodyKernel::complex_path() const { return impl_->cplx; }
const ThreeBodyGrids& ThreeBodyKernel::grids() const { return impl_->grids; }
const MassConfig& ThreeBodyKernel::mass() const { return impl_->mass; }
Parity ThreeBodyKernel::parity() const { return impl_->parity; }

void ThreeBodyKernel::apply(double eps, const double* x, double* y) const {
  if (impl_->cplx)
    throw DomainError("three-body kernel: complex path requires apply_c");
  impl_->apply_real(eps, x, y);
}

void ThreeBodyKernel::apply_c(double eps, const std::complex<double>* x,
                              std::complex<double>* y) const {
  impl_->apply_complex(eps, x, y);
}

std::vector<double> ThreeBodyKernel::dense_matrix(double eps) const {
  if (impl_->cplx)
    throw DomainError("dense_matrix: real-path kernels only");
  if (dim() > 2500) throw DomainError("dense_matrix: dimension above 2500");
  impl_->ensure_dense();
  const int d = dim();
  std::vector<double> A(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < impl_->np; ++i) {
    const double Pi = impl_->grids.P.nodes[i];
    for (int j = 0; j < impl_->nkh; ++j) {
      const double g = assemble_green(impl_->mass, eps, Pi,
                                      impl_->grids.K.nodes[impl_->nkh + j]);
      const std::size_t row = static_cast<std::size_t>(i) * impl_->nkh + j;
      for (int col = 0; col < d; ++col)
        A[row * d + col] = g * impl_->dense_s[row * d + col];
    }
  }
  return A;
}

std::vector<double> ThreeBodyKernel::eigenvalues(double eps, int k, double tol,
                                                 bool use_dense) const {
  const int d = dim();
  if (impl_->cplx) {
    auto op = [this, eps](const std::complex<double>* x,
                          std::complex<double>* y) {
      impl_->apply_complex(eps, x, y);
    };
    EigenResultC er = leading_eigenpairs_c(op, k, d, tol);
    std::vector<double> out;
    for (const auto& lam : er.eigenvalues) out.push_back(lam.real());
    return out;
  }
  LinearOp op;
  if (use_dense) {
    if (d > 2500) throw DomainError("eigenvalues: dense path above 2500");
    op = [this, eps](const double* x, double* y) { impl_->apply_dense(eps, x, y); };
  } else {
    op = [this, eps](const double* x, double* y) { impl_->apply_real(eps, x, y); };
  }
  return leading_eigenpairs(op, k, d, tol).eigenvalues;
}

std::vector<double> ThreeBodyKernel::expand_normalize(
    const std::vector<double>& half) const {
  const int np = impl_->np, nk = impl_->nk, nkh = impl_->nkh;
  std::vector<double> full(static_cast<std::size_t>(np) * nk);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nkh; ++j) {
      const double v = half[static_cast<std::size_t>(i) * nkh + j];
      full[static_cast<std::size_t>(i) * nk + nkh + j] = v;
      full[static_cast<std::size_t>(i) * nk + nkh - 1 - j] =
          impl_->parity_sign * v;
    }
  double nrm = 0.0, s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nk; ++j) {
      const double w =
          impl_->grids.P.weights[i] * impl_->grids.K.weights[j];
      const double v = full[static_cast<std::size_t>(i) * nk + j];
      nrm += w * v * v;
      s1 += w * v;
      s2 += w * impl_->grids.K.nodes[j] * v;
    }
  nrm = std::sqrt(nrm / (4.0 * M_PI * M_PI));
  double sign = 1.0;
  const double pick = std::abs(s1) > std::abs(s2) ? s1 : s2;
  if (pick < 0.0) sign = -1.0;
  const double scale = sign / nrm;
  for (auto& v : full) v *= scale;
  return full;
}

// ---------------------------------------------------------------------------
// Spectrum solver: per-branch bracketing of lambda_n(eps) = 1
// ---------------------------------------------------------------------------

namespace {

struct BranchScan {
  std::vector<double> eps;
  std::vector<std::vector<double>> lam;  // lam[s][n]
};

ThreeBodySpectrum spectrum_from_kernel(const ThreeBodyKernel& kernel,
                                       const SpectrumOptions& opt) {
  ThreeBodySpectrum spec;
  spec.alpha = kernel.mass().alpha;
  spec.parity = kernel.parity();
  spec.grids = kernel.grids();

  const int m = std::min(12, opt.n_states + 2);
  auto lambdas = [&](double eps) {
    return kernel.eigenvalues(eps, m, opt.eigen_tol, opt.use_dense);
  };

  double eps_lo = opt.eps_lo;
  const double eps_hi = opt.eps_hi;
  for (int widen = 0; widen < 3; ++widen) {
    if (lambdas(eps_lo)[0] < 1.0) break;
    if (widen == 2)
      throw ConvergenceError(
          "three-body spectrum: deepest eigenvalue still above 1 after window "
          "expansion", 0.0);
    eps_lo *= 4.0;
  }

  // Scan clustered toward the threshold where crossings accumulate.
  BranchScan scan;
  const int S = std::max(6, opt.scan_points);
  for (int s = 0; s < S; ++s) {
    const double u = static_cast<double>(S - 1 - s) / (S - 1);
    const double eps = eps_hi - (std::abs(eps_lo) - std::abs(eps_hi)) * u * u;
    scan.eps.push_back(eps);
    scan.lam.push_back(lambdas(eps));
  }

  struct Crossing {
    int branch;
    double lo, hi;
  };
  std::vector<Crossing> crossings;
  for (int n = 0; n < m; ++n) {
    for (std::size_t s = 0; s + 1 < scan.eps.size(); ++s) {
      const double a = scan.lam[s][n] - 1.0;
      const double b = scan.lam[s + 1][n] - 1.0;
      if (a < 0.0 && b >= 0.0) {
        // monotone check at the midpoint; split the bracket if violated
        const double mid = 0.5 * (scan.eps[s] + scan.eps[s + 1]);
        const double lm = lambdas(mid)[n] - 1.0;
        if (lm >= a && lm <= b) {
          crossings.push_back({n, scan.eps[s], scan.eps[s + 1]});
        } else if (lm >= 0.0) {
          crossings.push_back({n, scan.eps[s], mid});
        } else {
          crossings.push_back({n, mid, scan.eps[s + 1]});
        }
        break;  // monotone branch: one crossing
      }
    }
  }

  std::vector<std::pair<double, double>> roots;  // (eps, |lambda-1| residual)
  for (const Crossing& c : crossings) {
    auto h = [&](double eps) { return lambdas(eps)[c.branch] - 1.0; };
    const double tol = opt.tol * std::max(1.0, std::abs(c.lo));
    const double eps_n = bracket_root(h, c.lo, c.hi, tol);
    roots.emplace_back(eps_n, std::abs(h(eps_n)));
  }
  std::sort(roots.begin(), roots.end());

  const int found = static_cast<int>(roots.size());
  for (int n = 0; n < std::min(found, opt.n_states); ++n) {
    ThreeBodyState st;
    st.epsilon = roots[n].first;
    if (!(st.epsilon < -1.0)) continue;  // threshold guard
    if (kernel.complex_path()) {
      auto op = [&](const std::complex<double>* x, std::complex<double>* y) {
        kernel.apply_c(st.epsilon, x, y);
      };
      EigenResultC er = leading_eigenpairs_c(op, m, kernel.dim(), opt.eigen_tol);
      // branch index within this eps: the eigenvalue closest to 1
      int best = 0;
      for (int i = 1; i < static_cast<int>(er.eigenvalues.size()); ++i)
        if (std::abs(er.eigenvalues[i].real() - 1.0) <
            std::abs(er.eigenvalues[best].real() - 1.0))
          best = i;
      std::vector<double> re(kernel.dim());
      for (int q = 0; q < kernel.dim(); ++q) re[q] = er.vectors[best][q].real();
      st.wavefunction = kernel.expand_normalize(re);
      st.residual = roots[n].second + er.residuals[best];
    } else {
      LinearOp op = [&](const double* x, double* y) {
        kernel.apply(st.epsilon, x, y);
      };
      EigenResult er = leading_eigenpairs(op, m, kernel.dim(), opt.eigen_tol);
      int best = 0;
      for (int i = 1; i < static_cast<int>(er.eigenvalues.size()); ++i)
        if (std::abs(er.eigenvalues[i] - 1.0) <
            std::abs(er.eigenvalues[best] - 1.0))
          best = i;
      st.wavefunction = kernel.expand_normalize(er.vectors[best]);
      st.residual = roots[n].second + er.residuals[best];
    }
    spec.states.push_back(std::move(st));
  }
  if (static_cast<int>(spec.states.size()) < opt.n_states)
    spec.note = "window exhausted after " +
                std::to_string(spec.states.size()) + " state(s)";
  return spec;
}

}  // namespace

ThreeBodySpectrum solve_contact_spectrum(const MassConfig& mass, Parity parity,
                                         const ThreeBodyGrids& grids,
                                         const SpectrumOptions& opt) {
  ThreeBodyKernel kernel(mass, parity, grids);
  return spectrum_from_kernel(kernel, opt);
}

ThreeBodySpectrum solve_contact_auto(const MassConfig& mass, Parity parity,
                                     int np, int nk,
                                     const SpectrumOptions& opt) {
  SpectrumOptions coarse = opt;
  coarse.tol = 1e-4;
  coarse.eigen_tol = 1e-7;
  coarse.scan_points = 10;
  coarse.use_dense = false;
  const int np1 = std::max(24, (np / 2) & ~1);
  const int nk1 = std::max(24, (nk / 2) & ~1);
  double eps_guess = -3.0;
  try {
    ThreeBodySpectrum pilot = solve_contact_spectrum(
        mass, parity, default_grids(mass, np1, nk1, eps_guess), coarse);
    if (!pilot.states.empty()) eps_guess = pilot.states.front().epsilon;
  } catch (const std::exception&) {
    // fall back to the default scale guess
  }
  return solve_contact_spectrum(mass, parity,
                                default_grids(mass, np, nk, eps_guess), opt);
}

FiniteRangeResult solve_finite_range_spectrum(
    const PotentialShape& shape, double v0, const MassConfig& mass,
    Parity parity, int np, int nk, const SpectrumOptions& opt,
    const TwoBodyResult* precomputed) {
  FiniteRangeResult out;
  if (precomputed) {
    out.two_body = *precomputed;
  } else {
    TwoBodySolveOptions tb;
    tb.grid_n = 360;
    out.two_body = solve_bound_state_auto(shape, v0, tb);
  }
  const double q0 = out.two_body.q0;

  SpectrumOptions coarse = opt;
  coarse.tol = 1e-4;
  coarse.eigen_tol = 1e-7;
  coarse.scan_points = 10;
  coarse.use_dense = false;
  const int np1 = std::max(24, (np / 2) & ~1);
  const int nk1 = std::max(24, (nk / 2) & ~1);
  double eps_guess = -3.0;
  {
    ThreeBodyKernel pilot(mass, parity, default_grids(mass, np1, nk1, eps_guess),
                          shape, v0, q0);
    ThreeBodySpectrum ps = spectrum_from_kernel(pilot, coarse);
    if (!ps.states.empty()) eps_guess = ps.states.front().epsilon;
  }
  ThreeBodyKernel kernel(mass, parity, default_grids(mass, np, nk, eps_guess),
                         shape, v0, q0);
  out.spectrum = spectrum_from_kernel(kernel, opt);
  return out;
}

std::vector<UniversalPrediction> universal_prediction(
    const PotentialShape& shape, double v0, const ThreeBodySpectrum& contact,
    std::optional<double> q0_solved) {
  if (contact.states.empty())
    throw DomainError("universal_prediction: empty contact spectrum");
  const AsymptoticQ0 qa = asymptotic_q0(shape, v0);
  double qs;
  if (q0_solved) {
    qs = *q0_solved;
  } else if (shape.is_contact()) {
    qs = -v0;
  } else {
    TwoBodySolveOptions tb;
    tb.grid_n = 360;
    qs = solve_bound_state_auto(shape, v0, tb).q0;
  }
  std::vector<UniversalPrediction> out;
  int n = 0;
  for (const auto& st : contact.states) {
    UniversalPrediction up;
    up.n = n++;
    up.eps_star = st.epsilon;
    up.energy_asymptotic = st.epsilon * 0.5 * qa.value * qa.value;
    up.energy_solved = st.epsilon * 0.5 * qs * qs;
    out.push_back(up);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Iterated-kernel diagnostics
// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> subsample(std::size_t n, std::size_t want) {
  std::vector<std::size_t> out;
  const std::size_t stride = std::max<std::size_t>(1, n / want);
  for (std::size_t i = stride / 2; i < n; i += stride) out.push_back(i);
  return out;
}

}  // namespace

std::vector<IterationDiagnostics> iteration_diagnostics(
    const PotentialShape& shape, const std::vector<double>& q0_sequence,
    const MassConfig& mass, double eps, const ThreeBodySpectrum& trial) {
  if (shape.kind() != ShapeKind::TypeII)
    throw DomainError("iteration_diagnostics: type-II shapes only");
  if (trial.states.empty())
    throw DomainError("iteration_diagnostics: trial spectrum has no states");
  const std::vector<double>& phi = trial.states.front().wavefunction;
  const MomentumGrid& gp = trial.grids.P;
  const MomentumGrid& gk = trial.grids.K;
  const int np = static_cast<int>(gp.size());
  const int nk = static_cast<int>(gk.size());
  {
    double nrm = 0.0;
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < nk; ++j)
        nrm += gp.weights[i] * gk.weights[j] *
               phi[static_cast<std::size_t>(i) * nk + j] *
               phi[static_cast<std::size_t>(i) * nk + j];
    nrm /= 4.0 * M_PI * M_PI;
    if (std::abs(nrm - 1.0) > 1e-6)
      throw DomainError("iteration_diagnostics: trial state not normalized");
  }
  const double J = moment_J(shape);

  // Evaluation lattices: P and K subsampled from the trial grids; P'' runs
  // over the full trial P grid so its quadrature weights are available.
  const std::vector<std::size_t> pi_sel = subsample(np, 18);
  std::vector<std::size_t> kj_sel;
  for (std::size_t j : subsample(nk / 2, 12)) kj_sel.push_back(nk / 2 + j);

  const MomentumGrid gpp = build_grid(64, 2.0 * gk.map_scale);  // P' for I2/I3

  std::vector<IterationDiagnostics> out;
  for (double q0 : q0_sequence) {
    if (!(q0 > 0.0)) throw DomainError("iteration_diagnostics: q0 > 0");
    IterationDiagnostics d;
    d.q0 = q0;
    const MomentumGrid gq =
        build_two_scale_grid(128, q0, shape.range_scale());  // p' for I1/I4
    const int nq = static_cast<int>(gq.size());

    // F tables. FA[a][t] = F(q0 P_a - p'_t), FB[b][t] = F(p'_t - q0 P''_b);
    // FA2/FB2 are the same factors on the P'-grid used inside I2/I3.
    const int ns = static_cast<int>(gpp.size());
    std::vector<std::complex<double>> FA(pi_sel.size() * nq), FB(np * nq);
    std::vector<std::complex<double>> FA2(pi_sel.size() * ns), FB2(np * ns);
    for (std::size_t a = 0; a < pi_sel.size(); ++a) {
      for (int t = 0; t < nq; ++t)
        FA[a * nq + t] =
            shape.transform(q0 * gp.nodes[pi_sel[a]] - gq.nodes[t]);
      for (int t = 0; t < ns; ++t)
        FA2[a * ns + t] =
            shape.transform(q0 * (gp.nodes[pi_sel[a]] - gpp.nodes[t]));
    }
    for (int b = 0; b < np; ++b) {
      for (int t = 0; t < nq; ++t)
        FB[b * nq + t] = shape.transform(gq.nodes[t] - q0 * gp.nodes[b]);
      for (int t = 0; t < ns; ++t)
        FB2[b * ns + t] =
            shape.transform(q0 * (gpp.nodes[t] - gp.nodes[b]));
    }

    // Column interpolator of the trial state in K.
    auto phi_at = [&](int col, double K) {
      const double* v = phi.data() + static_cast<std::size_t>(col) * nk;
      const CubicStencil s = cubic_stencil(gk.nodes, K);
      if (s.start < 0) return 0.0;
      return s.w[0] * v[s.start] + s.w[1] * v[s.start + 1] +
             s.w[2] * v[s.start + 2] + s.w[3] * v[s.start + 3];
    };

    // W_s(p') = F(q0P - p') F(p' - q0P'') /
    //           (q0^2 eps - ap p'^2 - ak [q0(K + sP/2) - s p'/2]^2)
    auto denom = [&](double q0KsP, double sgn, double pq) {
      const double br = q0KsP - sgn * 0.5 * pq;
      return q0 * q0 * eps - mass.alpha_p * pq * pq - mass.alpha_k * br * br;
    };

    double n1 = 0, n2 = 0, n3 = 0, n4 = 0, wsum = 0, amax = 0;
    double resid_num = 0, resid_den = 0;

    std::vector<std::complex<double>> inv_m(nq), inv_p(nq);
    std::vector<double> green_m(ns), green_p(ns);
    for (std::size_t a = 0; a < pi_sel.size(); ++a) {
      const double P = gp.nodes[pi_sel[a]];
      for (std::size_t kj : kj_sel) {
        const double K = gk.nodes[kj];
        for (int t = 0; t < nq; ++t) {
          const double pq = gq.nodes[t];
          inv_m[t] = gq.weights[t] / denom(q0 * (K - 0.5 * P), -1.0, pq);
          inv_p[t] = gq.weights[t] / denom(q0 * (K + 0.5 * P), +1.0, pq);
        }
        for (int t = 0; t < ns; ++t) {
          const double Pq = gpp.nodes[t];
          green_m[t] = gpp.weights[t] *
                       assemble_green(mass, eps, Pq, K - 0.5 * (P - Pq));
          green_p[t] = gpp.weights[t] *
                       assemble_green(mass, eps, Pq, K + 0.5 * (P - Pq));
        }
        std::complex<double> sum14{};
        double sum_contact = 0.0;
        for (int b = 0; b < np; ++b) {
          const double Ppp = gp.nodes[b];
          const double wb = gp.weights[b];

          // I1/I4 inner integrals over p'
          std::complex<double> int_m{}, int_p{};
          for (int t = 0; t < nq; ++t) {
            const std::complex<double> ff = FA[a * nq + t] * FB[b * nq + t];
            int_m += ff * inv_m[t];
            int_p += ff * inv_p[t];
          }
          const double phi_m = phi_at(b, K - 0.5 * (P - Ppp));
          const double phi_p = phi_at(b, K + 0.5 * (P - Ppp));
          const std::complex<double> I1 = phi_m * int_m / M_PI;
          const std::complex<double> I4 = phi_p * int_p / M_PI;

          // I2/I3: P'-integrals with the trial state inside
          std::complex<double> I2{}, I3{};
          for (int t = 0; t < ns; ++t) {
            const double Pq = gpp.nodes[t];
            const std::complex<double> ff = FA2[a * ns + t] * FB2[b * ns + t];
            I2 += phi_at(b, K - 0.5 * (P + Ppp) + Pq) * ff * green_m[t];
            I3 += phi_at(b, K + 0.5 * (P + Ppp) - Pq) * ff * green_p[t];
          }
          I2 /= M_PI * q0;
          I3 /= M_PI * q0;

          const double u = wb;
          n1 += u * std::norm(I1);
          n2 += u * std::norm(I2);
          n3 += u * std::norm(I3);
          n4 += u * std::norm(I4);
          wsum += u;
          sum14 += wb * (I1 + I4);
          sum_contact += wb * (phi_m + phi_p);

          // |A+-|/q0 over |p'| <= q0
          for (int t = -4; t <= 4; ++t) {
            const double pq = q0 * t / 4.0;
            const std::complex<double> ff =
                shape.transform(q0 * P - pq) * shape.transform(pq - q0 * Ppp);
            const double wm = std::abs(ff / denom(q0 * (K - 0.5 * P), -1.0, pq));
            const double wp = std::abs(ff / denom(q0 * (K + 0.5 * P), +1.0, pq));
            amax = std::max({amax, wm, wp});
          }
        }
        const double g = assemble_green(mass, eps, P, K);
        const std::complex<double> numer = g * (M_PI / J) * sum14 / M_PI;
        const double target = -g * sum_contact / M_PI;
        resid_num += std::norm(numer - target);
        resid_den += target * target;
      }
    }
    d.I1 = std::sqrt(n1 / wsum);
    d.I2 = std::sqrt(n2 / wsum);
    d.I3 = std::sqrt(n3 / wsum);
    d.I4 = std::sqrt(n4 / wsum);
    d.A_pm_max = amax;
    d.residual_to_contact = std::sqrt(resid_num / resid_den);
    out.push_back(d);
  }
  return out;
}

}  // namespace fbu
