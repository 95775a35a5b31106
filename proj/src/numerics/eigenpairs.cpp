#include "fbu/numerics/eigenpairs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "fbu/errors.hpp"
#include "fbu/simd/simd.hpp"

namespace fbu {

namespace {

constexpr int kMaxBasis = 250;
constexpr int kMaxRestarts = 10;
constexpr int kDenseLimit = 2500;

// ---- scalar helpers shared by the real and complex paths ----------------

inline double vdot(const double* x, const double* y, std::size_t n) {
  return simd::dot(x, y, n);
}
inline std::complex<double> vdot(const std::complex<double>* x,
                                 const std::complex<double>* y,
                                 std::size_t n) {
  std::complex<double> acc{};
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}
inline void vaxpy(double a, const double* x, double* y, std::size_t n) {
  simd::axpy(a, x, y, n);
}
inline void vaxpy(std::complex<double> a, const std::complex<double>* x,
                  std::complex<double>* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}
inline double vnorm(const double* x, std::size_t n) {
  return std::sqrt(simd::nrm2sq(x, n));
}
inline double vnorm(const std::complex<double>* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(x[i]);
  return std::sqrt(acc);
}

template <typename S>
struct RitzPair {
  std::complex<double> value;
  Eigen::VectorXcd coeff;   // Hessenberg eigenvector
  double residual_bound;    // h_{m+1,m} |last coeff|
};

// Eigen decomposition of the leading m x m Hessenberg block, pairs sorted by
// descending real part (stable, so exact ties keep iteration order).
template <typename S>
std::vector<RitzPair<S>> ritz_of_hessenberg(
    const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& H, int m,
    double h_next) {
  std::vector<RitzPair<S>> out;
  if constexpr (std::is_same_v<S, double>) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(m, m));
    for (int i = 0; i < m; ++i) {
      RitzPair<S> rp;
      rp.value = es.eigenvalues()(i);
      rp.coeff = es.eigenvectors().col(i);
      rp.residual_bound = h_next * std::abs(rp.coeff(m - 1));
      out.push_back(std::move(rp));
    }
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(m, m));
    for (int i = 0; i < m; ++i) {
      RitzPair<S> rp;
      rp.value = es.eigenvalues()(i);
      rp.coeff = es.eigenvectors().col(i);
      rp.residual_bound = h_next * std::abs(rp.coeff(m - 1));
      out.push_back(std::move(rp));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RitzPair<S>& a, const RitzPair<S>& b) {
                     return a.value.real() > b.value.real();
                   });
  return out;
}

template <typename S>
using ApplyFn = std::function<void(const S*, S*)>;

// Arnoldi with full modified Gram-Schmidt (plus one refinement pass) and
// single-vector restarts built from the wanted Ritz directions.
template <typename S>
struct ArnoldiOutcome {
  std::vector<std::complex<double>> values;
  std::vector<std::vector<S>> vectors;  // unit norm
  std::vector<double> residuals;        // explicit ||Kv - lambda v||
  bool converged = false;
  double best_residual = 1e300;
};

template <typename S>
ArnoldiOutcome<S> arnoldi(const ApplyFn<S>& apply, int k, int dim, double tol) {
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  const int m_cap = std::min(kMaxBasis, dim);
  ArnoldiOutcome<S> out;

  std::vector<S> start(dim, S(1.0 / std::sqrt(static_cast<double>(dim))));
  std::vector<std::vector<S>> V;
  Mat H = Mat::Zero(m_cap + 1, m_cap);

  auto run_cycle = [&](std::vector<S> v0) -> std::vector<RitzPair<S>> {
    V.clear();
    H.setZero();
    const double n0 = vnorm(v0.data(), dim);
    for (auto& x : v0) x = S(x / n0);
    V.push_back(std::move(v0));
    std::vector<S> w(dim);
    std::vector<RitzPair<S>> ritz;
    for (int j = 0; j < m_cap; ++j) {
      apply(V[j].data(), w.data());
      // MGS with one reorthogonalization sweep
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const S h = vdot(V[i].data(), w.data(), dim);
          if (pass == 0)
            H(i, j) += h;
          else
            H(i, j) += h;
          vaxpy(S(-h), V[i].data(), w.data(), dim);
        }
      }
      const double hn = vnorm(w.data(), dim);
      H(j + 1, j) = S(hn);
      const int m = j + 1;
      const bool breakdown = hn < 1e-13;
      const bool checkpoint =
          breakdown || m == m_cap ||
          (m >= std::max(2 * k, 10) && m % 10 == 0);
      if (checkpoint) {
        ritz = ritz_of_hessenberg<S>(H, m, hn);
        const int want = std::min(k, m);
        bool ok = true;
        for (int i = 0; i < want; ++i)
          ok = ok && ritz[i].residual_bound <= 0.5 * tol;
        if (ok || breakdown || m == m_cap) return ritz;
      }
      for (auto& x : w) x = S(x / hn);
      V.push_back(w);
    }
    return ritz;
  };

  std::vector<S> v0 = start;
  for (int cycle = 0; cycle <= kMaxRestarts; ++cycle) {
    std::vector<RitzPair<S>> ritz = run_cycle(v0);
    const int m = static_cast<int>(ritz.size());
    const int want = std::min(k, m);
    if (want == 0) continue;

    // Assemble Ritz vectors, measure explicit residuals.
    out.values.clear();
    out.vectors.clear();
    out.residuals.clear();
    double worst = 0.0;
    std::vector<S> tmp(dim);
    for (int i = 0; i < want; ++i) {
      std::vector<S> v(dim, S(0));
      for (int j = 0; j < m; ++j) {
        const std::complex<double> c = ritz[i].coeff(j);
        if constexpr (std::is_same_v<S, double>)
          vaxpy(c.real(), V[j].data(), v.data(), dim);
        else
          vaxpy(S(c), V[j].data(), v.data(), dim);
      }
      const double nv = vnorm(v.data(), dim);
      if (nv > 0)
        for (auto& x : v) x = S(x / nv);
      apply(v.data(), tmp.data());
      const std::complex<double> lam = ritz[i].value;
      double rs = 0.0;
      if constexpr (std::is_same_v<S, double>) {
        // residual against the real part; complex parts are flagged upstream
        for (int q = 0; q < dim; ++q) {
          const double d = tmp[q] - lam.real() * v[q];
          rs += d * d;
        }
        rs = std::sqrt(rs);
      } else {
        for (int q = 0; q < dim; ++q) rs += std::norm(tmp[q] - S(lam) * v[q]);
        rs = std::sqrt(rs);
      }
      worst = std::max(worst, rs);
      out.values.push_back(lam);
      out.vectors.push_back(std::move(v));
      out.residuals.push_back(rs);
    }
    out.best_residual = std::min(out.best_residual, worst);
    if (worst <= tol) {
      out.converged = true;
      return out;
    }
    // Restart direction: sum of wanted Ritz vectors.
    v0.assign(dim, S(0));
    for (int i = 0; i < want; ++i)
      vaxpy(S(1.0), out.vectors[i].data(), v0.data(), dim);
    if (vnorm(v0.data(), dim) < 1e-300) v0 = start;
  }
  return out;
}

EigenResult finalize_real(ArnoldiOutcome<double>&& a, int k) {
  EigenResult r;
  const int n = std::min<int>(k, a.values.size());
  for (int i = 0; i < n; ++i) {
    r.eigenvalues.push_back(a.values[i].real());
    r.imag_parts.push_back(a.values[i].imag());
    if (std::abs(a.values[i].imag()) >
        1e-8 * std::max(1.0, std::abs(a.values[i])))
      r.has_complex = true;
    r.vectors.push_back(std::move(a.vectors[i]));
    r.residuals.push_back(a.residuals[i]);
  }
  for (int i = 0; i + 1 < n; ++i)
    if (std::abs(r.eigenvalues[i] - r.eigenvalues[i + 1]) < 1e-10)
      r.has_degeneracy = true;
  return r;
}

}  // namespace

EigenResult eigenpairs_dense(const LinearOp& apply, int k, int dim) {
  Eigen::MatrixXd A(dim, dim);
  std::vector<double> e(dim, 0.0), col(dim);
  for (int j = 0; j < dim; ++j) {
    e[j] = 1.0;
    apply(e.data(), col.data());
    e[j] = 0.0;
    for (int i = 0; i < dim; ++i) A(i, j) = col[i];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return es.eigenvalues()(a).real() > es.eigenvalues()(b).real();
  });
  EigenResult r;
  const int want = std::min(k, dim);
  for (int i = 0; i < want; ++i) {
    const auto lam = es.eigenvalues()(order[i]);
    r.eigenvalues.push_back(lam.real());
    r.imag_parts.push_back(lam.imag());
    if (std::abs(lam.imag()) > 1e-8 * std::max(1.0, std::abs(lam)))
      r.has_complex = true;
    Eigen::VectorXcd vc = es.eigenvectors().col(order[i]);
    std::vector<double> v(dim);
    double nv = 0.0;
    for (int q = 0; q < dim; ++q) {
      v[q] = vc(q).real();
      nv += v[q] * v[q];
    }
    nv = std::sqrt(nv);
    if (nv > 0)
      for (auto& x : v) x /= nv;
    // explicit residual
    std::vector<double> tmp(dim);
    apply(v.data(), tmp.data());
    double rs = 0.0;
    for (int q = 0; q < dim; ++q) {
      const double d = tmp[q] - lam.real() * v[q];
      rs += d * d;
    }
    r.residuals.push_back(std::sqrt(rs));
    r.vectors.push_back(std::move(v));
  }
  for (int i = 0; i + 1 < want; ++i)
    if (std::abs(r.eigenvalues[i] - r.eigenvalues[i + 1]) < 1e-10)
      r.has_degeneracy = true;
  return r;
}

EigenResult leading_eigenpairs(const LinearOp& apply, int k, int dim,
                               double tol) {
  if (k < 1 || k > 12) throw DomainError("leading_eigenpairs: need 1 <= k <= 12");
  if (dim < 1) throw DomainError("leading_eigenpairs: empty operator");
  ArnoldiOutcome<double> a = arnoldi<double>(apply, k, dim, tol);
  if (!a.converged) {
    if (dim <= kDenseLimit) return eigenpairs_dense(apply, k, dim);
    throw ConvergenceError("leading_eigenpairs: Arnoldi stalled",
                           a.best_residual);
  }
  return finalize_real(std::move(a), k);
}

// Thick-restart Lanczos (Wu-Simon): expand to m_cap with full
// reorthogonalization, keep the lowest Ritz vectors plus the residual
// direction, restart with the arrowhead projected matrix.
std::vector<double> lowest_eigenvalues_symmetric(const LinearOp& apply,
                                                 int dim, int n_want,
                                                 double tol, int max_cycles) {
  if (n_want < 1 || n_want > dim)
    throw DomainError("lowest_eigenvalues_symmetric: bad n_want");
  const int m_cap = std::min(dim, std::max(40, 6 * n_want + 60));
  const int keep = std::min(m_cap - 6, n_want + 10);

  std::vector<std::vector<double>> basis;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m_cap, m_cap);
  basis.emplace_back(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  int coupled_rows = 0;  // rows with preset couplings into the newest column
  double best_res = 1e300;

  std::vector<double> w(dim);
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    // Expand: process the last vector, append its successor, repeat. The
    // final pass produces the residual direction without appending it.
    double beta_next = 0.0;
    std::vector<double> w_next;
    bool invariant = false;
    while (true) {
      const int j = static_cast<int>(basis.size()) - 1;
      apply(basis[j].data(), w.data());
      for (int i = 0; i < coupled_rows; ++i)
        simd::axpy(-T(i, j), basis[i].data(), w.data(), dim);
      if (j > 0 && coupled_rows <= j - 1)
        simd::axpy(-T(j - 1, j), basis[j - 1].data(), w.data(), dim);
      const double alpha = simd::dot(basis[j].data(), w.data(), dim);
      T(j, j) = alpha;
      simd::axpy(-alpha, basis[j].data(), w.data(), dim);
      // safeguard sweep against the whole basis
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const double h = simd::dot(basis[i].data(), w.data(), dim);
          simd::axpy(-h, basis[i].data(), w.data(), dim);
        }
      coupled_rows = 0;
      const double beta = std::sqrt(simd::nrm2sq(w.data(), dim));
      if (static_cast<int>(basis.size()) == m_cap || beta < 1e-13) {
        beta_next = beta;
        if (beta >= 1e-13) {
          w_next = w;
          for (auto& x : w_next) x /= beta;
        } else {
          invariant = true;
        }
        break;
      }
      T(j + 1, j) = T(j, j + 1) = beta;
      std::vector<double> nb(w);
      for (auto& x : nb) x /= beta;
      basis.push_back(std::move(nb));
    }

    const int m = static_cast<int>(basis.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(m, m));

    // explicit residuals for the lowest n_want Ritz pairs
    double worst = 0.0;
    std::vector<std::vector<double>> ritz;
    const int nw = std::min(n_want, m);
    for (int i = 0; i < nw; ++i) {
      std::vector<double> y(dim, 0.0);
      for (int j = 0; j < m; ++j)
        simd::axpy(es.eigenvectors()(j, i), basis[j].data(), y.data(), dim);
      apply(y.data(), w.data());
      simd::axpy(-es.eigenvalues()(i), y.data(), w.data(), dim);
      worst = std::max(worst, std::sqrt(simd::nrm2sq(w.data(), dim)));
      ritz.push_back(std::move(y));
    }
    best_res = std::min(best_res, worst);
    if (worst <= tol || invariant) {
      if (worst > tol)
        throw ConvergenceError(
            "lowest_eigenvalues_symmetric: invariant subspace before "
            "convergence", worst);
      std::vector<double> out(nw);
      for (int i = 0; i < nw; ++i) out[i] = es.eigenvalues()(i);
      return out;
    }

    // restart basis: kept Ritz vectors + residual direction
    std::vector<std::vector<double>> nb;
    for (int i = 0; i < keep; ++i) {
      if (i < nw) {
        nb.push_back(std::move(ritz[i]));
      } else {
        std::vector<double> y(dim, 0.0);
        for (int j = 0; j < m; ++j)
          simd::axpy(es.eigenvectors()(j, i), basis[j].data(), y.data(), dim);
        nb.push_back(std::move(y));
      }
      const double nn = std::sqrt(simd::nrm2sq(nb.back().data(), dim));
      for (auto& x : nb.back()) x /= nn;
    }
    T.setZero();
    for (int i = 0; i < keep; ++i) {
      T(i, i) = es.eigenvalues()(i);
      const double sigma = beta_next * es.eigenvectors()(m - 1, i);
      T(i, keep) = T(keep, i) = sigma;
    }
    nb.push_back(std::move(w_next));
    basis = std::move(nb);
    coupled_rows = keep;
  }
  throw ConvergenceError("lowest_eigenvalues_symmetric: not converged",
                         best_res);
}

EigenResultC leading_eigenpairs_c(const LinearOpC& apply, int k, int dim,
                                  double tol) {
  if (k < 1 || k > 12)
    throw DomainError("leading_eigenpairs_c: need 1 <= k <= 12");
  if (dim < 1) throw DomainError("leading_eigenpairs_c: empty operator");
  ArnoldiOutcome<std::complex<double>> a =
      arnoldi<std::complex<double>>(apply, k, dim, tol);
  if (!a.converged)
    throw ConvergenceError("leading_eigenpairs_c: Arnoldi stalled",
                           a.best_residual);
  EigenResultC r;
  const int n = std::min<int>(k, a.values.size());
  for (int i = 0; i < n; ++i) {
    r.eigenvalues.push_back(a.values[i]);
    r.vectors.push_back(std::move(a.vectors[i]));
    r.residuals.push_back(a.residuals[i]);
  }
  for (int i = 0; i + 1 < n; ++i)
    if (std::abs(r.eigenvalues[i] - r.eigenvalues[i + 1]) < 1e-10)
      r.has_degeneracy = true;
  return r;
}

}  // namespace fbu
