#include "fbu/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fbu/errors.hpp"
#include "fbu/numerics/eigenpairs.hpp"
#include "fbu/parallel.hpp"
#include "fbu/simd/simd.hpp"

namespace fbu {

namespace {

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
int sturm_count(const std::vector<double>& diag, double off, double x) {
  int count = 0;
  double d = 1.0;
  const double off2 = off * off;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    d = diag[i] - x - (i > 0 ? off2 / d : 0.0);
    if (d == 0.0) d = 1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

// Lowest eigenvalue by Sturm bisection to near machine precision.
double tridiag_lowest(const std::vector<double>& diag, double off) {
  double lo = diag[0];
  for (double d : diag) lo = std::min(lo, d);
  lo -= 2.0 * std::abs(off) + 1.0;
  double hi = 0.0;
  if (sturm_count(diag, off, hi) == 0)
    throw NoBoundState("oracle: no negative eigenvalue on this grid");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(diag, off, mid) >= 1)
      hi = mid;
    else
      lo = mid;
    if ((hi - lo) < 1e-15 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// Inverse iteration via the Thomas algorithm on (T - sigma I).
std::vector<double> tridiag_ground_vector(const std::vector<double>& diag,
                                          double off, double sigma) {
  const std::size_t n = diag.size();
  std::vector<double> x(n, 1.0), c(n), d(n);
  for (int iter = 0; iter < 4; ++iter) {
    // forward sweep
    double b0 = diag[0] - sigma;
    if (std::abs(b0) < 1e-300) b0 = 1e-300;
    c[0] = off / b0;
    d[0] = x[0] / b0;
    for (std::size_t i = 1; i < n; ++i) {
      double denom = (diag[i] - sigma) - off * c[i - 1];
      if (std::abs(denom) < 1e-300) denom = 1e-300;
      c[i] = off / denom;
      d[i] = (x[i] - off * d[i - 1]) / denom;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    double nrm = std::sqrt(simd::nrm2sq(x.data(), n));
    for (auto& v : x) v /= nrm;
  }
  if (x[n / 2] < 0.0)
    for (auto& v : x) v = -v;
  return x;
}

std::vector<double> potential_samples_1d(const PotentialShape& shape, double v0,
                                         const SpatialGrid& grid) {
  const int n = grid.n;
  const double h = grid.spacing();
  std::vector<double> v(n, 0.0);
  if (shape.is_contact()) {
    v[(n - 1) / 2] = v0 / h;  // on-node point potential, integral v0
  } else {
    for (int i = 0; i < n; ++i) v[i] = v0 * shape.f(-grid.extent + i * h);
  }
  return v;
}

}  // namespace

OracleTwoBody two_body_coordinate(const PotentialShape& shape, double v0,
                                  const SpatialGrid& grid) {
  if (grid.n % 2 == 0 || grid.n < 9)
    throw DomainError("oracle grid: n must be odd and >= 9");
  const double h = grid.spacing();
  const double kin = 1.0 / (h * h);  // -(1/2) d2: diag 1/h^2, off -1/(2h^2)
  std::vector<double> diag = potential_samples_1d(shape, v0, grid);
  for (auto& d : diag) d += kin;
  const double off = -0.5 / (h * h);

  OracleTwoBody out;
  out.energy = tridiag_lowest(diag, off);
  out.spacing = h;
  out.psi = tridiag_ground_vector(diag, off, out.energy - 1e-11 * std::abs(out.energy) - 1e-14);
  const double scale = 1.0 / std::sqrt(h);
  for (auto& p : out.psi) p *= scale;  // sum h psi^2 = 1
  return out;
}

OracleTwoBody two_body_coordinate_refined(const PotentialShape& shape,
                                          double v0, const SpatialGrid& base,
                                          int levels) {
  if (levels < 2) return two_body_coordinate(shape, v0, base);
  std::vector<double> e;
  SpatialGrid g = base;
  OracleTwoBody finest;
  for (int l = 0; l < levels; ++l) {
    finest = two_body_coordinate(shape, v0, g);
    e.push_back(finest.energy);
    g.n = 2 * g.n - 1;
  }
  // Richardson table in h^2
  std::vector<std::vector<double>> t(levels);
  for (int i = 0; i < levels; ++i) {
    t[i].resize(i + 1);
    t[i][0] = e[i];
    double f = 1.0;
    for (int j = 1; j <= i; ++j) {
      f *= 4.0;
      t[i][j] = (f * t[i][j - 1] - t[i - 1][j - 1]) / (f - 1.0);
    }
  }
  OracleTwoBody out = std::move(finest);
  out.energy = t[levels - 1][levels - 1];
  out.error_bar =
      std::abs(t[levels - 1][levels - 1] - t[levels - 2][levels - 2]);
  return out;
}

// ---------------------------------------------------------------------------
// Three-body finite-difference Hamiltonian
// ---------------------------------------------------------------------------

namespace {

struct Fd2d {
  int nx = 0, ny = 0;
  bool half_x = false;
  double hx = 0, hy = 0;
  std::vector<double> diag;      // nx*ny
  std::vector<double> cx, cy;    // couplings between neighbors (size n-1)

  int dim() const { return nx * ny; }

  void apply(const double* x, double* y) const {
    parallel_for(static_cast<std::size_t>(nx), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        double* yr = y + i * ny;
        const double* xr = x + i * ny;
        simd::mul_ew(diag.data() + i * ny, xr, yr, ny);
        for (int j = 0; j + 1 < ny; ++j) {
          yr[j] += cy[j] * xr[j + 1];
          yr[j + 1] += cy[j] * xr[j];
        }
        if (i > 0)
          simd::axpy(cx[i - 1], x + (i - 1) * ny, yr, ny);
        if (i + 1 < static_cast<std::size_t>(nx))
          simd::axpy(cx[i], x + (i + 1) * ny, yr, ny);
      }
    });
  }
};

Fd2d build_fd2d(const PotentialShape& shape, double v0, const MassConfig& mass,
                const ThreeBodyOracleOptions& opt) {
  Fd2d H;
  H.hx = opt.hx;
  H.hy = 2.0 * opt.hx;  // contact lines x = +-y/2 pass through nodes
  H.half_x = shape.is_contact() || shape.transform_is_real();
  const double ckx = 0.5 * mass.alpha_p / (H.hx * H.hx);
  const double cky = 0.5 * mass.alpha_k / (H.hy * H.hy);

  const int mx = std::max(4, static_cast<int>(std::round(opt.extent_x / H.hx)));
  const int my = std::max(4, static_cast<int>(std::round(opt.extent_y / H.hy)));
  H.nx = H.half_x ? mx + 1 : 2 * mx + 1;
  H.ny = my + 1;  // y >= 0, even sector

  auto node_x = [&](int i) {
    return H.half_x ? i * H.hx : -mx * H.hx + i * H.hx;
  };
  auto node_y = [&](int j) { return j * H.hy; };
  const int ix0 = H.half_x ? 0 : mx;  // index of x = 0

  // couplings: -c, with sqrt(2) folding at the reflection node
  H.cx.assign(H.nx - 1, -ckx);
  if (H.half_x) H.cx[0] = -std::sqrt(2.0) * ckx;
  H.cy.assign(H.ny - 1, -cky);
  H.cy[0] = -std::sqrt(2.0) * cky;

  H.diag.assign(static_cast<std::size_t>(H.nx) * H.ny, 0.0);
  for (int i = 0; i < H.nx; ++i) {
    for (int j = 0; j < H.ny; ++j) {
      double v = 2.0 * ckx + 2.0 * cky;
      if (!shape.is_contact()) {
        const double xx = node_x(i), yy = node_y(j);
        v += v0 * (shape.f(xx - 0.5 * yy) + shape.f(xx + 0.5 * yy));
      }
      H.diag[static_cast<std::size_t>(i) * H.ny + j] = v;
    }
  }
  if (shape.is_contact()) {
    // v0 [delta(x - y/2) + delta(x + y/2)] -> v0/hx at the on-grid lines
    for (int j = 0; j < H.ny; ++j) {
      const int di = j;  // y_j / 2 = j hx
      if (ix0 + di < H.nx)
        H.diag[static_cast<std::size_t>(ix0 + di) * H.ny + j] += v0 / H.hx;
      if (j > 0) {
        const int i2 = ix0 - di;
        if (H.half_x) {
          // x = -y/2 lies outside the half grid; even sector sees only x>=0
        } else if (i2 >= 0) {
          H.diag[static_cast<std::size_t>(i2) * H.ny + j] += v0 / H.hx;
        }
      }
    }
  }
  return H;
}

}  // namespace

OracleThreeBody three_body_coordinate(const PotentialShape& shape, double v0,
                                      const MassConfig& mass,
                                      const ThreeBodyOracleOptions& opt) {
  Fd2d H = build_fd2d(shape, v0, mass, opt);
  LinearOp op = [&H](const double* x, double* y) { H.apply(x, y); };
  std::vector<double> evs = lowest_eigenvalues_symmetric(
      op, H.dim(), opt.n_states, opt.lanczos_tol, opt.max_cycles);

  // matched-spacing two-body reference
  SpatialGrid g1;
  g1.extent = opt.extent_x;
  int n1 = static_cast<int>(std::round(2.0 * opt.extent_x / opt.hx)) + 1;
  if (n1 % 2 == 0) ++n1;
  g1.n = n1;
  const OracleTwoBody tb = two_body_coordinate(shape, v0, g1);

  OracleThreeBody out;
  out.energies = evs;
  out.e2 = tb.energy;
  for (double e : evs) out.epsilons.push_back(e / std::abs(tb.energy));
  out.nx = H.nx;
  out.ny = H.ny;
  return out;
}

OracleThreeBody three_body_coordinate_refined(const PotentialShape& shape,
                                              double v0,
                                              const MassConfig& mass,
                                              const ThreeBodyOracleOptions& opt,
                                              int levels) {
  std::vector<OracleThreeBody> runs;
  ThreeBodyOracleOptions o = opt;
  for (int l = 0; l < levels; ++l) {
    runs.push_back(three_body_coordinate(shape, v0, mass, o));
    o.hx *= 0.5;
  }
  OracleThreeBody out = runs.back();
  if (levels >= 2) {
    // one Richardson step in h^2 on each epsilon
    std::vector<double> extrap;
    for (std::size_t s = 0; s < out.epsilons.size(); ++s) {
      const double e_coarse = runs[levels - 2].epsilons[s];
      const double e_fine = runs[levels - 1].epsilons[s];
      extrap.push_back((4.0 * e_fine - e_coarse) / 3.0);
    }
    out.error_bar = std::abs(extrap[0] - out.epsilons[0]);
    out.epsilons = std::move(extrap);
  }
  return out;
}

}  // namespace fbu
