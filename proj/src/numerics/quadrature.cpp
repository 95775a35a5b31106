#include "fbu/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fbu/errors.hpp"

namespace fbu {

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw DomainError("gauss_legendre: n >= 1 required");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

MomentumGrid build_grid(int n, double map_scale) {
  if (n < 8 || n % 2 != 0)
    throw DomainError("build_grid: order must be even and >= 8");
  if (!(map_scale > 0.0)) throw DomainError("build_grid: map scale must be > 0");
  std::vector<double> t, w;
  gauss_legendre(n, t, w);
  MomentumGrid g;
  g.map_scale = map_scale;
  g.order = n;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double half = 0.5 * M_PI * t[i];
    const double c = std::cos(half);
    g.nodes[i] = map_scale * std::tan(half);
    g.weights[i] = w[i] * map_scale * (0.5 * M_PI) / (c * c);
  }
  // Exact mirror symmetry: rebuild the negative half from the positive one.
  for (int i = 0; i < n / 2; ++i) {
    g.nodes[i] = -g.nodes[n - 1 - i];
    g.weights[i] = g.weights[n - 1 - i];
  }
  return g;
}

namespace {

// GL nodes of panel [a,b] appended to grid (a >= 0 side only).
void append_panel(std::vector<double>& nodes, std::vector<double>& weights,
                  double a, double b, int n) {
  std::vector<double> t, w;
  gauss_legendre(n, t, w);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    nodes.push_back(mid + half * t[i]);
    weights.push_back(w[i] * half);
  }
}

// Log-mapped panel [a,b] (0 < a < b): p = exp(u), resolves power laws that
// span decades.
void append_log_panel(std::vector<double>& nodes, std::vector<double>& weights,
                      double a, double b, int n) {
  std::vector<double> t, w;
  gauss_legendre(n, t, w);
  const double la = std::log(a), lb = std::log(b);
  const double mid = 0.5 * (la + lb), half = 0.5 * (lb - la);
  for (int i = 0; i < n; ++i) {
    const double p = std::exp(mid + half * t[i]);
    nodes.push_back(p);
    weights.push_back(w[i] * half * p);
  }
}

// Rational tail [b, inf): p = b + s u/(1-u), u in (0,1).
void append_tail(std::vector<double>& nodes, std::vector<double>& weights,
                 double b, double s, int n) {
  std::vector<double> t, w;
  gauss_legendre(n, t, w);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (t[i] + 1.0);
    const double om = 1.0 - u;
    nodes.push_back(b + s * u / om);
    weights.push_back(0.5 * w[i] * s / (om * om));
  }
}

}  // namespace

MomentumGrid build_two_scale_grid(int n, double s_small, double s_large) {
  if (!(s_small > 0.0) || !(s_large > 0.0))
    throw DomainError("build_two_scale_grid: scales must be > 0");
  if (s_small > s_large) std::swap(s_small, s_large);
  if (s_large / s_small < 4.0)
    return build_grid(n, std::sqrt(s_small * s_large));
  if (n < 24 || n % 2 != 0)
    throw DomainError("build_two_scale_grid: order must be even and >= 24");

  // Positive half: core [0, 8 s_small], mid [8 s_small, 8 s_large],
  // tail [8 s_large, inf). Mirrored for the negative half.
  const int half = n / 2;
  int n_core = std::max(4, half * 2 / 5);
  int n_tail = std::max(3, half / 5);
  int n_mid = half - n_core - n_tail;
  if (n_mid < 4) {
    n_mid = 4;
    n_core = half - n_mid - n_tail;
  }
  const double a = 8.0 * s_small;
  const double b = 8.0 * s_large;

  std::vector<double> pos_nodes, pos_weights;
  append_panel(pos_nodes, pos_weights, 0.0, a, n_core);
  append_log_panel(pos_nodes, pos_weights, a, b, n_mid);
  append_tail(pos_nodes, pos_weights, b, s_large, n_tail);

  MomentumGrid g;
  g.map_scale = s_small;
  g.order = n;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < half; ++i) {
    g.nodes[half + i] = pos_nodes[i];
    g.weights[half + i] = pos_weights[i];
    g.nodes[half - 1 - i] = -pos_nodes[i];
    g.weights[half - 1 - i] = pos_weights[i];
  }
  return g;
}

double integrate_grid(const MomentumGrid& g,
                      const std::function<double(double)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += g.weights[i] * f(g.nodes[i]);
  return acc;
}

namespace {

// Paired Gauss estimates: coarse 7-point and fine 15-point rules on (-1,1).
struct PairRule {
  std::vector<double> x7, w7, x15, w15;
  PairRule() {
    gauss_legendre(7, x7, w7);
    gauss_legendre(15, x15, w15);
  }
};

const PairRule& pair_rule() {
  static const PairRule r;
  return r;
}

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
};

template <typename T>
void eval_segment(const std::function<T(double)>& f, Segment<T>& s) {
  const PairRule& r = pair_rule();
  const double mid = 0.5 * (s.a + s.b), half = 0.5 * (s.b - s.a);
  T coarse{}, fine{};
  for (int i = 0; i < 7; ++i) coarse += r.w7[i] * f(mid + half * r.x7[i]);
  for (int i = 0; i < 15; ++i) fine += r.w15[i] * f(mid + half * r.x15[i]);
  coarse *= half;
  fine *= half;
  s.value = fine;
  s.error = std::abs(fine - coarse);
}

template <typename T>
T adaptive_impl(const std::function<T(double)>& f, double a, double b,
                double rel_tol, double abs_tol) {
  if (!(a < b)) {
    if (a == b) return T{};
    throw DomainError("integrate_adaptive: a < b required");
  }
  constexpr int kMaxSegments = 4000;
  auto worse = [](const Segment<T>& l, const Segment<T>& r) {
    return l.error < r.error;
  };
  std::priority_queue<Segment<T>, std::vector<Segment<T>>, decltype(worse)> q(
      worse);
  Segment<T> s0{a, b, T{}, 0.0};
  eval_segment(f, s0);
  T total = s0.value;
  double total_err = s0.error;
  q.push(s0);
  int count = 1;
  while (total_err > std::max(rel_tol * std::abs(total), abs_tol)) {
    if (count >= kMaxSegments)
      throw ConvergenceError("adaptive quadrature: interval budget exhausted",
                             total_err);
    Segment<T> worst = q.top();
    q.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment<T> left{worst.a, mid, T{}, 0.0};
    Segment<T> right{mid, worst.b, T{}, 0.0};
    eval_segment(f, left);
    eval_segment(f, right);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    q.push(left);
    q.push(right);
    ++count;
  }
  return total;
}

template <typename T>
T line_impl(const std::function<T(double)>& f, double rel_tol, double L,
            double abs_tol) {
  // x = L t / (1 - t^2): maps (-1,1) onto the real line, polynomial decay
  // of the integrand becomes integrable at the ends.
  auto mapped = std::function<T(double)>([&f, L](double t) -> T {
    const double om = 1.0 - t * t;
    const double x = L * t / om;
    const double jac = L * (1.0 + t * t) / (om * om);
    return f(x) * jac;
  });
  return adaptive_impl<T>(mapped, -1.0, 1.0, rel_tol, abs_tol);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol) {
  return adaptive_impl<double>(f, a, b, rel_tol, abs_tol);
}

std::complex<double> integrate_adaptive_c(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double rel_tol, double abs_tol) {
  return adaptive_impl<std::complex<double>>(f, a, b, rel_tol, abs_tol);
}

double integrate_line(const std::function<double(double)>& f, double rel_tol,
                      double map_scale, double abs_tol) {
  return line_impl<double>(f, rel_tol, map_scale, abs_tol);
}

std::complex<double> integrate_line_c(
    const std::function<std::complex<double>(double)>& f, double rel_tol,
    double map_scale, double abs_tol) {
  return line_impl<std::complex<double>>(f, rel_tol, map_scale, abs_tol);
}

}  // namespace fbu
