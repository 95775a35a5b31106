#include "fbu/potential.hpp"

#include <cmath>

#include "fbu/errors.hpp"
#include "fbu/numerics/quadrature.hpp"

namespace fbu {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

const char* kind_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::Contact: return "contact";
    case ShapeKind::TypeI: return "type-I";
    case ShapeKind::TypeII: return "type-II";
  }
  return "?";
}

struct PotentialShape::Impl {
  std::string name;
  Params params;
  ShapeKind kind = ShapeKind::TypeI;
  bool contact = false;
  bool real_transform = false;
  double range = 1.0;
  double m1 = 0.0;  // integral xi f dxi
  std::function<double(double)> f;
  std::function<std::complex<double>(double)> F;  // empty -> quadrature
};

PotentialShape::PotentialShape(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

const std::string& PotentialShape::name() const { return impl_->name; }
ShapeKind PotentialShape::kind() const { return impl_->kind; }
const PotentialShape::Params& PotentialShape::params() const {
  return impl_->params;
}
bool PotentialShape::is_contact() const { return impl_->contact; }
bool PotentialShape::has_closed_transform() const {
  return static_cast<bool>(impl_->F);
}
bool PotentialShape::transform_is_real() const {
  return impl_->real_transform;
}
double PotentialShape::range_scale() const { return impl_->range; }
double PotentialShape::first_moment() const { return impl_->m1; }

double PotentialShape::f(double xi) const {
  if (impl_->contact)
    throw DomainError("contact shape has no pointwise coordinate form");
  return impl_->f(xi);
}

std::complex<double> PotentialShape::transform(double p) const {
  if (!std::isfinite(p)) throw DomainError("shape_transform: p must be finite");
  if (impl_->F) return impl_->F(p);
  const auto& f = impl_->f;
  return integrate_line_c(
      [&f, p](double xi) {
        return f(xi) * std::exp(std::complex<double>(0.0, -p * xi));
      },
      1e-10, impl_->range, 1e-14);
}

double PotentialShape::small_p_limit() const { return impl_->m1 * impl_->m1; }

std::complex<double> shape_transform(const PotentialShape& shape, double p) {
  return shape.transform(p);
}

namespace {

double quad_first_moment(const std::function<double(double)>& f,
                         double range) {
  return integrate_line([&f](double xi) { return xi * f(xi); }, 1e-10, range,
                        1e-13);
}

std::shared_ptr<PotentialShape::Impl> base_impl(const std::string& name,
                                                PotentialShape::Params params) {
  auto impl = std::make_shared<PotentialShape::Impl>();
  impl->name = name;
  impl->params = std::move(params);
  return impl;
}

double get_param(const PotentialShape::Params& p, const std::string& key,
                 double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

}  // namespace

PotentialShape PotentialShape::custom(
    const std::string& name, std::function<double(double)> f,
    std::function<std::complex<double>(double)> F_closed, const Params& params,
    double range_scale) {
  auto impl = base_impl(name, params);
  impl->f = std::move(f);
  impl->F = std::move(F_closed);
  impl->range = range_scale;
  if (impl->f) impl->m1 = quad_first_moment(impl->f, range_scale);
  PotentialShape s(impl);
  // classify() needs a constructed shape; patch the kind in afterwards.
  auto kind = classify(s);
  auto patched = std::make_shared<Impl>(*impl);
  patched->kind = kind;
  return PotentialShape(std::move(patched));
}

std::vector<std::string> PotentialShape::catalog_names() {
  return {"contact",        "gaussian",           "exponential",
          "skew-gaussian",  "shifted-gaussian",   "mexican-hat",
          "shifted-mexican-hat"};
}

PotentialShape PotentialShape::make(const std::string& name,
                                    const Params& params) {
  auto impl = base_impl(name, params);
  if (name == "contact") {
    impl->contact = true;
    impl->kind = ShapeKind::Contact;
    impl->real_transform = true;
    impl->F = [](double) { return std::complex<double>(1.0, 0.0); };
    return PotentialShape(std::move(impl));
  }
  if (name == "gaussian") {
    const double w = get_param(params, "width", 1.0);
    if (!(w > 0)) throw DomainError("gaussian: width must be > 0");
    impl->f = [w](double xi) { return std::exp(-(xi / w) * (xi / w)); };
    impl->F = [w](double p) {
      return std::complex<double>(w * kSqrtPi * std::exp(-w * w * p * p / 4),
                                  0.0);
    };
    impl->kind = ShapeKind::TypeI;
    impl->real_transform = true;
    impl->range = w;
    impl->m1 = 0.0;
    return PotentialShape(std::move(impl));
  }
  if (name == "exponential") {
    const double a = get_param(params, "range", 1.0);
    if (!(a > 0)) throw DomainError("exponential: range must be > 0");
    impl->f = [a](double xi) { return std::exp(-std::abs(xi) / a); };
    impl->F = [a](double p) {
      return std::complex<double>(2.0 * a / (1.0 + a * a * p * p), 0.0);
    };
    impl->kind = ShapeKind::TypeI;
    impl->real_transform = true;
    impl->range = a;
    impl->m1 = 0.0;
    return PotentialShape(std::move(impl));
  }
  if (name == "skew-gaussian") {
    // Anisotropic: gaussian with a linear tilt, F picks up a phase.
    const double beta = get_param(params, "beta", 0.5);
    impl->f = [beta](double xi) {
      return (1.0 + beta * xi) * std::exp(-xi * xi);
    };
    impl->F = [beta](double p) {
      const double g = kSqrtPi * std::exp(-p * p / 4);
      return std::complex<double>(g, -0.5 * beta * p * g);
    };
    impl->kind = ShapeKind::TypeI;
    impl->real_transform = (beta == 0.0);
    impl->m1 = beta * kSqrtPi / 2.0;  // integral xi (1 + beta xi) e^{-xi^2}
    return PotentialShape(std::move(impl));
  }
  if (name == "shifted-gaussian") {
    const double w = get_param(params, "width", 1.0);
    const double a = get_param(params, "shift", 0.3);
    if (!(w > 0)) throw DomainError("shifted-gaussian: width must be > 0");
    impl->f = [w, a](double xi) {
      const double u = (xi - a) / w;
      return std::exp(-u * u);
    };
    impl->F = [w, a](double p) {
      return w * kSqrtPi * std::exp(-w * w * p * p / 4) *
             std::exp(std::complex<double>(0.0, -p * a));
    };
    impl->kind = ShapeKind::TypeI;
    impl->real_transform = (a == 0.0);
    impl->range = w + std::abs(a);
    impl->m1 = a * w * kSqrtPi;
    return PotentialShape(std::move(impl));
  }
  if (name == "mexican-hat" || name == "shifted-mexican-hat") {
    const double w = get_param(params, "width", 1.0);
    const double a =
        name == "shifted-mexican-hat" ? get_param(params, "shift", 0.3) : 0.0;
    if (!(w > 0)) throw DomainError("mexican-hat: width must be > 0");
    impl->f = [w, a](double xi) {
      const double u = (xi - a) / w;
      return (1.0 - 2.0 * u * u) * std::exp(-u * u);
    };
    impl->F = [w, a](double p) {
      const double wp = w * p;
      const double mag = w * kSqrtPi * (wp * wp / 2.0) * std::exp(-wp * wp / 4);
      return mag * std::exp(std::complex<double>(0.0, -p * a));
    };
    impl->kind = ShapeKind::TypeII;
    impl->real_transform = (a == 0.0);
    impl->range = w + std::abs(a);
    impl->m1 = 0.0;  // zero-integral shape: the shift drops out
    return PotentialShape(std::move(impl));
  }
  throw DomainError("unknown shape: " + name);
}

ShapeKind classify(const PotentialShape& shape, double tol_zero) {
  if (shape.is_contact()) return ShapeKind::Contact;
  const double F0 = std::abs(shape.transform(0.0));
  if (F0 >= tol_zero) return ShapeKind::TypeI;
  // |F(0)| ~ 0: require |F(p)|^2/p^2 bounded as p -> 0. Sample a dyadic
  // sequence and flag sustained growth as divergence.
  double prev = -1.0;
  int growing = 0;
  for (int k = 2; k <= 24; ++k) {
    const double p = std::pow(2.0, -k);
    const double g = std::norm(shape.transform(p)) / (p * p);
    if (prev >= 0.0 && g > 1.8 * prev && g > 1e3)
      ++growing;
    else
      growing = 0;
    if (growing >= 5)
      throw DomainError("classify: F(0) = 0 but |F(p)|^2/p^2 diverges for " +
                        shape.name());
    prev = g;
  }
  return ShapeKind::TypeII;
}

double moment_J(const PotentialShape& shape) {
  if (shape.kind() != ShapeKind::TypeII)
    throw DomainError("moment_J: defined for type-II shapes only (got " +
                      std::string(kind_name(shape.kind())) + ")");
  const double g0 = shape.small_p_limit();
  auto integrand = [&shape, g0](double p) {
    if (std::abs(p) < 1e-14) return g0;
    return std::norm(shape.transform(p)) / (p * p);
  };
  return integrate_line(integrand, 1e-10, shape.range_scale(), 1e-14);
}

bool short_range_ok(const PotentialShape& shape) {
  if (shape.is_contact()) return true;
  const double R = 30.0 * shape.range_scale();
  const double lo = std::abs(R * R * shape.f(-R));
  const double hi = std::abs(R * R * shape.f(R));
  return std::max(lo, hi) < 1e-8;
}

}  // namespace fbu
