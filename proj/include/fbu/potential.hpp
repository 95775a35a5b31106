#ifndef FBU_POTENTIAL_HPP
#define FBU_POTENTIAL_HPP

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fbu {

enum class ShapeKind { Contact, TypeI, TypeII };

const char* kind_name(ShapeKind k);

/// A pair-interaction shape f(xi) together with its momentum transform
/// F(p) = integral dxi exp(-i p xi) f(xi). Shapes are immutable after
/// construction and safe to share across threads. The full potential is
/// v(xi) = v0 * f(xi); v0 lives with the solvers, not here.
class PotentialShape {
 public:
  using Params = std::map<std::string, double>;

  /// Catalog factory. Known names: contact, gaussian, exponential,
  /// skew-gaussian, shifted-gaussian, mexican-hat, shifted-mexican-hat.
  static PotentialShape make(const std::string& name,
                             const Params& params = {});
  static std::vector<std::string> catalog_names();

  /// Escape hatch for tests and experiments: shape from explicit callables.
  /// If F_closed is empty the transform falls back to adaptive quadrature.
  static PotentialShape custom(
      const std::string& name, std::function<double(double)> f,
      std::function<std::complex<double>(double)> F_closed,
      const Params& params = {}, double range_scale = 1.0);

  const std::string& name() const;
  ShapeKind kind() const;
  const Params& params() const;
  bool is_contact() const;
  bool has_closed_transform() const;
  /// True if F(p) is real for all p (reflection-symmetric shape).
  bool transform_is_real() const;

  /// Coordinate-space shape. Throws DomainError for the contact shape.
  double f(double xi) const;

  /// F(p): closed form when registered, else adaptive quadrature with
  /// relative tolerance 1e-10. Throws ConvergenceError if quadrature stalls.
  std::complex<double> transform(double p) const;

  /// lim_{p->0} |F(p)|^2 / p^2 (finite for smooth short-range shapes).
  double small_p_limit() const;

  /// First moment integral xi f(xi) dxi (enters small_p_limit).
  double first_moment() const;

  /// Characteristic range used to scale quadratures.
  double range_scale() const;

  struct Impl;  // definition private to the implementation file

 private:
  explicit PotentialShape(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// F(p) for a shape (free-function spelling of PotentialShape::transform).
std::complex<double> shape_transform(const PotentialShape& shape, double p);

/// Classifies a shape from its transform: Contact for the registered
/// zero-range shape; TypeII if |F(0)| < tol_zero and |F(p)|^2/p^2 stays
/// bounded as p -> 0; TypeI otherwise. Throws DomainError when |F(0)| is
/// below tol_zero but the bound diverges.
ShapeKind classify(const PotentialShape& shape, double tol_zero = 1e-12);

/// J = integral dp |F(p)|^2 / p^2 for a type-II shape, adaptive quadrature
/// at relative tolerance 1e-10 with the removable p=0 point supplied by the
/// analytic limit. Throws DomainError for contact/type-I shapes.
double moment_J(const PotentialShape& shape);

/// Numerical short-range check: xi^2 f(xi) at the quadrature cutoff.
bool short_range_ok(const PotentialShape& shape);

}  // namespace fbu

#endif
