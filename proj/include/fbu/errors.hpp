#ifndef FBU_ERRORS_HPP
#define FBU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fbu {

/// Precondition or out-of-domain argument.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative procedure stopped before reaching its tolerance. Carries the
/// best residual achieved so callers can report how close it got.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A root bracket with no sign change; stores both endpoint values.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& msg, double f_lo, double f_hi)
      : std::runtime_error(msg), f_lo_(f_lo), f_hi_(f_hi) {}
  double f_lo() const { return f_lo_; }
  double f_hi() const { return f_hi_; }

 private:
  double f_lo_, f_hi_;
};

/// Solve finished but found no bound state in the search window.
class NoBoundState : public std::runtime_error {
 public:
  explicit NoBoundState(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fbu

#endif
