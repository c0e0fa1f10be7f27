#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fle {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double inf = std::numeric_limits<double>::infinity();

// Thrown when an iterative scheme (quadrature, root refinement, ODE solve,
// series fit) fails to reach its tolerance.  Distinct from std::domain_error
// so callers can map the two to different exit codes.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_domain(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

inline bool finite(double x) { return std::isfinite(x); }

// |a - b| <= tol * max(1, |b|): relative for large values, absolute near 0.
inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace fle
