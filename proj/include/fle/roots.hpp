#pragma once

// Bracketed scalar root finding (Brent's method).

#include <cmath>
#include <functional>

#include "fle/common.hpp"

namespace fle {

// Root of f in [a, b]; f(a) and f(b) must have opposite signs.
// Converges to |interval| <= rel_tol * |root| (plus a few ulps).
inline double find_root_brent(const std::function<double(double)>& f, double a,
                              double b, double rel_tol = 1e-12,
                              int max_iter = 200) {
  double fa = f(a), fb = f(b);
  require_domain(fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0),
                 "find_root_brent: root not bracketed");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb < 0.0) == (fc < 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * 1.11e-16 * std::abs(b) + 0.5 * rel_tol * std::abs(b);
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {  // secant
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {  // inverse quadratic
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw numerical_error("find_root_brent: no convergence");
}

}  // namespace fle
