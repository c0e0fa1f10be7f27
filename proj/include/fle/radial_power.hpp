#pragma once

// Fractional calculus on radial powers c|x|^e.
//
// For order t in (0,1) the action on powers is the Gamma multiplier
//   (-Delta)^t |x|^{(2t-n)/2 + beta} = gamma_t(beta) |x|^{(2t-n)/2 + beta - 2t},
//   gamma_t(beta) = 2^{2t} G((n+2t+2b)/4) G((n+2t-2b)/4)
//                          / [G((n-2t-2b)/4) G((n-2t+2b)/4)],
// valid on the window -(n+2t)/2 < beta < (n-2t)/2.  Orders s in (1,2) are
// realized as (-Delta) o (-Delta)^{s-1}, which keeps every step exact on the
// power-function algebra; the pointwise p.v. integral is only absolutely
// convergent (after folding) for orders below 1, so it is never evaluated
// at the full order.  An independent p.v.-quadrature oracle recomputes the
// order-t multiplier from the singular-integral definition.

#include <cmath>
#include <utility>

#include "fle/common.hpp"
#include "fle/exponents.hpp"
#include "fle/gamma.hpp"
#include "fle/quadrature.hpp"

namespace fle {

// x -> coefficient * |x|^exponent on R^n minus the origin.
struct RadialPower {
  double coefficient = 0.0;
  double exponent = 0.0;
};

// Admissible beta for the order-t multiplier.
inline std::pair<double, double> fall_window(int n, double t) {
  return {-0.5 * (n + 2.0 * t), 0.5 * (n - 2.0 * t)};
}

// gamma_t(beta).  On the symmetric part |beta| < (n-2t)/2 all four Gamma
// arguments are positive and the value is positive and even in beta; on the
// tail beta <= -(n-2t)/2 the last denominator argument drops into (-1, 0]
// and is lifted with Gamma(z) = Gamma(z+1)/z (the multiplier vanishes at
// beta = -(n-2t)/2 and is negative below it).
inline double gamma_t_beta(int n, double t, double beta) {
  require_domain(t > 0.0 && t < 1.0, "gamma_t_beta: order t must be in (0,1)");
  const auto [lo, hi] = fall_window(n, t);
  require_domain(beta > lo && beta < hi,
                 "gamma_t_beta: beta outside the admissibility window");
  const double a1 = 0.25 * (n + 2.0 * t + 2.0 * beta);
  const double a2 = 0.25 * (n + 2.0 * t - 2.0 * beta);
  const double a3 = 0.25 * (n - 2.0 * t - 2.0 * beta);
  const double a4 = 0.25 * (n - 2.0 * t + 2.0 * beta);
  const double scale = std::pow(2.0, 2.0 * t);
  if (a4 > 0.0) return scale * gamma_ratio(a1, a3) * gamma_ratio(a2, a4);
  if (a4 == 0.0) return 0.0;
  // Gamma(a4) = Gamma(a4 + 1) / a4 with a4 in (-1, 0)
  return scale * a4 * gamma_ratio(a1, a3) * gamma_ratio(a2, a4 + 1.0);
}

// (-Delta)(c |x|^eta) = -c eta (n + eta - 2) |x|^{eta-2}, pointwise away
// from the origin.
inline RadialPower laplacian_power(int n, const RadialPower& f) {
  const double eta = f.exponent;
  return {-f.coefficient * eta * (n + eta - 2.0), eta - 2.0};
}

// (-Delta)^s for s in (1,2) as the order-(s-1) multiplier followed by one
// exact Laplacian step; total exponent shift is -2s, computed directly.
inline RadialPower frac_laplacian_power(int n, double s, const RadialPower& f) {
  require_domain(s > 1.0 && s < 2.0,
                 "frac_laplacian_power: order s must be in (1,2)");
  const double t = s - 1.0;
  const double beta = f.exponent + 0.5 * (n - 2.0 * t);
  const double g = gamma_t_beta(n, t, beta);
  const double eta = f.exponent - 2.0 * t;
  return {-f.coefficient * g * eta * (n + eta - 2.0), f.exponent - 2.0 * s};
}

// Fourier-symbol normalization of the singular-integral definition,
// c_{n,t} = 4^t Gamma(n/2 + t) / (pi^{n/2} |Gamma(-t)|), written with
// |Gamma(-t)| = Gamma(1-t)/t.
inline double fraclap_normalization(int n, double t) {
  require_domain(t > 0.0 && t < 1.0, "fraclap_normalization: t in (0,1)");
  return std::pow(4.0, t) * t * gamma_pos(0.5 * n + t) /
         (std::pow(pi, 0.5 * n) * gamma_pos(1.0 - t));
}

namespace detail {

// Folded numerator t^{d-1} - t^{d-1-a} + t^{w-1} - t^{w-1+a} times the
// chord power (t^2 + 1 - 2 t mu)^{-(n+w)/2}, with d = n and w = 2*order.
// The numerator is factored as t^{w-1} expm1(a L) expm1((d-w-a) L), L = ln t,
// which keeps its double zero at t=1 free of cancellation, and the product
// is assembled in log space: near the (t,mu) = (1,1) corner the chord factor
// alone can exceed the double range even where the product is moderate.
inline double folded_integrand(double tp, double dist1, double one_minus_mu,
                               int n, double two_ord, double a) {
  const double L = (tp > 0.5) ? std::log1p(-dist1) : std::log(tp);
  const double e1 = std::expm1(a * L);
  const double e2 = std::expm1((n - two_ord - a) * L);
  if (e1 == 0.0 || e2 == 0.0) return 0.0;
  // ln((1-t)^2 + 2 t (1-mu)) by log-sum-exp; the direct sum underflows
  // near the corner where both pieces are below 1e-154 squared.
  const double la = 2.0 * std::log(dist1);
  const double lb = (one_minus_mu > 0.0)
                        ? std::log(2.0 * tp * one_minus_mu)
                        : -std::numeric_limits<double>::infinity();
  const double hi = std::max(la, lb), lo = std::min(la, lb);
  const double ln_base = hi + std::log1p(std::exp(lo - hi));
  const double lv = (two_ord - 1.0) * L + std::log(std::abs(e1)) +
                    std::log(std::abs(e2)) - 0.5 * (n + two_ord) * ln_base;
  const double sign = ((e1 < 0.0) != (e2 < 0.0)) ? -1.0 : 1.0;
  return sign * std::exp(lv);
}

}  // namespace detail

// Independent oracle: evaluates c_{n,t} p.v. int (|x|^e - |y|^e)/|x-y|^{n+2t}
// at |x| = 1 through the fold onto t' in (0,1] (absolutely convergent for
// t < 1) and the zonal reduction; returns the coefficient of |x|^{e-2t}.
inline double quadrature_fraclap_oracle(int n, double t, double e,
                                        double tol = 1e-8) {
  require_domain(t > 0.0 && t < 1.0,
                 "quadrature_fraclap_oracle: order t must be in (0,1)");
  const auto [lo, hi] = fall_window(n, t);
  const double beta = e + 0.5 * (n - 2.0 * t);
  require_domain(beta > lo && beta < hi,
                 "quadrature_fraclap_oracle: exponent outside window");
  const double a = -e;
  const double two_t = 2.0 * t;

  auto inner = [&](double one_minus_mu) {
    QuadOptions opt;
    opt.rel_tol = std::min(1e-11, 0.01 * tol);
    opt.max_level = 13;
    // t' is taken from the distance to the left endpoint, which stays
    // accurate after the node coordinate itself has rounded to 0 or 1.
    return integrate_tanh_sinh(
        [&](double /*x*/, double d0, double d1) {
          return detail::folded_integrand(d0, d1, one_minus_mu, n, two_t, a);
        },
        0.0, 1.0, opt);
  };

  // The inner value grows like (1-mu)^{(3-n-2t)/2} toward mu = 1 and leaves
  // the double range long before its weighted contribution matters.  Nodes
  // past v_floor are dropped; the neglected tail is O(v_floor^{1-t}).
  const double q = 0.5 * (n + two_t);
  const double v_floor =
      (q > 1.0) ? std::pow(10.0, -280.0 / (q - 1.0)) : 0.0;

  double sphere;
  if (n == 1) {
    sphere = inner(0.0) + inner(2.0);  // two-point sphere, mu = +1 and -1
  } else {
    const double zonal_pow = 0.5 * (n - 3.0);
    QuadOptions opt;
    opt.rel_tol = std::min(1e-9, 0.1 * tol);
    opt.max_level = 12;
    sphere = unit_sphere_area(n - 1) *
             integrate_tanh_sinh(
                 [&](double /*mu*/, double one_plus_mu, double one_minus_mu) {
                   if (one_minus_mu < v_floor) return 0.0;
                   return std::pow(one_plus_mu * one_minus_mu, zonal_pow) *
                          inner(one_minus_mu);
                 },
                 -1.0, 1.0, opt);
  }
  const double value = fraclap_normalization(n, t) * sphere;
  if (!finite(value))
    throw numerical_error("quadrature_fraclap_oracle: non-finite result");
  return value;
}

struct SingularSolutionCheck {
  double beta = 0.0;
  bool beta_in_window = false;
  double exponent = 0.0;           // exponent of (-Delta)^s u_s
  double expected_exponent = 0.0;  // p * (exponent of u_s)
  bool exponent_match = false;
  double amplitude = 0.0;
  double coefficient_residual = 0.0;  // |coeff - A^p| / A^p
};

// Builds u_s = A |x|^{-2s/(p-1)} with A from the exponents module, pushes it
// through frac_laplacian_power and verifies (-Delta)^s u_s = u_s^p exactly in
// the exponent and to Gamma-identity accuracy in the coefficient.
inline SingularSolutionCheck verify_singular_solution(int n, double s,
                                                      double p) {
  require_domain(s > 1.0 && s < 2.0, "verify_singular_solution: s in (1,2)");
  const double ps = sobolev_exponent(n, s);
  require_domain(p > ps, "verify_singular_solution: requires p > p_S(n,s)");

  SingularSolutionCheck out;
  out.amplitude = singular_amplitude(n, s, p);
  const RadialPower u{out.amplitude, -2.0 * s / (p - 1.0)};

  const double tt = s - 1.0;
  out.beta = u.exponent + 0.5 * (n - 2.0 * tt);
  const auto [lo, hi] = fall_window(n, tt);
  out.beta_in_window = (out.beta > lo && out.beta < hi);

  const RadialPower lhs = frac_laplacian_power(n, s, u);
  out.exponent = lhs.exponent;
  out.expected_exponent = p * u.exponent;  // -2sp/(p-1)
  out.exponent_match =
      std::abs(out.exponent - out.expected_exponent) <=
      8.0 * 1.11e-16 * std::max(1.0, std::abs(out.expected_exponent));

  const double rhs_coeff = std::pow(out.amplitude, p);
  out.coefficient_residual = std::abs(lhs.coefficient - rhs_coeff) / rhs_coeff;
  return out;
}

}  // namespace fle
