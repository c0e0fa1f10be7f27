#pragma once

// The monotonicity functional
//
//   E(r, x0, u_e) = r^{2s(p+1)/(p-1)-n} ( 1/2 int_{B_r^+} y^{3-2s} |D_b u_e|^2
//                                         - C/(p+1) int_{disk} u_e^{p+1} )
//                 + surface u^2 term + d/dr terms + tangential terms,
//
// evaluated over half-balls centered on the boundary, plus the rescaling
// u_e^lam(X) = lam^{2s/(p-1)} u_e(lam X) and the structural checks that come
// with it (scale invariance, homogeneous-field degeneracy).  Fields are
// axisymmetric profiles u(rho, y), rho = |x|; centers off the symmetry axis
// are supported for n <= 2 through an extra angular rule.

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "fle/common.hpp"
#include "fle/exponents.hpp"
#include "fle/quadrature.hpp"

namespace fle {

// value and partial derivatives of the profile u(rho, y)
struct FieldDerivs {
  double u = 0.0;
  double u_r = 0.0, u_y = 0.0;
  double u_rr = 0.0, u_ry = 0.0, u_yy = 0.0;
};

struct HalfSpaceField {
  double p = 5.0;
  double s = 1.5;
  bool singular_origin = false;  // grading hint for the radial rule
  std::vector<double> radial_breakpoints;  // kinks (e.g. a support edge)
  std::function<FieldDerivs(double, double)> f;

  double homogeneity_degree() const { return -2.0 * s / (p - 1.0); }
};

// ------------------------------------------------------ built-in fields

inline HalfSpaceField field_zero(double p, double s) {
  return {p, s, false, {}, [](double, double) { return FieldDerivs{}; }};
}

// exp(-(ax rho^2 + ay y^2)); anisotropy exercises the tangential terms
inline HalfSpaceField field_gaussian(double p, double s, double ax = 1.0,
                                     double ay = 1.0) {
  return {p, s, false, {}, [ax, ay](double rho, double y) {
            const double u = std::exp(-(ax * rho * rho + ay * y * y));
            FieldDerivs d;
            d.u = u;
            d.u_r = -2.0 * ax * rho * u;
            d.u_y = -2.0 * ay * y * u;
            d.u_rr = (-2.0 * ax + 4.0 * ax * ax * rho * rho) * u;
            d.u_yy = (-2.0 * ay + 4.0 * ay * ay * y * y) * u;
            d.u_ry = 4.0 * ax * ay * rho * y * u;
            return d;
          }};
}

namespace detail {

// profiles of the form u = g(z), z = rho^2 + y^2
template <typename G, typename G1, typename G2>
HalfSpaceField radial_field(double p, double s, bool singular, G g, G1 g1,
                            G2 g2) {
  return {p, s, singular, {},
          [g, g1, g2](double rho, double y) {
            const double z = rho * rho + y * y;
            const double gp = g1(z), gpp = g2(z);
            FieldDerivs d;
            d.u = g(z);
            d.u_r = 2.0 * rho * gp;
            d.u_y = 2.0 * y * gp;
            d.u_rr = 2.0 * gp + 4.0 * rho * rho * gpp;
            d.u_yy = 2.0 * gp + 4.0 * y * y * gpp;
            d.u_ry = 4.0 * rho * y * gpp;
            return d;
          }};
}

}  // namespace detail

// |X|^q
inline HalfSpaceField field_homogeneous(double p, double s, double q) {
  return detail::radial_field(
      p, s, true, [q](double z) { return std::pow(z, 0.5 * q); },
      [q](double z) { return 0.5 * q * std::pow(z, 0.5 * q - 1.0); },
      [q](double z) {
        return 0.5 * q * (0.5 * q - 1.0) * std::pow(z, 0.5 * q - 2.0);
      });
}

// compactly supported C^3 bump (1 - |X|^2/R^2)^4
inline HalfSpaceField field_bump(double p, double s, double radius = 1.0) {
  const double r2 = radius * radius;
  // w below the rounding floor of 1 - z/R^2 is indistinguishable from the
  // support edge; snapping it to zero keeps quadrature nodes that land
  // exactly on the edge sphere from sampling pure cancellation noise
  HalfSpaceField out = detail::radial_field(
      p, s, false,
      [r2](double z) {
        const double w = 1.0 - z / r2;
        return (w > 1e-14) ? w * w * w * w : 0.0;
      },
      [r2](double z) {
        const double w = 1.0 - z / r2;
        return (w > 1e-14) ? -4.0 * w * w * w / r2 : 0.0;
      },
      [r2](double z) {
        const double w = 1.0 - z / r2;
        return (w > 1e-14) ? 12.0 * w * w / (r2 * r2) : 0.0;
      });
  out.radial_breakpoints = {radius};
  return out;
}

inline HalfSpaceField rescale_field(const HalfSpaceField& field, double lam) {
  require_domain(lam > 0.0, "rescale_field: lambda must be positive");
  const double k = -field.homogeneity_degree();  // 2s/(p-1)
  const double a0 = std::pow(lam, k);
  const auto inner = field.f;
  HalfSpaceField out = field;
  for (double& bp : out.radial_breakpoints) bp /= lam;
  out.f = [inner, lam, a0](double rho, double y) {
    FieldDerivs d = inner(lam * rho, lam * y);
    d.u *= a0;
    d.u_r *= a0 * lam;
    d.u_y *= a0 * lam;
    d.u_rr *= a0 * lam * lam;
    d.u_ry *= a0 * lam * lam;
    d.u_yy *= a0 * lam * lam;
    return d;
  };
  return out;
}

struct EnergyQuadConfig {
  double rel_tol = 1e-11;
  int max_level = 11;
  int angle_points = 64;   // periodic rule for off-axis centers (n = 2)
  double hr = 1e-4;        // relative step of the d/dr stencils
  double boundary_constant = 1.0;  // C in the T1 boundary term
};

struct EnergyBreakdown {
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0, t6 = 0.0;
  double total = 0.0;
  double alpha_mono = 0.0;  // n + b - 4s/(p-1)
  double beta_mono = 0.0;   // (2s/(p-1)) ((p+2s-1)/(p-1) - n - b)
  bool mono_coercive = false;  // alpha - beta - 1 > 0
};

namespace detail {

// everything needed from the field at one quadrature node, relative to a
// center sitting on the boundary at distance rho0 from the symmetry axis
struct NodeData {
  double u, radial, tangential_sq, delta_b;
};

inline NodeData node_data(const HalfSpaceField& field, int n, double rho0,
                          double cos_psi, double rr, double tau,
                          double one_m_tau, double one_p_tau) {
  // point = center + rr * Theta, Theta = (sqrt(1-tau^2) sigma, tau)
  const double st = std::sqrt(one_m_tau * one_p_tau);  // sin of polar angle
  const double xpar = rr * st;                         // |x'| component
  const double rho =
      (rho0 == 0.0)
          ? xpar
          : std::sqrt(rho0 * rho0 + xpar * xpar + 2.0 * rho0 * xpar * cos_psi);
  const double y = rr * tau;
  const FieldDerivs d = field.f(rho, y);

  NodeData out;
  out.u = d.u;
  // unit radial direction about the center: x-part (x0 + x')/..., y-part tau
  // grad u = u_r * x/rho (+) u_y e_y
  double xdot;  // (x . x') / (rho * rr)
  if (rho0 == 0.0) {
    xdot = st;
  } else if (rho > 0.0) {
    xdot = (rho0 * cos_psi * st + xpar * st) / rho;
  } else {
    xdot = 0.0;
  }
  out.radial = d.u_r * xdot + d.u_y * tau;
  const double grad_sq = d.u_r * d.u_r + d.u_y * d.u_y;
  out.tangential_sq = grad_sq - out.radial * out.radial;
  // below the cancellation floor of grad_sq - radial^2 the value is
  // numerically zero (radial fields would otherwise leave pure noise)
  if (out.tangential_sq < 1e-13 * grad_sq) out.tangential_sq = 0.0;
  // Delta_b = u_rr + (n-1)/rho u_r + u_yy + (b/y) u_y; on the axis the
  // ratio u_r/rho tends to u_rr (profiles are even in rho).  The switch
  // threshold is relative to the geometry, so it rescales covariantly and
  // the substitution error (~rho^2 u_rrrr) stays below every tolerance.
  const double b = 3.0 - 2.0 * field.s;
  const double axis_term = (rho > 1e-9 * (rho0 + rr))
                               ? (n - 1.0) * d.u_r / rho
                               : (n - 1.0) * d.u_rr;
  const double y_term = (y > 0.0) ? (b / y) * d.u_y : 0.0;
  out.delta_b = d.u_rr + axis_term + d.u_yy + y_term;
  return out;
}

enum class SurfaceKind { U2, Defect, Tangential, BulkDensity };

// int over the half-sphere of radius rr (center offset rho0 on the boundary)
// of y^{3-2s} * quantity; kind selects u^2, the homogeneity defect,
// the tangential gradient square, or |Delta_b u|^2.
inline double surface_integral(const HalfSpaceField& field, int n,
                               double rho0, double rr, SurfaceKind kind,
                               const EnergyQuadConfig& cfg) {
  const double wpow = 3.0 - 2.0 * field.s;
  const double khom = -field.homogeneity_degree();

  auto integrand_at = [&](double cos_psi, double tau, double d0, double d1) {
    const NodeData nd =
        node_data(field, n, rho0, cos_psi, rr, tau, d1, 1.0 + tau);
    double q;
    switch (kind) {
      case SurfaceKind::U2: q = nd.u * nd.u; break;
      case SurfaceKind::Defect: {
        const double def = khom * nd.u / rr + nd.radial;
        const double ref = std::abs(khom * nd.u / rr) + std::abs(nd.radial);
        // same cancellation floor: exactly homogeneous fields give zero
        q = (std::abs(def) < 1e-13 * ref) ? 0.0 : def * def;
        break;
      }
      case SurfaceKind::Tangential: q = nd.tangential_sq; break;
      default: q = nd.delta_b * nd.delta_b; break;
    }
    // zonal weight (1-tau^2)^{(n-2)/2} and the y weight tau^{3-2s}
    // (the rr powers are factored out of the integral)
    return std::pow(d0, wpow) * std::pow(d1 * (1.0 + tau), 0.5 * (n - 2.0)) *
           q;
  };

  QuadOptions opt;
  opt.rel_tol = cfg.rel_tol;
  opt.max_level = cfg.max_level;

  double sphere;
  if (rho0 == 0.0) {
    // axisymmetric about the center: sigma integrates to |S^{n-1}|
    sphere = unit_sphere_area(n) *
             integrate_tanh_sinh(
                 [&](double tau, double d0, double d1) {
                   return integrand_at(1.0, tau, d0, d1);
                 },
                 0.0, 1.0, opt);
  } else {
    require_domain(n <= 2,
                   "energy: off-axis centers need n <= 2");
    auto tau_integral = [&](double cos_psi) {
      return integrate_tanh_sinh(
          [&](double tau, double d0, double d1) {
            return integrand_at(cos_psi, tau, d0, d1);
          },
          0.0, 1.0, opt);
    };
    if (n == 1) {
      sphere = tau_integral(1.0) + tau_integral(-1.0);
    } else {
      double acc = 0.0;
      for (int j = 0; j < cfg.angle_points; ++j) {
        const double psi = 2.0 * pi * j / cfg.angle_points;
        acc += tau_integral(std::cos(psi));
      }
      sphere = acc * 2.0 * pi / cfg.angle_points;
    }
  }
  return sphere * std::pow(rr, n) * std::pow(rr, wpow);
}

inline double boundary_integral(const HalfSpaceField& field, int n,
                                double rho0, double r,
                                const EnergyQuadConfig& cfg) {
  QuadOptions opt;
  opt.rel_tol = cfg.rel_tol;
  opt.max_level = cfg.max_level;
  const double pexp = field.p + 1.0;

  auto upow = [&](double rho) {
    const double u = field.f(rho, 0.0).u;
    return std::pow(std::abs(u), pexp);
  };

  if (rho0 == 0.0) {
    std::vector<double> cuts = {0.0};
    for (double bp : field.radial_breakpoints)
      if (bp > 0.0 && bp < r) cuts.push_back(bp);
    cuts.push_back(r);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const bool from_zero = (cuts[i] == 0.0);
      acc += integrate_tanh_sinh(
          [&](double x, double d0, double d1) {
            const double rho = from_zero ? d0 : x;
            const double v = upow(rho) * std::pow(rho, n - 1.0);
            if (!std::isfinite(v)) {
              // singular powers overflow through the u^{p+1} composite at
              // radii whose weighted contribution is negligible
              if ((from_zero && field.singular_origin && rho <= 1e-40 * r) ||
                  std::min(d0, d1) <= 1e-13 * r)
                return 0.0;
              throw numerical_error(
                  "energy_E: boundary integrand not integrable");
            }
            return v;
          },
          cuts[i], cuts[i + 1], opt);
    }
    return unit_sphere_area(n) * acc;
  }
  require_domain(n <= 2, "energy: off-axis centers need n <= 2");
  if (n == 1) {
    return integrate_tanh_sinh(
        [&](double x, double, double) { return upow(std::abs(x)); },
        rho0 - r, rho0 + r, opt);
  }
  double acc = 0.0;
  for (int j = 0; j < cfg.angle_points; ++j) {
    const double cp = std::cos(2.0 * pi * j / cfg.angle_points);
    acc += integrate_tanh_sinh(
        [&](double /*x*/, double d0, double) {
          const double rho = std::sqrt(rho0 * rho0 + d0 * d0 +
                                       2.0 * rho0 * d0 * cp);
          return upow(rho) * d0;
        },
        0.0, r, opt);
  }
  return acc * 2.0 * pi / cfg.angle_points;
}

// five-point first derivative with relative step cfg.hr
inline double ddr(const std::function<double(double)>& g, double r,
                  double hr) {
  const double h = hr * r;
  return (8.0 * (g(r + h) - g(r - h)) - (g(r + 2.0 * h) - g(r - 2.0 * h))) /
         (12.0 * h);
}

}  // namespace detail

inline double homogeneity_defect(const HalfSpaceField& field, double r,
                                 int n = 2, const std::vector<double>& center =
                                                {},
                                 const EnergyQuadConfig& cfg = {}) {
  require_domain(r > 0.0, "homogeneity_defect: radius must be positive");
  double rho0 = 0.0;
  for (double c : center) rho0 += c * c;
  rho0 = std::sqrt(rho0);
  return detail::surface_integral(field, n, rho0, r,
                                  detail::SurfaceKind::Defect, cfg);
}

inline EnergyBreakdown energy_E(const HalfSpaceField& field,
                                const std::vector<double>& center, double r,
                                int n = 2, const EnergyQuadConfig& cfg = {}) {
  require_domain(r > 0.0, "energy_E: radius must be positive");
  require_domain(field.p > 1.0 && field.s > 1.0 && field.s < 2.0,
                 "energy_E: requires p > 1 and s in (1,2)");
  double rho0 = 0.0;
  for (double c : center) rho0 += c * c;
  rho0 = std::sqrt(rho0);

  const double s = field.s, p = field.p;
  const double b = 3.0 - 2.0 * s;
  const double k = 2.0 * s / (p - 1.0);
  const double gam = s * (p + 1.0) * 2.0 / (p - 1.0) - n;
  const double cfac = (s / (p - 1.0)) * ((p + 2.0 * s - 1.0) / (p - 1.0) - n);

  auto ju2 = [&](double rr) {
    return detail::surface_integral(field, n, rho0, rr,
                                    detail::SurfaceKind::U2, cfg);
  };
  auto jdef = [&](double rr) {
    return detail::surface_integral(field, n, rho0, rr,
                                    detail::SurfaceKind::Defect, cfg);
  };
  auto jtan = [&](double rr) {
    return detail::surface_integral(field, n, rho0, rr,
                                    detail::SurfaceKind::Tangential, cfg);
  };

  // bulk: radial stack of |Delta_b u|^2 half-sphere integrals, split at the
  // field's breakpoints; singular fields overflow at radii so deep under
  // the origin that their weighted contribution is below every tolerance,
  // and those evaluations are dropped
  QuadOptions ropt;
  ropt.rel_tol = cfg.rel_tol;
  ropt.max_level = cfg.max_level;
  std::vector<double> cuts = {0.0};
  for (double bp : field.radial_breakpoints)
    if (bp > 0.0 && bp < r) cuts.push_back(bp);
  cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  double bulk = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const bool from_zero = (cuts[i] == 0.0);
    bulk += integrate_tanh_sinh(
        [&](double x, double d0, double d1) {
          const double rr = from_zero ? d0 : x;  // exact radius near 0
          double v;
          try {
            v = detail::surface_integral(
                field, n, rho0, rr, detail::SurfaceKind::BulkDensity, cfg);
          } catch (const numerical_error&) {
            v = inf;
          }
          if (!finite(v)) {
            // overflow of singular powers deep under the origin, or pure
            // cancellation noise close to a field breakpoint (where the
            // density vanishes but its evaluation is jitter-dominated)
            if ((from_zero && field.singular_origin && rr <= 1e-25 * r) ||
                std::min(d0, d1) <= 1e-5 * r)
              return 0.0;
            char msg[96];
            std::snprintf(msg, sizeof msg,
                          "energy_E: bulk density not integrable at %.17e",
                          rr);
            throw numerical_error(msg);
          }
          return v;
        },
        cuts[i], cuts[i + 1], ropt);
  }
  const double bdry = detail::boundary_integral(field, n, rho0, r, cfg);

  EnergyBreakdown out;
  out.alpha_mono = n + b - 4.0 * s / (p - 1.0);
  out.beta_mono = k * ((p + 2.0 * s - 1.0) / (p - 1.0) - n - b);
  out.mono_coercive = out.alpha_mono - out.beta_mono - 1.0 > 0.0;

  out.t1 = std::pow(r, gam) *
           (0.5 * bulk - cfg.boundary_constant / (p + 1.0) * bdry);
  out.t2 = -cfac * std::pow(r, 2.0 * s + 2.0 * k - 3.0 - n) * ju2(r);
  out.t3 = -cfac * detail::ddr(
                       [&](double rr) {
                         return std::pow(rr, 2.0 * k + 2.0 * s - 2.0 - n) *
                                ju2(rr);
                       },
                       r, cfg.hr);
  out.t4 = 0.5 * r * r * r *
           detail::ddr(
               [&](double rr) {
                 return std::pow(rr, 2.0 * k + 2.0 * s - 3.0 - n) * jdef(rr);
               },
               r, cfg.hr);
  out.t5 = 0.5 * detail::ddr(
                     [&](double rr) { return std::pow(rr, gam) * jtan(rr); },
                     r, cfg.hr);
  out.t6 = 0.5 * std::pow(r, gam - 1.0) * jtan(r);
  out.total = out.t1 + out.t2 + out.t3 + out.t4 + out.t5 + out.t6;
  return out;
}

inline double scale_invariance_residual(const HalfSpaceField& field,
                                        double lam, double r, int n = 2,
                                        const EnergyQuadConfig& cfg = {}) {
  const double e_big = energy_E(field, {}, lam * r, n, cfg).total;
  const double e_scaled =
      energy_E(rescale_field(field, lam), {}, r, n, cfg).total;
  return std::abs(e_big - e_scaled) / (1.0 + std::abs(e_big));
}

}  // namespace fle
