#pragma once

// Adaptive Dormand-Prince 5(4) integrator with stored steps and quintic
// Hermite dense evaluation (value, first and second derivative at the
// stored nodes; the second derivative comes from the right-hand side).

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "fle/common.hpp"

namespace fle {

template <std::size_t N>
using OdeState = std::array<double, N>;

template <std::size_t N>
using OdeRhs = std::function<OdeState<N>(double, const OdeState<N>&)>;

struct OdeOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-280;
  double max_step = inf;
  std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
struct OdeTrajectory {
  struct Node {
    double t;
    OdeState<N> y;
    OdeState<N> dy;
  };
  std::vector<Node> nodes;  // ordered along the integration direction

  // Quintic Hermite interpolation of component `comp`; `deriv` selects the
  // value (0), first (1) or second (2) derivative.  d2 data at the nodes is
  // supplied by the caller-provided table (one entry per node).
  double eval(double t, std::size_t comp, const std::vector<double>& d2,
              int deriv = 0) const {
    const bool fwd = nodes.back().t >= nodes.front().t;
    const double t_lo = fwd ? nodes.front().t : nodes.back().t;
    const double t_hi = fwd ? nodes.back().t : nodes.front().t;
    // the final step can land an ulp short of the requested endpoint
    const double slack = 1e-9 * (t_hi - t_lo);
    require_domain(t >= t_lo - slack && t <= t_hi + slack,
                   "OdeTrajectory::eval: t outside the stored range");
    t = std::clamp(t, t_lo, t_hi);
    std::size_t lo = 0, hi = nodes.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (fwd ? (nodes[mid].t <= t) : (nodes[mid].t >= t))
        lo = mid;
      else
        hi = mid;
    }
    const auto& a = nodes[lo];
    const auto& b = nodes[hi];
    const double h = b.t - a.t;
    const double u = (t - a.t) / h;

    const double f0 = a.y[comp], d0 = a.dy[comp] * h, s0 = d2[lo] * h * h;
    const double f1 = b.y[comp], d1 = b.dy[comp] * h, s1 = d2[hi] * h * h;

    // two-point quintic Hermite basis
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double h00 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    const double h10 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    const double h20 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
    const double h01 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    const double h11 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    const double h21 = 0.5 * (u3 - 2.0 * u4 + u5);

    if (deriv == 0)
      return h00 * f0 + h10 * d0 + h20 * s0 + h01 * f1 + h11 * d1 + h21 * s1;

    const double g00 = -30.0 * u2 + 60.0 * u3 - 30.0 * u4;
    const double g10 = 1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4;
    const double g20 = 0.5 * (2.0 * u - 9.0 * u2 + 12.0 * u3 - 5.0 * u4);
    const double g01 = 30.0 * u2 - 60.0 * u3 + 30.0 * u4;
    const double g11 = -12.0 * u2 + 28.0 * u3 - 15.0 * u4;
    const double g21 = 0.5 * (3.0 * u2 - 8.0 * u3 + 5.0 * u4);
    if (deriv == 1)
      return (g00 * f0 + g10 * d0 + g20 * s0 + g01 * f1 + g11 * d1 +
              g21 * s1) /
             h;

    const double w00 = -60.0 * u + 180.0 * u2 - 120.0 * u3;
    const double w10 = -36.0 * u + 96.0 * u2 - 60.0 * u3;
    const double w20 = 0.5 * (2.0 - 18.0 * u + 36.0 * u2 - 20.0 * u3);
    const double w01 = 60.0 * u - 180.0 * u2 + 120.0 * u3;
    const double w11 = -24.0 * u + 84.0 * u2 - 60.0 * u3;
    const double w21 = 0.5 * (6.0 * u - 24.0 * u2 + 20.0 * u3);
    return (w00 * f0 + w10 * d0 + w20 * s0 + w01 * f1 + w11 * d1 + w21 * s1) /
           (h * h);
  }
};

// Integrate from t0 to t1 (either direction).  Stores every accepted step.
template <std::size_t N>
OdeTrajectory<N> integrate_dp5(const OdeRhs<N>& rhs, double t0, double t1,
                               const OdeState<N>& y0,
                               const OdeOptions& opt = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                   e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640,
                   e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double h = dir * std::min(opt.max_step, span / 100.0);

  OdeTrajectory<N> traj;
  double t = t0;
  OdeState<N> y = y0;
  OdeState<N> k1 = rhs(t, y);
  traj.nodes.push_back({t, y, k1});

  auto axpy = [](const OdeState<N>& base, double hh,
                 std::initializer_list<std::pair<double, const OdeState<N>*>>
                     terms) {
    OdeState<N> out = base;
    for (auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) out[i] += hh * c * (*k)[i];
    return out;
  };

  std::size_t steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps)
      throw numerical_error("integrate_dp5: step limit exceeded");
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    const OdeState<N> y2 = axpy(y, h, {{a21, &k1}});
    const OdeState<N> k2 = rhs(t + c2 * h, y2);
    const OdeState<N> y3 = axpy(y, h, {{a31, &k1}, {a32, &k2}});
    const OdeState<N> k3 = rhs(t + c3 * h, y3);
    const OdeState<N> y4 = axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const OdeState<N> k4 = rhs(t + c4 * h, y4);
    const OdeState<N> y5 =
        axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const OdeState<N> k5 = rhs(t + c5 * h, y5);
    const OdeState<N> y6 = axpy(
        y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const OdeState<N> k6 = rhs(t + h, y6);
    const OdeState<N> ynew = axpy(
        y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const OdeState<N> k7 = rhs(t + h, ynew);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          opt.abs_tol +
          opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(ei) / sc);
    }

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      traj.nodes.push_back({t, y, k1});
    }
    const double fac =
        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) > opt.max_step) h = dir * opt.max_step;
    if (!(std::abs(h) > 0.0))
      throw numerical_error("integrate_dp5: step size underflow");
  }
  return traj;
}

}  // namespace fle
