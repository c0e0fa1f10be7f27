#pragma once

// Critical exponents and the stability classification for
// (-Delta)^s u = |u|^{p-1} u:
//   p_S      Sobolev exponent (n+2s)/(n-2s),
//   H        Gamma-ratio Hardy quantity, Lambda = 2^{2s} H,
//   R        amplitude ratio of the explicit singular solution,
//   Phi      discriminant p*R - H (Liouville criterion holds iff Phi > 0),
//   p_c      generalized Joseph-Lundgren exponent, the zero of Phi in p,
// with the classical closed forms at s=1 and s=2 as cross-checks.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fle/common.hpp"
#include "fle/gamma.hpp"
#include "fle/roots.hpp"

namespace fle {

struct ProblemParams {
  int n = 1;       // spatial dimension
  double s = 1.5;  // fractional order
  double p = 2.0;  // nonlinearity exponent

  double b() const { return 3.0 - 2.0 * s; }
  double t() const { return s - 1.0; }

  void validate() const {
    require_domain(n >= 1, "params: n must be a positive integer");
    require_domain(s > 0.0 && s <= 2.0, "params: s must lie in (0, 2]");
    require_domain(p > 1.0, "params: p must exceed 1");
  }
};

enum class Verdict {
  SubcriticalLiouville,
  Critical,
  SupercriticalLiouville,
  JLRegime,
};

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::SubcriticalLiouville: return "SubcriticalLiouville";
    case Verdict::Critical: return "Critical";
    case Verdict::SupercriticalLiouville: return "SupercriticalLiouville";
    case Verdict::JLRegime: return "JLRegime";
  }
  return "?";
}

// (n+2s)/(n-2s), +inf for n <= 2s.
inline double sobolev_exponent(int n, double s) {
  require_domain(n >= 1, "sobolev_exponent: n must be >= 1");
  require_domain(s > 0.0 && s <= 2.0, "sobolev_exponent: s must be in (0,2]");
  if (n <= 2.0 * s) return inf;
  return (n + 2.0 * s) / (n - 2.0 * s);
}

// H = Gamma((n+2s)/4)^2 / Gamma((n-2s)/4)^2; needs n > 2s.
inline double hardy_ratio(int n, double s) {
  require_domain(n > 2.0 * s, "hardy_ratio: requires n > 2s");
  const double r = gamma_ratio(0.25 * (n + 2.0 * s), 0.25 * (n - 2.0 * s));
  return r * r;
}

// Optimal Hardy constant Lambda_{n,s} = 2^{2s} H.
inline double hardy_constant(int n, double s) {
  return std::pow(2.0, 2.0 * s) * hardy_ratio(n, s);
}

// R = Gamma(n/2 - q) Gamma(s + q) / [Gamma(q) Gamma((n-2s)/2 - q)],
// q = s/(p-1); defined for p > p_S, where all four arguments are positive.
// At p = p_S, q = (n-2s)/4 and R collapses to the Hardy ratio H.
inline double amplitude_ratio(int n, double s, double p) {
  const double ps = sobolev_exponent(n, s);
  require_domain(p > ps, "amplitude_ratio: requires p > p_S(n,s)");
  const double q = s / (p - 1.0);
  return gamma_ratio(0.5 * n - q, 0.5 * (n - 2.0 * s) - q) *
         gamma_ratio(s + q, q);
}

// A = (2^{2s} R)^{1/(p-1)}: amplitude of the singular solution A|x|^{-2s/(p-1)}
// under the Fourier-normalized operator.
inline double singular_amplitude(int n, double s, double p) {
  const double r = amplitude_ratio(n, s, p);
  return std::pow(std::pow(2.0, 2.0 * s) * r, 1.0 / (p - 1.0));
}

// Phi = p R - H; Phi > 0 is the supercritical Liouville condition.
inline double stability_discriminant(int n, double s, double p) {
  return p * amplitude_ratio(n, s, p) - hardy_ratio(n, s);
}

// Classical closed forms for the Joseph-Lundgren exponent.
inline double pc_closed_form_s1(int n) {
  require_domain(n >= 1, "pc_closed_form_s1: n must be >= 1");
  if (n <= 10) return inf;
  const double nn = n;
  return ((nn - 2.0) * (nn - 2.0) - 4.0 * nn + 8.0 * std::sqrt(nn - 1.0)) /
         ((nn - 2.0) * (nn - 10.0));
}

inline double pc_closed_form_s2(int n) {
  require_domain(n >= 1, "pc_closed_form_s2: n must be >= 1");
  if (n <= 12) return inf;
  const double nn = n;
  const double w =
      std::sqrt(nn * nn + 4.0 - nn * std::sqrt(nn * nn - 8.0 * nn + 32.0));
  return (nn + 2.0 - w) / (nn - 6.0 - w);
}

// Smallest zero of Phi(n,s,.) in (p_S, 1e6], located by a 400-point
// geometric sign scan plus Brent refinement; +inf when Phi stays positive.
// A multi-crossing scan is a structural surprise and fails loudly.
inline double joseph_lundgren_exponent(int n, double s,
                                       double rel_tol = 1e-12) {
  require_domain(n > 2.0 * s, "joseph_lundgren_exponent: requires n > 2s");
  const double ps = sobolev_exponent(n, s);
  const double p_lo = ps * (1.0 + 1e-9);
  const double p_hi = 1e6;
  constexpr int kScan = 400;

  auto phi = [&](double p) { return stability_discriminant(n, s, p); };

  std::vector<std::pair<double, double>> brackets;
  double prev_p = p_lo, prev_phi = phi(p_lo);
  const double ratio = std::pow(p_hi / p_lo, 1.0 / (kScan - 1));
  for (int i = 1; i < kScan; ++i) {
    const double pp = (i == kScan - 1) ? p_hi : p_lo * std::pow(ratio, i);
    const double ph = phi(pp);
    if ((prev_phi < 0.0) != (ph < 0.0)) brackets.emplace_back(prev_p, pp);
    prev_p = pp;
    prev_phi = ph;
  }
  if (brackets.empty()) return inf;
  if (brackets.size() > 1) {
    std::string msg =
        "joseph_lundgren_exponent: multiple sign changes of Phi in p:";
    for (const auto& [a, b] : brackets)
      msg += " [" + std::to_string(a) + ", " + std::to_string(b) + "]";
    throw numerical_error(msg);
  }
  return find_root_brent(phi, brackets[0].first, brackets[0].second, rel_tol);
}

// Dimension condition of the monotonicity theorem:
// n > (p+4s-1)/(p+2s-1) + 2s/(p-1) - b.
inline bool dimension_condition_mono(int n, double s, double p) {
  require_domain(s > 1.0 && s < 2.0, "dimension_condition_mono: s in (1,2)");
  require_domain(p > 1.0, "dimension_condition_mono: p > 1");
  const double b = 3.0 - 2.0 * s;
  const double threshold =
      (p + 4.0 * s - 1.0) / (p + 2.0 * s - 1.0) + 2.0 * s / (p - 1.0) - b;
  return n > threshold;
}

struct StabilityReport {
  ProblemParams params;
  double p_sobolev = inf;
  std::optional<double> hardy_ratio_h;   // H, absent when n <= 2s
  std::optional<double> hardy_lambda;    // 2^{2s} H
  std::optional<double> amplitude_r;     // R, only for p > p_S
  std::optional<double> amplitude_a;     // A, only for p > p_S
  std::optional<double> discriminant;    // Phi, only for p > p_S
  Verdict verdict = Verdict::SubcriticalLiouville;
};

// Verdict partition in p at fixed (n,s); p = p_S detected at relative 1e-12.
inline StabilityReport classify(int n, double s, double p) {
  ProblemParams params{n, s, p};
  params.validate();

  StabilityReport rep;
  rep.params = params;
  rep.p_sobolev = sobolev_exponent(n, s);
  if (n > 2.0 * s) {
    rep.hardy_ratio_h = hardy_ratio(n, s);
    rep.hardy_lambda = hardy_constant(n, s);
  }

  if (std::isfinite(rep.p_sobolev) &&
      std::abs(p - rep.p_sobolev) <= 1e-12 * rep.p_sobolev) {
    rep.verdict = Verdict::Critical;
    return rep;
  }
  if (p < rep.p_sobolev) {
    rep.verdict = Verdict::SubcriticalLiouville;
    return rep;
  }
  rep.amplitude_r = amplitude_ratio(n, s, p);
  rep.amplitude_a = singular_amplitude(n, s, p);
  rep.discriminant = p * *rep.amplitude_r - *rep.hardy_ratio_h;
  rep.verdict = (*rep.discriminant > 0.0) ? Verdict::SupercriticalLiouville
                                          : Verdict::JLRegime;
  return rep;
}

}  // namespace fle
