// Acceptance suite: one check per release criterion, each printed as a
// single PASS/FAIL line.  Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fle/energy.hpp"
#include "fle/exponents.hpp"
#include "fle/extension.hpp"
#include "fle/fit.hpp"
#include "fle/radial_power.hpp"
#include "fle/sphere_kernels.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(FLE_CLI_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  return out;
}

// ---------------------------------------------------------------- criteria

bool criterion_jl_s1(std::string& note) {
  const auto t0 = Clock::now();
  for (int n = 3; n <= 10; ++n) {
    if (!std::isinf(fle::joseph_lundgren_exponent(n, 1.0)) ||
        !std::isinf(fle::pc_closed_form_s1(n))) {
      note = "expected infinite branch at n=" + std::to_string(n);
      return false;
    }
  }
  double worst = 0.0;
  for (int n = 11; n <= 30; ++n) {
    const double root = fle::joseph_lundgren_exponent(n, 1.0);
    const double exact = fle::pc_closed_form_s1(n);
    worst = std::max(worst, std::abs(root - exact) / exact);
  }
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << "n=3..30, worst rel err " << worst << ", " << dt << " s";
  note = os.str();
  return worst <= 1e-8 && dt < 5.0;
}

bool criterion_jl_s2(std::string& note) {
  const auto t0 = Clock::now();
  for (int n = 5; n <= 12; ++n) {
    if (!std::isinf(fle::joseph_lundgren_exponent(n, 2.0))) {
      note = "expected infinite branch at n=" + std::to_string(n);
      return false;
    }
  }
  double worst = 0.0;
  for (int n = 13; n <= 30; ++n) {
    const double root = fle::joseph_lundgren_exponent(n, 2.0);
    const double exact = fle::pc_closed_form_s2(n);
    worst = std::max(worst, std::abs(root - exact) / exact);
  }
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << "n=5..30, worst rel err " << worst << ", " << dt << " s";
  note = os.str();
  return worst <= 1e-8 && dt < 5.0;
}

bool criterion_s1_reduction(std::string& note) {
  double worst = 0.0;
  int disagreements = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 3 + i;
    const double ps = fle::sobolev_exponent(n, 1.0);
    for (int j = 1; j <= 20; ++j) {
      const double p = ps * (1.0 + 0.2 * j);
      const double phi = fle::stability_discriminant(n, 1.0, p);
      const double q = 1.0 / (p - 1.0);
      const double reduced =
          p * q * (0.5 * n - 1.0 - q) - std::pow(0.25 * (n - 2.0), 2);
      worst = std::max(worst, std::abs(phi - reduced));
      if ((phi > 0.0) != (reduced > 0.0)) ++disagreements;
    }
  }
  std::ostringstream os;
  os << "20x20 grid, worst |Phi - reduced| = " << worst << ", "
     << disagreements << " sign disagreements";
  note = os.str();
  return worst <= 1e-10 && disagreements == 0;
}

bool criterion_boundary_identity(std::string& note) {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> us(0.3, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const double s = us(rng);
    const int n_min = static_cast<int>(std::floor(2.0 * s)) + 1;
    const int n = n_min + static_cast<int>(rng() % 20);
    const double ps = fle::sobolev_exponent(n, s);
    const double h = fle::hardy_ratio(n, s);
    const double r = fle::amplitude_ratio(n, s, ps + 1e-8);
    worst = std::max(worst, std::abs(r - h) / h);
  }
  std::ostringstream os;
  os << "30 random (n,s), worst rel deviation " << worst;
  note = os.str();
  return worst <= 1e-5;
}

bool criterion_oracle_agreement(std::string& note) {
  const double anchor = fle::quadrature_fraclap_oracle(5, 0.5, -2.0, 1e-7);
  if (std::abs(anchor - 0.5 * fle::pi) > 1e-6 * 0.5 * fle::pi) {
    note = "pi/2 anchor missed";
    return false;
  }
  double worst = 0.0;
  int cases = 1;
  for (int n : {3, 4, 5, 8}) {
    for (double t : {0.25, 0.5, 0.75}) {
      const double half = 0.5 * (n - 2.0 * t);
      for (double frac : {-0.8, 0.0, 0.8}) {
        const double beta = frac * half;
        const double g = fle::gamma_t_beta(n, t, beta);
        const double o =
            fle::quadrature_fraclap_oracle(n, t, beta - half, 1e-7);
        worst = std::max(worst, std::abs(o - g) / std::abs(g));
        ++cases;
      }
    }
  }
  std::ostringstream os;
  os << cases << " cases, worst rel deviation " << worst;
  note = os.str();
  return cases >= 30 && worst <= 1e-6;
}

bool criterion_singular_solution(std::string& note) {
  double worst = 0.0;
  int cases = 0;
  for (int n = 3; n <= 10; ++n) {
    for (double s : {1.1, 1.5, 1.9}) {
      if (n <= 2.0 * s) continue;  // Sobolev exponent infinite, empty range
      const double ps = fle::sobolev_exponent(n, s);
      for (double f : {1.05, 1.5, 2.0, 3.0, 4.0}) {
        const auto rep = fle::verify_singular_solution(n, s, f * ps);
        if (!rep.exponent_match || !rep.beta_in_window) {
          note = "exponent/window failure at n=" + std::to_string(n);
          return false;
        }
        worst = std::max(worst, rep.coefficient_residual);
        ++cases;
      }
    }
  }
  std::ostringstream os;
  os << cases << " cases, worst coefficient residual " << worst;
  note = os.str();
  return worst < 1e-10;
}

bool criterion_kernel_lemma(std::string& note) {
  // anchor
  const double k0 = fle::kernel_K({5, 1.5, 0.0, 0.0});
  if (std::abs(k0 - fle::pi / 32.0) > 1e-9) {
    note = "pi/32 anchor missed";
    return false;
  }
  const std::vector<double> mu_grid = {-1.0, -0.7, -0.4, -0.1, 0.2,
                                       0.5,  0.7,  0.9};
  for (auto [n, s, p] : {std::tuple<int, double, double>{5, 1.5, 5.0},
                         {6, 1.2, 4.0},
                         {4, 0.8, 6.0}}) {
    const double a_max = 0.5 * (n - 2.0 * s);
    for (int i = 1; i <= 6; ++i) {
      const double alpha = a_max * i / 7.0;
      for (double mu : mu_grid)
        if (fle::kernel_alpha_derivative({n, s, alpha, mu}) >= 0.0) {
          note = "derivative not negative";
          return false;
        }
    }
    const auto cmp = fle::kernel_comparison(n, s, p, mu_grid);
    if (!cmp.all_strict) {
      note = "comparison not strict";
      return false;
    }
  }
  note = "anchor + 3 parameter sets on mu in [-1, 0.9]";
  return true;
}

bool criterion_regularized_divergence(std::string& note) {
  const int n = 5;
  const double s = 1.5;
  const auto ra = fle::regularized_constant(n, s, 1.0, 1e-3);
  const auto rb = fle::regularized_constant(n, s, 0.5, 1e-3);
  const double q = ra.divergence_fit.exponent;
  const double ratio =
      ra.divergence_fit.coefficient / rb.divergence_fit.coefficient;
  const double predicted = (1.0 * (2.0 - 1.0)) / (0.5 * (2.0 - 0.5));
  std::ostringstream os;
  os << "fitted exponent " << q << ", c1 ratio " << ratio << " vs "
     << predicted;
  note = os.str();
  return std::abs(q - (-0.5)) <= 0.02 &&
         std::abs(ratio - predicted) <= 0.05 * predicted;
}

bool criterion_dtn_symbol(std::string& note) {
  const double m1 = fle::solve_extension_profile(1.0, 1.5).multiplier;
  const double m2 = fle::solve_extension_profile(2.0, 1.5).multiplier;
  if (std::abs(m1 - 2.0) > 1e-6 * 2.0 || std::abs(m2 - 16.0) > 1e-6 * 16.0) {
    note = "2 xi^3 anchor missed";
    return false;
  }
  double worst = 0.0;
  for (double s : {1.2, 1.5, 1.8}) {
    std::vector<std::pair<double, double>> pts;
    for (double xi : {0.25, 0.5, 1.0, 2.0, 4.0})
      pts.emplace_back(xi, fle::solve_extension_profile(xi, s).multiplier);
    const auto fit = fle::fit_symbol_exponent(pts);
    worst = std::max(worst, std::abs(fit.exponent - 2.0 * s));
  }
  std::ostringstream os;
  os << "worst |exponent - 2s| = " << worst << ", anchors exact";
  note = os.str();
  return worst <= 1e-3;
}

bool criterion_product_identities(std::string& note) {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<double> hs = {1e-2, 5e-3, 2.5e-3};
  double worst_dev = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const double a1 = 0.5 + 0.5 * (u(rng) + 1.0), a2 = 0.5 + 0.5 * (u(rng) + 1.0);
    const double c0 = u(rng), c1 = u(rng), c2 = u(rng), c3 = u(rng);
    const fle::HalfSpaceSampler zeta =
        [a1, a2](const std::vector<double>& x, double y) {
          return std::exp(-(a1 * x[0] * x[0] + a2 * x[1] * x[1] + y * y));
        };
    const fle::HalfSpaceSampler eta =
        [c0, c1, c2, c3](const std::vector<double>& x, double y) {
          return 1.5 + c0 * x[0] + c1 * x[1] + c2 * y + c3 * x[0] * y;
        };
    std::vector<fle::HalfSpacePoint> pts;
    for (int i = 0; i < 20; ++i)
      pts.push_back({{u(rng), u(rng)}, 0.6 + 0.4 * (u(rng) + 1.0)});

    std::vector<double> lh, l1, l2;
    const double b = -0.2 + 0.8 * (u(rng) + 1.0) * 0.5;
    for (double h : hs) {
      const auto r = fle::check_product_identities(zeta, eta, b, pts, h);
      lh.push_back(std::log(h));
      l1.push_back(std::log(r.product_rule));
      l2.push_back(std::log(r.second_identity));
    }
    worst_dev = std::max(worst_dev,
                         std::abs(fle::fit_line(lh, l1).slope - 2.0));
    worst_dev = std::max(worst_dev,
                         std::abs(fle::fit_line(lh, l2).slope - 2.0));
  }
  std::ostringstream os;
  os << "20 field pairs, worst |order - 2| = " << worst_dev;
  note = os.str();
  return worst_dev <= 0.2;
}

bool criterion_energy_structure(std::string& note) {
  // zero field vanishes identically
  if (fle::energy_E(fle::field_zero(5.0, 1.5), {}, 1.0, 2).total != 0.0) {
    note = "zero field has nonzero energy";
    return false;
  }
  // homogeneity defect vanishes on the critical homogeneous field
  const auto h = fle::field_homogeneous(9.0, 1.5, -0.375);
  const double defect = fle::homogeneity_defect(h, 1.0, 4);
  if (defect != 0.0) {
    note = "homogeneous defect nonzero: " + std::to_string(defect);
    return false;
  }
  double worst = 0.0;
  const std::vector<fle::HalfSpaceField> battery = {
      fle::field_gaussian(5.0, 1.5), fle::field_gaussian(4.0, 1.3, 1.0, 2.0),
      fle::field_bump(5.0, 1.7, 2.5)};
  for (const auto& f : battery)
    for (double lam : {0.5, 2.0, 3.0})
      for (double r : {0.5, 1.0, 2.0})
        worst = std::max(worst,
                         fle::scale_invariance_residual(f, lam, r, 2));
  std::ostringstream os;
  os << "battery of 3 fields x 9 (lambda, r), worst residual " << worst;
  note = os.str();
  return worst <= 1e-6;
}

bool criterion_cli_determinism(std::string& note) {
  const std::vector<std::string> cmds = {
      "region --s 1.5 --n-from 5 --n-to 8 --p-from 2 --p-to 9 --p-steps 5",
      "pc --s 1 --n-from 9 --n-to 13",
      "classify --n 11 --s 1 --p 7",
      "dtn --s 1.5 --xi 0.5,1,2,4"};
  for (const auto& c : cmds) {
    const std::string a = run_cli(c);
    const std::string b = run_cli(c);
    const std::string par = run_cli(c + " --threads 4");
    if (a.empty() || a != b || a != par) {
      note = "outputs differ for: " + c;
      return false;
    }
  }
  note = std::to_string(cmds.size()) + " commands, repeated and threaded";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> check;
  };
  const std::vector<Criterion> criteria = {
      {"Joseph-Lundgren cross-check, s=1", criterion_jl_s1},
      {"Joseph-Lundgren cross-check, s=2", criterion_jl_s2},
      {"s=1 criterion reduction", criterion_s1_reduction},
      {"boundary identity R(p_S) = H", criterion_boundary_identity},
      {"quadrature oracle agreement", criterion_oracle_agreement},
      {"singular-solution verification", criterion_singular_solution},
      {"kernel monotonicity and comparison", criterion_kernel_lemma},
      {"regularized-constant divergence law", criterion_regularized_divergence},
      {"Dirichlet-to-Neumann symbol", criterion_dtn_symbol},
      {"product-identity residual decay", criterion_product_identities},
      {"monotonicity-functional structure", criterion_energy_structure},
      {"CLI determinism", criterion_cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string note;
    bool ok = false;
    try {
      ok = criteria[i].check(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %zu: %s (%s)\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
