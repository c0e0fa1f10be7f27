// Batch front door for the fractional Lane-Emden stability toolkit:
// classification verdicts, critical-exponent tables, region maps and the
// verification reports, emitted as deterministic CSV/JSON.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fle/energy.hpp"
#include "fle/exponents.hpp"
#include "fle/extension.hpp"
#include "fle/radial_power.hpp"
#include "fle/sphere_kernels.hpp"

namespace {

// fixed 15-significant-digit scientific format, diff-stable across runs
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return buf;
}

std::string fmt_opt(const std::optional<double>& x) {
  return x ? fmt(*x) : "null";
}

// minimal ordered JSON writer; values arrive pre-rendered
class JsonObject {
 public:
  void add_raw(const std::string& key, const std::string& raw) {
    items_.emplace_back(key, raw);
  }
  void add(const std::string& key, double v) { add_raw(key, quote(fmt(v))); }
  void add(const std::string& key, const std::optional<double>& v) {
    add_raw(key, v ? quote(fmt(*v)) : "null");
  }
  void add(const std::string& key, int v) { add_raw(key, std::to_string(v)); }
  void add(const std::string& key, bool v) {
    add_raw(key, v ? "true" : "false");
  }
  void add(const std::string& key, const std::string& s) {
    add_raw(key, quote(s));
  }
  static std::string quote(const std::string& s) { return "\"" + s + "\""; }
  std::string str(int indent = 0) const {
    const std::string pad(indent + 2, ' ');
    std::string out = "{\n";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      out += pad + quote(items_[i].first) + ": " + items_[i].second;
      out += (i + 1 < items_.size()) ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "}";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

std::string json_array(const std::vector<std::string>& elems) {
  std::string out = "[";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    out += elems[i];
    if (i + 1 < elems.size()) out += ", ";
  }
  return out + "]";
}

std::string json_num_array(const std::vector<double>& v) {
  std::vector<std::string> e;
  for (double x : v) e.push_back(JsonObject::quote(fmt(x)));
  return json_array(e);
}

void write_output(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out.good())
    throw std::domain_error("output path not writable: " + path);
  out << text;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::domain_error("empty list argument");
  return out;
}

// ordered parallel map over [0, count)
template <typename F>
void parallel_for(int count, int threads, F&& work) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) work(i);
    });
  for (auto& th : pool) th.join();
}

// ----------------------------------------------------------- subcommands

struct CommonOpts {
  std::string out = "-";
  int threads = 1;
};

int cmd_classify(int n, double s, double p, const CommonOpts& common) {
  const fle::StabilityReport rep = fle::classify(n, s, p);
  JsonObject j;
  j.add("n", n);
  j.add("s", s);
  j.add("p", p);
  j.add("p_sobolev", rep.p_sobolev);
  j.add("hardy_constant", rep.hardy_lambda);
  j.add("amplitude", rep.amplitude_a);
  j.add("phi", rep.discriminant);
  j.add("verdict", std::string(fle::to_string(rep.verdict)));
  write_output(j.str() + "\n", common.out);
  return 0;
}

int cmd_pc(double s, int n_from, int n_to, const CommonOpts& common) {
  fle::require_domain(n_from <= n_to && n_from > 2.0 * s,
                      "pc: need n_from <= n_to within n > 2s");
  const int count = n_to - n_from + 1;
  std::vector<double> ps(count), pcv(count);
  parallel_for(count, common.threads, [&](int i) {
    const int n = n_from + i;
    ps[i] = fle::sobolev_exponent(n, s);
    pcv[i] = fle::joseph_lundgren_exponent(n, s);
  });
  std::string csv = "n,s,p_sobolev,p_c\n";
  for (int i = 0; i < count; ++i)
    csv += std::to_string(n_from + i) + "," + fmt(s) + "," + fmt(ps[i]) +
           "," + fmt(pcv[i]) + "\n";
  write_output(csv, common.out);
  return 0;
}

int cmd_region(double s, int n_from, int n_to, double p_from, double p_to,
               int p_steps, const CommonOpts& common) {
  fle::require_domain(n_from <= n_to, "region: need n_from <= n_to");
  fle::require_domain(p_steps >= 1 && p_from > 1.0 && p_to >= p_from,
                      "region: invalid p range");
  const int nn = n_to - n_from + 1;
  const int count = nn * p_steps;
  std::vector<std::string> rows(count);
  parallel_for(count, common.threads, [&](int i) {
    const int n = n_from + i / p_steps;
    const int k = i % p_steps;
    const double p =
        (p_steps == 1)
            ? p_from
            : p_from + (p_to - p_from) * k / (p_steps - 1.0);
    const auto rep = fle::classify(n, s, p);
    const std::string phi =
        rep.discriminant ? fmt(*rep.discriminant) : "nan";
    rows[i] = std::to_string(n) + "," + fmt(s) + "," + fmt(p) + "," + phi +
              "," + fle::to_string(rep.verdict);
  });
  std::string csv = "n,s,p,phi,verdict\n";
  for (const auto& r : rows) csv += r + "\n";
  write_output(csv, common.out);
  return 0;
}

int cmd_verify_singular(int n, double s, double p, double tol,
                        const CommonOpts& common) {
  const auto rep = fle::verify_singular_solution(n, s, p);
  const bool pass =
      rep.exponent_match && rep.beta_in_window && rep.coefficient_residual < tol;
  JsonObject j;
  j.add("n", n);
  j.add("s", s);
  j.add("p", p);
  j.add("amplitude", rep.amplitude);
  j.add("beta", rep.beta);
  j.add("beta_in_window", rep.beta_in_window);
  j.add("exponent", rep.exponent);
  j.add("expected_exponent", rep.expected_exponent);
  j.add("exponent_match", rep.exponent_match);
  j.add("coefficient_residual", rep.coefficient_residual);
  j.add("tolerance", tol);
  j.add("pass", pass);
  write_output(j.str() + "\n", common.out);
  return pass ? 0 : 3;
}

int cmd_kernel(int n, double s, double p, const std::string& mu_list,
               const CommonOpts& common) {
  const auto mu = parse_list(mu_list);
  const auto rep = fle::kernel_comparison(n, s, p, mu);

  // alpha-derivative negativity below the stability exponent
  bool deriv_negative = true;
  for (int i = 1; i <= 4; ++i) {
    const double alpha = rep.alpha_stability * i / 5.0;
    for (double m : mu)
      if (fle::kernel_alpha_derivative({n, s, alpha, m}) >= 0.0)
        deriv_negative = false;
  }
  const bool pass = rep.all_strict && deriv_negative;

  JsonObject j;
  j.add("n", n);
  j.add("s", s);
  j.add("p", p);
  j.add("alpha_stability", rep.alpha_stability);
  j.add("alpha_solution", rep.alpha_solution);
  j.add_raw("mu", json_num_array(rep.mu));
  j.add_raw("kernel_stability", json_num_array(rep.k_stability));
  j.add_raw("kernel_solution", json_num_array(rep.k_solution));
  j.add("min_margin", rep.min_margin);
  j.add("max_margin", rep.max_margin);
  j.add("comparison_strict", rep.all_strict);
  j.add("derivative_negative", deriv_negative);
  j.add("pass", pass);
  write_output(j.str() + "\n", common.out);
  return pass ? 0 : 3;
}

int cmd_dtn(double s, const std::string& xi_list, double tol,
            const CommonOpts& common) {
  const auto xi = parse_list(xi_list);
  std::vector<double> mult(xi.size());
  parallel_for(static_cast<int>(xi.size()), common.threads, [&](int i) {
    mult[i] = fle::solve_extension_profile(xi[i], s).multiplier;
  });
  std::vector<std::pair<double, double>> pts;
  std::vector<std::string> point_objs;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    pts.emplace_back(xi[i], mult[i]);
    JsonObject pj;
    pj.add("xi", xi[i]);
    pj.add("multiplier", mult[i]);
    point_objs.push_back(pj.str(2));
  }
  const auto fit = fle::fit_symbol_exponent(pts);
  const bool pass = std::abs(fit.exponent - 2.0 * s) <= tol;

  JsonObject j;
  j.add("s", s);
  j.add_raw("points", json_array(point_objs));
  j.add("exponent", fit.exponent);
  j.add("expected_exponent", 2.0 * s);
  j.add("constant", fit.constant);
  j.add("tolerance", tol);
  j.add("pass", pass);
  write_output(j.str() + "\n", common.out);
  return pass ? 0 : 3;
}

int cmd_energy(const std::string& field_name, int n, double s, double p,
               double lambda, double r, double q, double tol,
               const CommonOpts& common) {
  fle::HalfSpaceField field;
  if (field_name == "zero")
    field = fle::field_zero(p, s);
  else if (field_name == "gaussian")
    field = fle::field_gaussian(p, s);
  else if (field_name == "homogeneous")
    field = fle::field_homogeneous(p, s, q);
  else if (field_name == "bump")
    field = fle::field_bump(p, s);
  else
    throw std::domain_error(
        "energy: field must be zero|gaussian|homogeneous|bump");

  const auto e = fle::energy_E(field, {}, r, n);
  const double defect = fle::homogeneity_defect(field, r, n);
  double residual = 0.0;
  if (field_name != "zero")
    residual = fle::scale_invariance_residual(field, lambda, r, n);
  const bool pass = residual <= tol;

  JsonObject br;
  br.add("t1", e.t1);
  br.add("t2", e.t2);
  br.add("t3", e.t3);
  br.add("t4", e.t4);
  br.add("t5", e.t5);
  br.add("t6", e.t6);
  br.add("total", e.total);
  br.add("alpha_mono", e.alpha_mono);
  br.add("beta_mono", e.beta_mono);
  br.add("mono_coercive", e.mono_coercive);

  JsonObject j;
  j.add("field", field_name);
  j.add("n", n);
  j.add("s", s);
  j.add("p", p);
  j.add("r", r);
  j.add("lambda", lambda);
  j.add_raw("breakdown", br.str(2));
  j.add("homogeneity_defect", defect);
  j.add("scale_invariance_residual", residual);
  j.add("tolerance", tol);
  j.add("pass", pass);
  write_output(j.str() + "\n", common.out);
  return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Lane-Emden stability toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  const char* env_threads = std::getenv("FLE_THREADS");
  if (env_threads) common.threads = std::max(1, std::atoi(env_threads));

  int n = 5;
  double s = 1.5, p = 5.0;
  int n_from = 5, n_to = 10, p_steps = 10;
  double p_from = 1.5, p_to = 10.0;
  double lambda = 2.0, radius = 1.0, q = -0.75;
  double tol_singular = 1e-10, tol_dtn = 1e-3, tol_energy = 1e-6;
  std::string mu_list = "-1,-0.5,0,0.5,0.9";
  std::string xi_list = "0.25,0.5,1,2,4";
  std::string field_name = "gaussian";

  std::string config_path;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", common.out, "output path ('-' for stdout)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--threads", common.threads,
                    "worker threads for grid sweeps")
        ->envname("FLE_THREADS")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--config", config_path,
                    "key=value config file ('#' comments); explicit flags "
                    "take precedence");
  };
  // every value option takes the last occurrence, so flags injected from a
  // config file are overridden by anything given on the command line
  auto opt = [&](CLI::App* cmd, const std::string& name, auto& var,
                 const std::string& desc = "") {
    return cmd->add_option(name, var, desc)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };

  auto* c_classify = app.add_subcommand(
      "classify", "stability verdict for one parameter triple");
  opt(c_classify, "--n", n, "spatial dimension")->required();
  opt(c_classify, "--s", s, "fractional order in (0,2]")->required();
  opt(c_classify, "--p", p, "nonlinearity exponent")->required();
  add_common(c_classify);

  auto* c_pc = app.add_subcommand(
      "pc", "Joseph-Lundgren exponent table over a dimension range");
  opt(c_pc, "--s", s)->required();
  opt(c_pc, "--n-from", n_from)->required();
  opt(c_pc, "--n-to", n_to)->required();
  add_common(c_pc);

  auto* c_region = app.add_subcommand(
      "region", "verdict map over an (n, p) grid");
  opt(c_region, "--s", s)->required();
  opt(c_region, "--n-from", n_from)->required();
  opt(c_region, "--n-to", n_to)->required();
  opt(c_region, "--p-from", p_from)->required();
  opt(c_region, "--p-to", p_to)->required();
  opt(c_region, "--p-steps", p_steps)->required();
  add_common(c_region);

  auto* c_verify = app.add_subcommand(
      "verify-singular", "check the explicit singular solution");
  opt(c_verify, "--n", n)->required();
  opt(c_verify, "--s", s)->required();
  opt(c_verify, "--p", p)->required();
  opt(c_verify, "--tol", tol_singular, "coefficient residual bound");
  add_common(c_verify);

  auto* c_kernel = app.add_subcommand(
      "kernel", "pointwise zonal kernel comparison");
  opt(c_kernel, "--n", n)->required();
  opt(c_kernel, "--s", s)->required();
  opt(c_kernel, "--p", p)->required();
  opt(c_kernel, "--mu", mu_list, "comma-separated cosine grid");
  add_common(c_kernel);

  auto* c_dtn = app.add_subcommand(
      "dtn", "Dirichlet-to-Neumann symbol exponent fit");
  opt(c_dtn, "--s", s)->required();
  opt(c_dtn, "--xi", xi_list, "comma-separated frequencies");
  opt(c_dtn, "--tol", tol_dtn, "exponent tolerance");
  add_common(c_dtn);

  auto* c_energy = app.add_subcommand(
      "energy", "monotonicity functional on a built-in field");
  opt(c_energy, "--field", field_name, "zero|gaussian|homogeneous|bump");
  int n_energy = 2;
  opt(c_energy, "--n", n_energy, "spatial dimension (default 2)");
  opt(c_energy, "--s", s)->required();
  opt(c_energy, "--p", p)->required();
  opt(c_energy, "--lambda", lambda, "rescaling factor");
  opt(c_energy, "--r", radius, "half-ball radius");
  opt(c_energy, "--q", q, "homogeneous field degree");
  opt(c_energy, "--tol", tol_energy, "scale-invariance bound");
  add_common(c_energy);

  // expand "--config FILE" into injected flags placed right after the
  // subcommand name; explicit command-line flags come later and win
  std::vector<std::string> args;
  std::string cfg_file;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      cfg_file = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      cfg_file = a.substr(9);
    } else {
      args.push_back(a);
    }
  }
  if (!cfg_file.empty()) {
    std::ifstream in(cfg_file);
    if (!in.good()) {
      std::fprintf(stderr, "invalid parameters: config file not readable: %s\n",
                   cfg_file.c_str());
      return 2;
    }
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto a = line.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      const auto b = line.find_last_not_of(" \t\r");
      line = line.substr(a, b - a + 1);
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "invalid parameters: bad config line: %s\n",
                     line.c_str());
        return 2;
      }
      injected.push_back("--" + line.substr(0, eq));
      injected.push_back(line.substr(eq + 1));
    }
    if (!args.empty())
      args.insert(args.begin() + 1, injected.begin(), injected.end());
  }
  std::vector<const char*> cargs = {argv[0]};
  for (const auto& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_classify->parsed()) return cmd_classify(n, s, p, common);
    if (c_pc->parsed()) return cmd_pc(s, n_from, n_to, common);
    if (c_region->parsed())
      return cmd_region(s, n_from, n_to, p_from, p_to, p_steps, common);
    if (c_verify->parsed())
      return cmd_verify_singular(n, s, p, tol_singular, common);
    if (c_kernel->parsed()) return cmd_kernel(n, s, p, mu_list, common);
    if (c_dtn->parsed()) return cmd_dtn(s, xi_list, tol_dtn, common);
    if (c_energy->parsed())
      return cmd_energy(field_name, n_energy, s, p, lambda, radius, q,
                        tol_energy, common);
  } catch (const fle::numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return 2;
  }
  return 2;
}
