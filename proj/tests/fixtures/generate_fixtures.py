#!/usr/bin/env python3
"""Regenerate the oracle fixture files (*.fix) in this directory.

Every expected value is computed here with mpmath at 40 significant digits,
independently of the C++ implementation: closed forms straight from the
Gamma function, high-precision 1-D quadrature for the kernel anchors, and
the analytic b=0 extension solution for the Dirichlet-to-Neumann anchors.

Record format (one per line):  id | key=value,... | expected | tol
Lines starting with '#' are comments.  Values carry 17 significant digits.
"""

import mpmath as mp

mp.mp.dps = 40


def fmt(x):
    if x == mp.inf:
        return "inf"
    return mp.nstr(mp.mpf(x), 17, strip_zeros=False)


class FixFile:
    def __init__(self, name):
        self.name = name
        self.lines = [
            "# generated by generate_fixtures.py -- do not edit by hand",
            "# id | key=value,... | expected | tol",
        ]

    def add(self, fid, params, expected, tol, comment=None):
        if comment:
            self.lines.append("# " + comment)
        kv = ",".join(f"{k}={v}" for k, v in params.items())
        self.lines.append(f"{fid} | {kv} | {fmt(expected)} | {tol:g}")

    def write(self):
        with open(self.name, "w") as f:
            f.write("\n".join(self.lines) + "\n")
        print(f"wrote {self.name} ({len(self.lines)} lines)")


# ---------------------------------------------------------------- gamma core

g = FixFile("gamma.fix")

for x in ["1e-6", "0.001", "0.07", "0.5", "1.0", str(1 + 2.0**-20),
          "1.4616321449683623", str(2 - 2.0**-16), "2.5", "5.0", "17.25",
          "123.456", "1e4", "1e6"]:
    g.add("log_gamma", {"x": x}, mp.loggamma(mp.mpf(x)), 1e-13)

g.add("gamma_ratio", {"a": "2.125", "b": "0.375"},
      mp.gamma("2.125") / mp.gamma("0.375"), 1e-12)
g.add("gamma_ratio", {"a": "2", "b": "1"}, mp.mpf(1), 1e-13)
g.add("gamma_ratio", {"a": "101.25", "b": "100.25"}, mp.mpf("100.25"), 1e-12)

g.write()

# ---------------------------------------------------------- critical exponents


def hardy_ratio(n, s):
    n, s = mp.mpf(n), mp.mpf(s)
    return (mp.gamma((n + 2 * s) / 4) / mp.gamma((n - 2 * s) / 4)) ** 2


def hardy_lambda(n, s):
    return 2 ** (2 * mp.mpf(s)) * hardy_ratio(n, s)


def amplitude_ratio(n, s, p):
    n, s, p = mp.mpf(n), mp.mpf(s), mp.mpf(p)
    q = s / (p - 1)
    return (mp.gamma(n / 2 - q) * mp.gamma(s + q)
            / (mp.gamma(q) * mp.gamma((n - 2 * s) / 2 - q)))


def phi(n, s, p):
    return mp.mpf(p) * amplitude_ratio(n, s, p) - hardy_ratio(n, s)


def pc_s1(n):
    n = mp.mpf(n)
    if n <= 10:
        return mp.inf
    return ((n - 2) ** 2 - 4 * n + 8 * mp.sqrt(n - 1)) / ((n - 2) * (n - 10))


def pc_s2(n):
    n = mp.mpf(n)
    if n <= 12:
        return mp.inf
    w = mp.sqrt(n * n + 4 - n * mp.sqrt(n * n - 8 * n + 32))
    return (n + 2 - w) / (n - 6 - w)


e = FixFile("exponents.fix")

e.add("sobolev_exponent", {"n": 5, "s": 1.5}, mp.mpf(4), 1e-15)
e.add("sobolev_exponent", {"n": 3, "s": 1.5}, mp.inf, 1e-15)
e.add("sobolev_exponent", {"n": 5, "s": 2}, mp.mpf(9), 1e-15)

e.add("hardy_lambda", {"n": 5, "s": 1.5}, hardy_lambda(5, 1.5), 1e-12,
      comment="equals 8/pi")
e.add("hardy_lambda", {"n": 5, "s": 1}, hardy_lambda(5, 1), 1e-12)
e.add("hardy_ratio", {"n": 5, "s": 1.5}, hardy_ratio(5, 1.5), 1e-12,
      comment="equals 1/pi")

e.add("amplitude_ratio", {"n": 5, "s": 1.5, "p": 5},
      amplitude_ratio(5, 1.5, 5), 1e-12)
e.add("amplitude_ratio", {"n": 11, "s": 1, "p": 3},
      amplitude_ratio(11, 1, 3), 1e-12, comment="reduces to 4*(1/2) = 2")
e.add("singular_amplitude", {"n": 5, "s": 1.5, "p": 5},
      (2 ** mp.mpf(3) * amplitude_ratio(5, 1.5, 5)) ** mp.mpf("0.25"), 1e-12)
e.add("singular_amplitude", {"n": 11, "s": 1, "p": 5},
      mp.mpf("4.25") ** mp.mpf("0.25"), 1e-12,
      comment="classical s=1: A^{p-1} = (2/(p-1))(n-2-2/(p-1)) = 4.25")

e.add("stability_discriminant", {"n": 11, "s": 1, "p": 6}, phi(11, 1, 6), 1e-11)
e.add("stability_discriminant", {"n": 11, "s": 1, "p": 7}, phi(11, 1, 7), 1e-11)
e.add("stability_discriminant", {"n": 5, "s": 1.5, "p": str(4 + 1e-9)},
      phi(5, 1.5, mp.mpf(4) + mp.mpf("1e-9")), 1e-9,
      comment="limit p->pS+ equals (pS-1)*H = 3/pi")

for n in (10, 11, 12):
    e.add("pc_closed_form_s1", {"n": n}, pc_s1(n), 1e-14)
for n in (12, 13, 20):
    e.add("pc_closed_form_s2", {"n": n}, pc_s2(n), 1e-14)

e.add("joseph_lundgren", {"n": 11, "s": 1}, pc_s1(11), 1e-8,
      comment="(37+8*sqrt(10))/9")
e.add("joseph_lundgren", {"n": 13, "s": 2}, pc_s2(13), 1e-8)
e.add("joseph_lundgren", {"n": 10, "s": 1}, mp.inf, 1e-8)
e.add("joseph_lundgren", {"n": 12, "s": 2}, mp.inf, 1e-8)

e.write()

# ------------------------------------------------- radial powers / oracle


def gamma_t_beta(n, t, beta):
    n, t, beta = mp.mpf(n), mp.mpf(t), mp.mpf(beta)
    return (2 ** (2 * t)
            * mp.gamma((n + 2 * t + 2 * beta) / 4)
            * mp.gamma((n + 2 * t - 2 * beta) / 4)
            / (mp.gamma((n - 2 * t - 2 * beta) / 4)
               * mp.gamma((n - 2 * t + 2 * beta) / 4)))


p = FixFile("powercalc.fix")

p.add("gamma_t_beta", {"n": 5, "t": 0.5, "beta": 0},
      gamma_t_beta(5, 0.5, 0), 1e-13, comment="equals pi/2")
p.add("gamma_t_beta", {"n": 4, "t": 0.9, "beta": 0.1},
      gamma_t_beta(4, 0.9, 0.1), 1e-12)
p.add("gamma_t_beta", {"n": 5, "t": 0.25, "beta": 1.5},
      gamma_t_beta(5, 0.25, 1.5), 1e-12)

# oracle cases: e = beta - (n-2t)/2; expected value is the Fourier-symbol
# coefficient, i.e. the same gamma_t_beta closed form
for (n, t, ee) in [(5, 0.5, -2.0), (4, 0.9, -1.0), (3, 0.25, -1.2),
                   (8, 0.75, -2.25)]:
    beta = mp.mpf(ee) + (mp.mpf(n) - 2 * mp.mpf(t)) / 2
    p.add("fraclap_oracle", {"n": n, "t": t, "e": ee},
          gamma_t_beta(n, t, beta), 1e-6)

# coefficient of (-Delta)^s |x|^{-2s/(p-1)} equals 2^{2s} R(n,s,p)
p.add("fraclap_power_coeff", {"n": 5, "s": 1.5, "p": 5},
      2 ** mp.mpf(3) * amplitude_ratio(5, 1.5, 5), 1e-12)

p.add("verify_singular_residual", {"n": 5, "s": 1.5, "p": 5}, mp.mpf(0), 1e-10)
p.add("verify_singular_residual", {"n": 7, "s": 1.9, "p": 4}, mp.mpf(0), 1e-10)

p.write()

# ------------------------------------------------------- spherical kernels


def kernel_K(n, s, alpha, mu):
    n, s, alpha, mu = mp.mpf(n), mp.mpf(s), mp.mpf(alpha), mp.mpf(mu)

    def f(t):
        return ((t ** (n - 1 - alpha) + t ** (2 * s - 1 + alpha))
                * (t * t + 1 - 2 * t * mu) ** (-(n + 2 * s) / 2))

    return mp.quad(f, [0, 1])


def kernel_dK(n, s, alpha, mu):
    n, s, alpha, mu = mp.mpf(n), mp.mpf(s), mp.mpf(alpha), mp.mpf(mu)

    def f(t):
        return (mp.log(t) * (-(t ** (n - 1 - alpha)) + t ** (2 * s - 1 + alpha))
                * (t * t + 1 - 2 * t * mu) ** (-(n + 2 * s) / 2))

    return mp.quad(f, [0, 1])


def cnt(n, t):
    n, t = mp.mpf(n), mp.mpf(t)
    return 4 ** t * mp.gamma(n / 2 + t) * t / (mp.pi ** (n / 2) * mp.gamma(1 - t))


k = FixFile("spherekit.fix")

k.add("kernel_K", {"n": 5, "s": 1.5, "alpha": 0, "mu": 0},
      kernel_K(5, 1.5, 0, 0), 1e-9, comment="equals pi/32")
k.add("kernel_K", {"n": 3, "s": 0.75, "alpha": 0.5, "mu": -0.3},
      kernel_K(3, 0.75, 0.5, -0.3), 1e-8)
k.add("kernel_K", {"n": 4, "s": 1.2, "alpha": 1.0, "mu": 0.5},
      kernel_K(4, 1.2, 1.0, 0.5), 1e-8)
k.add("kernel_K", {"n": 2, "s": 1.5, "alpha": 0.25, "mu": -1},
      kernel_K(2, 1.5, 0.25, -1), 1e-8)
k.add("kernel_alpha_derivative", {"n": 5, "s": 1.5, "alpha": 0.5, "mu": 0},
      kernel_dK(5, 1.5, 0.5, 0), 1e-8)

# s<1: the delta->0 limit of the regularized constant at a=(n-2s)/2 is the
# raw (unnormalized) Hardy integral  Lambda_{n,s} / c_{n,s}
k.add("regularized_limit", {"n": 5, "s": 0.75, "a": 1.75},
      hardy_lambda(5, 0.75) / cnt(5, 0.75), 1e-4)

k.add("regularized_divergence_exponent", {"n": 5, "s": 1.5, "a": 1.0},
      mp.mpf("-0.5"), 2e-2)
k.add("regularized_c1_ratio",
      {"n": 5, "s": 1.5, "a": 1.0, "a2": 0.5},
      mp.mpf(1 * (2 - 1)) / (mp.mpf("0.5") * (2 - mp.mpf("0.5"))), 5e-2,
      comment="a(n-2s-a) / a2(n-2s-a2)")

k.write()

# --------------------------------------------------- extension / DtN symbol

x = FixFile("extension.fix")

# closed form at s=3/2 (b=0): phi=(1+xi y)e^{-xi y}, chi=-2 xi^2 e^{-xi y},
# m(xi) = chi'(0) = 2 xi^3
x.add("dtn_multiplier", {"s": 1.5, "xi": 1}, mp.mpf(2), 1e-6)
x.add("dtn_multiplier", {"s": 1.5, "xi": 2}, mp.mpf(16), 1e-6)
x.add("dtn_exponent", {"s": 1.5}, mp.mpf(3), 1e-6)
x.add("dtn_exponent", {"s": 1.2}, mp.mpf("2.4"), 1e-3)
x.add("dtn_exponent", {"s": 1.8}, mp.mpf("3.6"), 1e-3)
x.add("dtn_scaling", {"s": 1.3, "xi": 1, "lam": 2}, mp.mpf(1), 1e-4,
      comment="m(lam*xi)/(m(xi)*lam^{2s}), expected 1")

x.write()

# ------------------------------------------------------- energy functional

n = FixFile("energy.fix")

n.add("energy_zero_total", {"n": 2, "s": 1.5, "p": 5, "r": 1}, mp.mpf(0), 1e-14)
n.add("scale_invariance_residual",
      {"field": "gaussian", "n": 2, "s": 1.5, "p": 5, "lam": 2, "r": 1},
      mp.mpf(0), 1e-6)
n.add("homogeneity_defect", {"field": "homogeneous", "n": 2, "s": 1.5,
                             "p": 5, "r": 1}, mp.mpf(0), 1e-12,
      comment="degree is -2s/(p-1); defect vanishes identically")

n.write()
