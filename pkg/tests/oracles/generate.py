"""Regenerate the frozen oracle values used by the tests (mpmath, 30 digits).

Run ``python3 tests/oracles/generate.py`` and paste the printed dict into
``tests/oracles/values.py``.  Nothing here imports ``regl4``.
"""

import math
from pprint import pformat

import mpmath as mp

mp.mp.dps = 30


def c(z):
    z = mp.mpc(z)
    return complex(float(z.real), float(z.imag))


def quad5(n):
    return [0, 1, -1, -1, 1][n % 5]


def char13_3():
    # Conrey 13.3 with primitive root 2: chi(2^k) = e(k ind(3) / 12), ind_2(3) = 4
    ind = {pow(2, k, 13): k for k in range(12)}
    return [0] + [mp.expjpi(2 * mp.mpf(4 * ind[m]) / 12) for m in range(1, 13)]


def xi(s):
    return mp.pi ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)


def completed(s, chi, q):
    kappa = 0 if chi[q - 1] == 1 else 1
    return (q / mp.pi) ** ((s + kappa) / 2) * mp.gamma((s + kappa) / 2) * mp.dirichlet(s, chi)


def sigma(n, a):
    return sum(mp.mpf(d) ** a for d in range(1, n + 1) if n % d == 0)


def eisenstein_level_one_nonconstant(z, s, terms=60):
    x, y = mp.re(z), mp.im(z)
    tot = 0
    for n in range(1, terms):
        lam = mp.mpf(n) ** (-(s - 0.5)) * sigma(n, 2 * s - 1)
        tot += 2 * mp.sqrt(y) * lam * mp.besselk(s - 0.5, 2 * mp.pi * n * y) * 2 * mp.cos(2 * mp.pi * n * x)
    return tot


def main():
    out = {}
    out["log_gamma"] = [(c(s), c(mp.loggamma(s))) for s in (0.5 + 3j, -2.5 + 0.1j, 10 - 20j, 0.01 + 0.001j, -7.3 - 4j, 150 + 2j)]
    out["bessel_k"] = [
        (c(nu), x, c(mp.besselk(nu, x)))
        for nu, x in ((0.3 + 0.7j, 0.5), (0.1 + 50j, 1e-3), (2.5, 10.0), (1.2 - 3j, 5.0), (0, 1e-6), (0.5j, 30.0), (4 + 8j, 0.2))
    ]
    out["hurwitz"] = [(c(s), a, c(mp.zeta(s, a))) for s, a in ((2.5 + 1j, 0.3), (-1.5 + 2j, 0.7), (0.5 + 14j, 1.0), (-3.5, 0.25), (0.999 + 0.5j, 2.5))]
    q5 = [quad5(n) for n in range(5)]
    out["l_quad5"] = [(c(s), c(mp.dirichlet(s, q5))) for s in (1 + 2j, 0.5 + 10j, -1.2 + 0.5j)]
    out["l_quad5"].append((1 + 0j, c(2 * mp.log((1 + mp.sqrt(5)) / 2) / mp.sqrt(5))))
    x13 = char13_3()
    out["l_13_3"] = [(c(s), c(mp.dirichlet(s, x13))) for s in (1 + 2j, 0.5 + 3j, 2.0)]
    out["lambda_quad5"] = [(c(s), c(completed(s, q5, 5))) for s in (0.3 + 2j, 1 + 2j)]
    s0 = mp.mpc(1, 2)
    L = lambda t: mp.dirichlet(t, q5)
    out["log_derivative_quad5"] = {
        "s": c(s0),
        "L1": c(mp.diff(L, s0) / L(s0)),
        "L2": c(mp.diff(L, s0, 2) / L(s0)),
    }
    g = lambda t: (t - 1) * xi(t)
    tay = mp.taylor(g, 1, 2, singular=True)
    out["xi_laurent"] = {"a": float(tay[1]), "b": float(tay[2])}
    xd = mp.diff(xi, s0) / xi(s0)
    out["xi_log_derivative_1p2i"] = c(xd)
    moments = []
    for w1, w2, w3 in ((0.6, 0.9 + 0.2j, 1.7), (0.8 - 0.5j, 0.4 + 1j, 2.3 + 0.7j), (1.05, 0.6, 1.8)):
        f = lambda y: y ** (w3 - 1) * mp.besselk(w1 - 0.5, 2 * mp.pi * y) * mp.besselk(w2 - 0.5, 2 * mp.pi * y)
        moments.append(((w1, w2, w3), c(mp.quad(f, [0, 0.5, 2, mp.inf]))))
    out["bessel_moment"] = moments
    w1, w2, w3 = mp.mpf("0.8"), mp.mpf("0.9"), mp.mpf(4)
    zeta = lambda t: mp.zeta(t)
    prod = (
        zeta(w1 + w2 + w3 - 1)
        * mp.dirichlet(w1 - w2 + w3, q5)
        * mp.dirichlet(-w1 + w2 + w3, q5)
        * zeta(-w1 - w2 + w3 + 1) * (1 - mp.mpf(5) ** (-(-w1 - w2 + w3 + 1)))
        / (zeta(2 * w3) * (1 - mp.mpf(5) ** (-2 * w3)))
    )
    out["l_product_n5"] = c(prod)
    z, s = mp.mpc(0.2, 0.9), mp.mpc(0.7, 1.0)
    out["eisenstein_level_one"] = {"z": c(z), "s": c(s), "nonconstant": c(eisenstein_level_one_nonconstant(z, s))}
    z, s = mp.mpc(0.31, 1.1), mp.mpf(1.6)
    full = xi(2 * s) * mp.im(z) ** s + xi(2 - 2 * s) * mp.im(z) ** (1 - s) + eisenstein_level_one_nonconstant(z, s)
    out["eisenstein_level_one_full"] = {"z": c(z), "s": float(s), "value": c(full)}
    print("VALUES = " + pformat(out, width=110))


if __name__ == "__main__":
    main()
