"""Verification suites behind ``regl4 verify``.

Each suite returns a list of :class:`Check` records.  A check with a
tolerance passes when its deviation is at most the tolerance; a check
without one is a diagnostic and is reported only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import characters as ch
from . import eisenstein as es
from . import i2_pipeline as ip
from . import l_functions as lf
from . import regularized_products as rp
from . import special_functions as sf
from .errors import PreconditionError

__all__ = ["Check", "SuiteConfig", "SUITES", "run_suite", "bessel_moment_oracle_grid", "factorization_grid", "k0_series"]

EULER_GAMMA = 0.57721566490153286061


@dataclass
class Check:
    """One verified (or reported) quantity."""

    suite: str
    name: str
    anchor: str
    value: complex
    reference: complex | None
    deviation: float
    tolerance: float | None
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool | None:
        if self.tolerance is None:
            return None
        return bool(self.deviation <= self.tolerance)

    @property
    def status(self) -> str:
        return {None: "report", True: "pass", False: "fail"}[self.passed]


@dataclass(frozen=True)
class SuiteConfig:
    """Parameters shared by the suites; ``None`` lets each suite pick its default levels."""

    N: tuple[int, ...] | None = None
    T: tuple[float, ...] = (1.0,)
    char: str | None = None
    q1: int = 1
    eta_grid: tuple[float, ...] = ip.DEFAULT_ETA_GRID
    fd_step: float = 1e-3
    tol_identity: float = 1e-10
    tol_quadrature: float = 1e-8
    tol_derived: float = 1e-5
    X: tuple[float, ...] = (1e2, 1e4, 1e6)
    slow: bool = False

    def levels(self, default: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(self.N) if self.N else default

    def decomposition(self, N: int) -> ch.CharacterDecomposition:
        if N == 1:
            return es.trivial_decomposition()
        chi = ip.resolve_character(N, self.char)
        q1 = self.q1 if N % self.q1 == 0 and math.gcd(self.q1, N // self.q1) == 1 else 1
        return ch.decompose(chi, q1)

    def scenario(self, N: int, T: float) -> ip.I2Scenario:
        tols = ip.Tolerances(self.tol_identity, self.tol_quadrature, self.tol_derived)
        dec = self.decomposition(N)
        return ip.I2Scenario(N, dec.chi, dec, float(T), self.eta_grid, self.fd_step, tols)


def _rel(a, b) -> float:
    a, b = complex(a), complex(b)
    return abs(a - b) / abs(b) if b != 0 else abs(a)


class _Collector:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks: list[Check] = []

    def compare(self, name, anchor, value, reference, tol, relative=True, **info):
        dev = _rel(value, reference) if relative else abs(complex(value) - complex(reference))
        self.checks.append(Check(self.suite, name, anchor, complex(value), complex(reference), float(dev), tol, info))

    def bound(self, name, anchor, deviation, tol, value=None, **info):
        v = complex(deviation if value is None else value)
        self.checks.append(Check(self.suite, name, anchor, v, None, float(deviation), tol, info))

    def report(self, name, anchor, value, **info):
        self.checks.append(Check(self.suite, name, anchor, complex(value), None, float(abs(complex(value))), None, info))


# ---------------------------------------------------------------------------
# Shared oracle grids (also used by the acceptance tests)


def k0_series(x: float, terms: int = 60) -> float:
    """``K_0(x)`` from its ascending series."""
    q = x * x / 4
    i0, tail, term, harm = 1.0, 0.0, 1.0, 0.0
    for k in range(1, terms):
        term *= q / (k * k)
        harm += 1.0 / k
        i0 += term
        tail += term * harm
    return -(math.log(x / 2) + EULER_GAMMA) * i0 + tail


def bessel_moment_oracle_grid(count: int = 20, seed: int = 1, margin: float = 0.15):
    """Random in-strip triples ``(w1, w2, w3)`` with every Gamma argument's real part above ``margin``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        w1 = complex(rng.uniform(0.3, 1.2), rng.uniform(-2, 2))
        w2 = complex(rng.uniform(0.3, 1.2), rng.uniform(-2, 2))
        w3 = complex(rng.uniform(0.5, 3.0), rng.uniform(-2, 2))
        if min(a.real for a in sf.bessel_moment_arguments(w1, w2, w3).values()) > margin:
            out.append((w1, w2, w3))
    return out


def bessel_moment_quadrature(w1, w2, w3, tol: float = 1e-10) -> sf.QuadratureResult:
    f = lambda y: y ** (w3 - 1) * sf.bessel_k(w1 - 0.5, 2 * math.pi * y) * sf.bessel_k(w2 - 0.5, 2 * math.pi * y)
    return sf.adaptive_quadrature(f, 0.0, math.inf, tol)


FACTORIZATION_POINTS = (
    (0.8, 0.9, 4.0),
    (0.6 + 0.3j, 0.7 - 0.2j, 4.2),
    (0.55, 0.75 + 0.5j, 4.5 + 0.3j),
    (0.7 - 0.4j, 0.65 + 0.1j, 4.0 - 0.5j),
    (0.9, 0.6, 4.8),
)


def default_decomposition(N: int) -> ch.CharacterDecomposition:
    """Level ``N`` test decomposition: first primitive even character, ``q1 = 3`` at ``N = 15``."""
    if N == 1:
        return es.trivial_decomposition()
    chi = ip.resolve_character(N, None)
    return ch.decompose(chi, 3 if N == 15 else 1)


def factorization_grid(levels=(1, 5, 13, 15), decomposition: Callable = default_decomposition):
    """Parameter points with ``beta = Re w3 - |Re w1 - 1/2| - |Re w2 - 1/2| >= 3.3``.

    The certified tail bound reaches ``1e-8`` at ``n_max <= 2^18`` there.
    """
    return [rp.TripleProductParams(decomposition(N), *w) for N in levels for w in FACTORIZATION_POINTS]


# ---------------------------------------------------------------------------
# Suites


def suite_characters(cfg: SuiteConfig) -> list[Check]:
    c = _Collector("characters")
    chars5 = ch.enumerate_characters(5)
    even_nontrivial = [x for x in chars5 if x.is_even and not x.is_trivial]
    c.compare("q=5 has 4 characters", "enumeration of the unit group", len(chars5), 4, 0, relative=False)
    c.compare("q=5 has one even nontrivial character", "enumeration of the unit group", len(even_nontrivial), 1, 0, relative=False)
    c.compare("q=8 has 2 primitive characters", "conductor", sum(x.is_primitive for x in ch.enumerate_characters(8)), 2, 0, relative=False)

    worst = 0.0
    for q in range(1, 51):
        a = np.array([u for u in range(1, q + 1) if math.gcd(u, q) == 1])
        prod = (a[:, None] * a[None, :]) % q
        for x in ch.enumerate_characters(q):
            v = x(a)
            worst = max(worst, float(np.max(np.abs(np.outer(v, v) - x(prod)))))
    c.bound("multiplicativity, q <= 50", "chi(ab) = chi(a) chi(b)", worst, 1e-12)

    worst = 0.0
    for N in range(2, 101):
        units = np.array([u for u in range(1, N) if math.gcd(u, N) == 1])
        for x in ch.primitive_characters(N, "even"):
            for q1 in (d for d in range(1, N + 1) if N % d == 0 and math.gcd(d, N // d) == 1):
                d = ch.decompose(x, q1)
                worst = max(worst, float(np.max(np.abs(d.chi1(units) * np.conj(d.chi2(units)) - x(units)))))
    c.bound("decomposition round trip, N <= 100", "unique decomposition chi = chi1 conj(chi2)", worst, 1e-12)

    worst = 0.0
    for q in range(1, 51):
        for x in ch.primitive_characters(q):
            worst = max(worst, abs(abs(ch.gauss_sum(x)) ** 2 - q) / q)
    c.bound("|tau(chi)|^2 = q for primitive chi, q <= 50", "Gauss sum modulus", worst, 1e-12)
    c.compare("tau(quadratic mod 5) = sqrt 5", "Gauss sum", ch.gauss_sum(ch.quadratic_character(5)), math.sqrt(5), 1e-12)

    bad = 0
    for m in range(1, 101):
        for n in range(1, 10_000 // m + 1):
            if math.gcd(m, n) == 1 and ch.index_nu(m * n) != ch.index_nu(m) * ch.index_nu(n):
                bad += 1
    c.bound("nu multiplicative, mn <= 10^4, m <= 100", "nu(N) = N prod (1 + 1/p)", bad, 0)
    c.compare("nu(12) = 24", "nu(N) = N prod (1 + 1/p)", ch.index_nu(12), 24, 0, relative=False)
    c.compare("level product N=10, u=-1, v=-2", "prod (1-p^u)/(1-p^v)", ch.level_prime_product(10, -1, -2), 5 / 9, 1e-14)
    c.compare(
        "log sum N=6, p log^2 p/(p-1)^2",
        "sum_{p|N} p log^2 p/(p-1)^2",
        ch.level_log_sums(6, "p_log2_over_p_minus_1_sq"),
        2 * math.log(2) ** 2 + 0.75 * math.log(3) ** 2,
        1e-14,
    )
    return c.checks


def suite_special(cfg: SuiteConfig) -> list[Check]:
    c = _Collector("special")
    c.compare("log Gamma(1/2)", "Gamma(1/2) = sqrt(pi)", sf.log_gamma(0.5), 0.5 * math.log(math.pi), 1e-14)
    c.compare("log Gamma(5)", "Gamma(5) = 24", sf.log_gamma(5.0), math.log(24), 1e-14)
    grid = np.array([complex(a, b) for a in np.linspace(-19.7, 19.7, 16) for b in np.linspace(-19.3, 19.3, 16)])
    rec = np.abs(np.exp(sf.log_gamma(grid + 1) - sf.log_gamma(grid)) / grid - 1)
    c.bound("Gamma recurrence on |Re s|, |Im s| <= 20", "Gamma(s+1) = s Gamma(s)", float(rec.max()), 1e-12)

    c.compare("K_{1/2}(2)", "K_{1/2}(x) = sqrt(pi/2x) e^-x", sf.bessel_k(0.5, 2.0), math.sqrt(math.pi / 4) * math.exp(-2), 1e-13)
    c.compare("K_0(1) vs ascending series", "ascending series of K_0", sf.bessel_k(0.0, 1.0), k0_series(1.0), 1e-10)
    worst = 0.0
    for nu in (0.3 + 0.7j, 1.2 - 3j, 0.1 + 8j, 2.5 + 0.5j, -0.4 + 20j):
        x = np.array([1e-3, 0.1, 1.0, 5.0])
        worst = max(worst, float(np.max(np.abs(sf.bessel_k(nu, x) / sf.bessel_k(-nu, x) - 1))))
    c.bound("K_nu = K_-nu", "symmetry of the K integral", worst, 1e-12)

    c.compare("int_0^oo e^-y dy", "quadrature", sf.adaptive_quadrature(lambda y: np.exp(-y), 0, math.inf, 1e-12).value, 1.0, 1e-12)
    c.compare("int_0^1 y^-1/2 dy", "quadrature", sf.adaptive_quadrature(lambda y: y**-0.5, 0, 1, 1e-10).value, 2.0, 1e-10)
    w = (0.6, 0.9 + 0.2j, 1.7)
    c.compare("moment symmetric in w1, w2", "Gamma-product symmetry", sf.bessel_moment(*w), sf.bessel_moment(w[1], w[0], w[2]), 1e-14)
    worst = 0.0
    for w1, w2, w3 in bessel_moment_oracle_grid(20):
        worst = max(worst, _rel(bessel_moment_quadrature(w1, w2, w3).value, sf.bessel_moment(w1, w2, w3)))
    c.bound("Bessel moment closed form vs quadrature, 20 triples", "int y^(w3-1) K K dy = Gamma product", worst, cfg.tol_quadrature)
    return c.checks


def suite_lfun(cfg: SuiteConfig) -> list[Check]:
    c = _Collector("lfun")
    one = ch.trivial_character(1)
    c.compare("xi(2) = pi/6", "xi(2) = pi/6", lf.xi(2.0), math.pi / 6, 1e-12)
    c.compare("zeta(2, 1)", "zeta(2) = pi^2/6", lf.hurwitz_zeta(2.0, 1.0), math.pi**2 / 6, 1e-13)
    c.compare("zeta(3, 1/2) = 7 zeta(3)", "bisection identity", lf.hurwitz_zeta(3.0, 0.5), 7 * lf.hurwitz_zeta(3.0, 1.0), 1e-13)
    c.compare("xi(s) = xi(1-s)", "functional equation of xi", lf.xi(0.3 + 2j), lf.xi(0.7 - 2j), 1e-10)
    chi0 = ch.trivial_character(6)
    c.compare(
        "principal L mod 6",
        "Euler factor removal",
        lf.dirichlet_l(2.0, chi0),
        math.pi**2 / 6 * (1 - 1 / 4) * (1 - 1 / 9),
        1e-13,
    )
    worst = 0.0
    rng = np.random.default_rng(7)
    for q in (3, 4, 5, 7, 8, 11, 13, 15, 21, 24, 35, 48):
        for x in ch.primitive_characters(q):
            for _ in range(2):
                s = complex(rng.uniform(-1.5, 2.5), rng.uniform(-10, 10))
                worst = max(worst, abs(abs(lf.completed(s, x)) / abs(lf.completed(1 - s, x.conj())) - 1))
    c.bound("|Lambda(s)| = |Lambda(1-s, conj chi)|", "functional equation", worst, 1e-9)
    q5 = ch.quadratic_character(5)
    s = 1 + 2j
    h = 1e-3
    logL = lambda t: np.log(lf.dirichlet_l(t, q5))
    fd1 = (logL(s + h) - logL(s - h)) / (2 * h)
    c.compare("L'/L vs central difference", "log-derivative", lf.log_derivative(1, s, q5), fd1, 1e-6)
    L = lambda t: lf.dirichlet_l(t, q5)
    d2 = lambda hh: (L(s + hh) - 2 * L(s) + L(s - hh)) / hh**2
    fd2 = (4 * d2(h / 2) - d2(h)) / 3 / L(s)
    c.compare("L''/L vs second difference", "log-derivative", lf.log_derivative(2, s, q5), fd2, 1e-6)
    c.compare(
        "conjugation of L'/L",
        "Schwarz reflection",
        lf.log_derivative(1, np.conj(s), q5.conj()),
        np.conj(lf.log_derivative(1, s, q5)),
        1e-11,
    )
    lau = lf.xi_laurent_at_one()
    c.compare("residue of xi at 1", "xi(s) = 1/(s-1) + a + b(s-1)", lau[-1], 1.0, 1e-10)
    c.compare("a = (gamma - log 4 pi)/2", "xi(s) = 1/(s-1) + a + b(s-1)", lau[0], (EULER_GAMMA - math.log(4 * math.pi)) / 2, 1e-10)
    c.compare("explicit sum, X = 2", "prime sum with weight max(1-y, 0)", lf.explicit_formula_prime_sum(1.0, one, 2.0), 0.0, 0, relative=False)
    direct = sum(math.log(p) / p * (1 - p / 10) for p in (2, 3, 5, 7))
    c.compare("explicit sum, X = 10, s = 1", "prime sum with weight max(1-y, 0)", lf.explicit_formula_prime_sum(1.0, one, 10.0), direct, 1e-14)
    return c.checks


def suite_eisenstein(cfg: SuiteConfig) -> list[Check]:
    c = _Collector("eisenstein")
    worst = 0.0
    rng = np.random.default_rng(3)
    n = np.arange(1, 101)
    for N in range(1, 31):
        for x in ch.primitive_characters(N, "even") if N > 1 else [ch.trivial_character(1)]:
            for q1 in (d for d in range(1, N + 1) if N % d == 0 and math.gcd(d, N // d) == 1):
                d = ch.decompose(x, q1)
                s = complex(rng.uniform(-1, 2), rng.uniform(-5, 5))
                a = es.fourier_coefficients(100, s, d)
                b = es.fourier_coefficients(100, 1 - s, d.swapped())
                worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1))))
    c.bound("coefficient identity, n <= 100, N <= 30", "functional equation due to Huxley", worst, 1e-12, terms=int(n.size))
    for N in cfg.levels((5, 13, 15)):
        d = cfg.decomposition(N)
        r = es.functional_equation_residual(np.array([0.2 + 1.5j, -0.3 + 1.2j]), 0.7 + 0.4j, d)
        c.bound(f"functional equation residual, N={N}", "functional equation due to Huxley", r, 1e-8)
        s = 1.6
        z = 0.0 + 2.0j
        M = 64
        x = np.arange(M) / M
        lat = es.eval_lattice(x + 1j * z.imag, s, d)
        proj = es.mode_projection(lat, 1)
        ref = 2 * math.sqrt(z.imag) * sf.bessel_k(s - 0.5, 2 * math.pi * z.imag)
        c.compare(f"first mode of the lattice sum, N={N}", "Fourier expansion", proj, ref, 1e-6)
        ts = np.linspace(0, 10, 11)
        dev = max(abs(abs(es.scattering_phi(0.5 + 1j * t, d)) - 1) for t in ts)
        c.bound(f"|phi(1/2+it)| = 1, N={N}", "scattering unitarity", dev, 1e-9)
        rep = es.slash_identity_check(np.array([0.1 + 2.0j, 0.37 + 1.6j]), 1.7, d)
        c.bound(f"slash identity up to chi1(-1), N={N}", "slash identity at 1/q2", rep.residual_after_unit, 1e-6, unit=str(rep.unit_factor))
    worst = 0.0
    for N in range(2, 31):
        for x in ch.primitive_characters(N, "even"):
            d = ch.decompose(x, 1)
            worst = max(worst, max(abs(abs(es.scattering_phi(0.5 + 1j * t, d)) - 1) for t in np.linspace(0, 10, 21)))
    c.bound("|phi(1/2+it)| = 1 for every primitive even chi, N <= 30", "scattering unitarity", worst, 1e-9)
    d = ch.decompose(ch.from_conrey(15, 2), 3)
    decay = max(abs(es.cusp_constant_mode(1.6, d, q, 1.5, samples=8)) for q in (1, 15))
    c.bound("zero mode at the other cusps, N=15", "constant term vanishes away from 1/q2 and 1/q1", decay, 1e-10)
    return c.checks


def suite_regprod(cfg: SuiteConfig) -> list[Check]:
    c = _Collector("regprod")
    levels = cfg.levels((1, 5, 13, 15))
    grid = factorization_grid(levels, lambda N: cfg.decomposition(N) if cfg.char or cfg.q1 != 1 else default_decomposition(N))
    w_close = w_fact = 0.0
    for p in grid:
        n = rp.certified_n_max(p, 1e-8)
        u = rp.triple_product_unfolded(p, n, tol=1e-8)
        w_close = max(w_close, _rel(u.value, rp.triple_product_closed(p)))
        w_fact = max(w_fact, rp.dirichlet_factorization_check(p, n))
    c.bound(f"closed form vs unfolded sum, N in {levels}", "regularized triple product closed form", w_close, 1e-7, points=len(grid))
    c.bound(f"Dirichlet series vs L-product, N in {levels}", "Dirichlet series factorization", w_fact, 1e-7, points=len(grid))
    one = es.trivial_decomposition()
    p = rp.TripleProductParams(one, 0.5, 0.5 + 1e-9, 3.0)
    c.bound("sum d(n)^2 n^-3 = zeta(3)^4/zeta(6)", "Ramanujan identity", rp.dirichlet_factorization_check(p, 1 << 20), 1e-8)
    d5 = ch.decompose(ch.quadratic_character(5), 1)
    p = rp.TripleProductParams(d5, 0.8 + 0.3j, 0.7 - 0.2j, 1.9)
    c.compare("symmetry w1 <-> w2 with conjugated characters", "closed form symmetry", rp.triple_product_closed(p.swapped()), rp.triple_product_closed(p), 1e-12)
    if cfg.slow:
        p = rp.TripleProductParams(d5, 0.8, 0.9, 2.2)
        sm = rp.triple_product_smoothed(p)
        c.compare("N=5, w=(0.8, 0.9, 2.2), smoothed sum", "closed form vs unfolded", sm.value, rp.triple_product_closed(p), 1e-7)
        p = rp.TripleProductParams(one, 0.7, 0.9, 2.5)
        sm = rp.triple_product_smoothed(p)
        c.compare("N=1, w=(0.7, 0.9, 2.5), smoothed sum", "closed form vs unfolded", sm.value, rp.triple_product_closed(p), 1e-8)
        F = rp.eisenstein_product(one, 0.7, 0.9)
        r = rp.theorem_rn_oracle(F, 2.5)
        c.compare("direct regularized integral, N=1", "regularized integral against E(., w)", r.value, rp.triple_product_closed(p), 1e-5)
        F0 = rp.EisensteinProduct(((one, 0.6 + 0j),), 1 / lf.xi(1.2))
        r = rp.theorem_rn_oracle(F0, 2.1)
        c.bound("regularized integral of E E vanishes, N=1", "double products integrate to zero", abs(r.value), 1e-6)
    return c.checks


def suite_i2(cfg: SuiteConfig) -> list[Check]:
    c = _Collector("i2")
    for N in cfg.levels((5,)):
        for T in cfg.T:
            sc = cfg.scenario(N, T)
            tag = f"N={N}, T={T:g}"
            F0 = 1.0 / (lf.xi(2.0).real * ch.index_nu(N))
            for j in (1, 2, 3, 4):
                z = ip.f_at_zero(j, sc)
                c.compare(f"F_{j}(0) from the explicit F_{j}, {tag}", "F_1(0)=F_2(0)=F_3(0)=F_4(0)=(xi(2)nu(N))^-1", z.extrapolated, F0, cfg.tol_identity)
                c.compare(f"F_{j}(0) by extrapolation of H_{j}, {tag}", "F_1(0)=F_2(0)=F_3(0)=F_4(0)=(xi(2)nu(N))^-1", ip.h_zero_limit(j, sc)[0], F0, 1e-7)
            for j in (1, 2, 3, 4):
                v, _ = ip.h_limit(j, 0.1, sc)
                c.compare(f"F_{j} as the eta' -> 0 limit of H_{j}, {tag}", "F_j(eta) = lim H_j", ip.f_factor(j, 0.1, sc), v, 1e-7)
            fit = ip.laurent_fit(sc)
            const = ip.i2_constant_term(sc)
            c.bound(f"c_-2 / c_0, {tag}", "poles cancel", abs(fit[-2]) / abs(fit[0]), 1e-4)
            c.bound(f"c_-1 / c_0, {tag}", "poles cancel", abs(fit[-1]) / abs(fit[0]), 1e-4)
            c.compare(f"constant term: derivatives vs Laurent fit, {tag}", "I2 constant term", const.value, fit[0], 1e-5)
            c.bound(f"half-grid stability of c_0, {tag}", "Laurent fit", ip.half_grid_stability(sc), cfg.tol_derived)
            for j in (1, 2, 3, 4):
                r = ip.f_derivative(j, 1, sc)
                c.compare(f"F_{j}'(0) vs printed formula, {tag}", "printed F_j'(0)", r.value, r.printed_value, 1e-5)
                c.compare(f"F_{j}'(0) vs derived formula, {tag}", "F_j'(0) from the explicit F_j", r.value, r.derived_value, 1e-5)
            for j in (1, 2, 3, 4):
                r = ip.f_derivative(j, 2, sc)
                c.report(f"F_{j}''(0) printed deviation, {tag}", "printed F_j''(0)", r.printed_relative_deviation)
                c.compare(f"F_{j}''(0) vs derived formula, {tag}", "F_j''(0) from the explicit F_j", r.value, r.derived_value, 1e-5)
            rep = ip.i2_asymptotic_report(sc, const)
            c.bound(f"remainder / envelope, {tag}", "4 log^2 N + 4 Re L''/L", rep["ratio"], 50.0, value=rep["ratio"])
            rd = ip.rederive_i2_terms(0.6 + 0.3j, 0.7 - 0.2j, 0.65 + 0.1j, 0.55 - 0.4j, sc)
            c.bound(f"H_j xi xi vs triple products, {tag}", "four-term formula for I2", rd["relative_gap"], 1e-7)
    return c.checks


SUITES: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "characters": suite_characters,
    "special": suite_special,
    "lfun": suite_lfun,
    "eisenstein": suite_eisenstein,
    "regprod": suite_regprod,
    "i2": suite_i2,
}


def run_suite(name: str, cfg: SuiteConfig) -> list[Check]:
    if name == "all":
        return [chk for key in SUITES for chk in SUITES[key](cfg)]
    try:
        fn = SUITES[name]
    except KeyError:
        raise PreconditionError(f"unknown suite {name!r}") from None
    return fn(cfg)
