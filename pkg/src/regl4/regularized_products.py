"""Regularized triple products ``<E*(., w1) E*(., w2), E_a(., conj w3)>_reg``.

Four routes to the same number:

* :func:`triple_product_closed`, the product of completed L-functions;
* :func:`triple_product_unfolded`, the Rankin-Selberg unfolded form
  ``8 q1 (q2/N)^(w1+w2) sum_n lambda(n, w1) lambda'(n, w2) n^-w3`` times the
  Bessel moment, truncated with an explicit tail bound;
* :func:`triple_product_smoothed`, the same Dirichlet series summed with an
  exponential weight and extrapolated in the smoothing length (for points
  where plain truncation cannot be certified);
* :func:`theorem_rn_oracle`, a direct double integral of the zero Fourier
  mode with the moderate-growth part removed by fitting.

Throughout ``psi = chi1 chi2`` must be even, so the pairing has trivial
nebentypus and the Bessel-moment formula applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .characters import CharacterDecomposition, gauss_sum, level_prime_product, trivial_character
from .eisenstein import EisensteinSpec, fourier_coefficients
from .errors import ConvergenceError, PreconditionError, SingularInputError
from .l_functions import ZERO_THRESHOLD, completed, dirichlet_l
from .special_functions import bessel_k, bessel_moment, bessel_moment_arguments

__all__ = [
    "TripleProductParams",
    "UnfoldedResult",
    "triple_product_closed",
    "triple_product_unfolded",
    "triple_product_smoothed",
    "dirichlet_partial_sum",
    "dirichlet_l_product",
    "dirichlet_factorization_check",
    "divisor_square_tail_bound",
    "certified_n_max",
    "RNResult",
    "EisensteinProduct",
    "eisenstein_product",
    "theorem_rn_oracle",
    "continuation_diagnostic",
    "continuous_spectrum_integrand",
    "smoothed_exponents",
]

_DISTINCT = 1e-12
N_MAX_CAP = 4_000_000


@dataclass(frozen=True)
class TripleProductParams:
    """Parameters ``(dec, w1, w2, w3)`` of one triple product.

    The constructor enforces the hypotheses ``w1 != w2``, ``w1 != 1 - w2``,
    ``w3 not in {0, 1}`` and that ``chi1 chi2`` is even.  Membership of the
    convergence strip is checked separately by :meth:`check_strip` because the
    closed form is meaningful outside it.
    """

    dec: CharacterDecomposition
    w1: complex
    w2: complex
    w3: complex

    def __post_init__(self):
        for name in ("w1", "w2", "w3"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.w1 - self.w2) < _DISTINCT:
            raise PreconditionError("w1 must differ from w2")
        if abs(self.w1 + self.w2 - 1) < _DISTINCT:
            raise PreconditionError("w1 must differ from 1 - w2")
        if min(abs(self.w3), abs(self.w3 - 1)) < _DISTINCT:
            raise PreconditionError("w3 must avoid 0 and 1")
        if not self.dec.psi.is_even:
            raise PreconditionError("chi1 chi2 must be even")

    @property
    def N(self) -> int:
        return self.dec.N

    @property
    def beta(self) -> float:
        """Decay exponent of the termwise bound ``d(n)^2 n^-beta``."""
        return self.w3.real - abs(self.w1.real - 0.5) - abs(self.w2.real - 0.5)

    def strip_violations(self) -> list[str]:
        out = []
        if (-self.w1 - self.w2 + self.w3 + 1).real <= 1:
            out.append("Re(-w1 - w2 + w3 + 1) <= 1")
        for (e1, e2), a in bessel_moment_arguments(self.w1, self.w2, self.w3).items():
            if a.real <= 0:
                out.append(f"Bessel-moment Gamma argument with signs ({e1:+d}, {e2:+d}) has Re <= 0")
        return out

    def in_strip(self) -> bool:
        return not self.strip_violations()

    def check_strip(self) -> None:
        bad = self.strip_violations()
        if bad:
            raise PreconditionError("outside the convergence strip: " + "; ".join(bad))

    def swapped(self) -> TripleProductParams:
        """``(w1, chi1, chi2) <-> (w2, conj chi1, conj chi2)``."""
        return TripleProductParams(self.dec.conj(), self.w2, self.w1, self.w3)


# ---------------------------------------------------------------------------
# Closed form


def _factor(value: complex, name: str) -> complex:
    if not np.isfinite(value):
        raise SingularInputError(f"{name} is not finite", factor=name)
    return value


def _completed_factor(s: complex, chi, name: str) -> complex:
    try:
        return _factor(completed(s, chi), name)
    except SingularInputError as exc:
        raise SingularInputError(f"{name} has a pole at s={s}", factor=name) from exc


def triple_product_closed(p: TripleProductParams) -> complex:
    """Closed form of the regularized triple product.

    ``N^-w3 q1 (q2/N)^(w1+w2) / xi(2 w3) prod_{p|N} (1 - p^(w1+w2-w3-1)) / (1 - p^(-2 w3))``
    times ``xi(w1+w2+w3-1) Lambda(w1-w2+w3, psi) Lambda(-w1+w2+w3, conj psi) xi(-w1-w2+w3+1)``.

    Raises
    ------
    SingularInputError
        When ``xi(2 w3)`` vanishes or a numerator factor sits on a pole;
        ``factor`` names it.
    """
    w1, w2, w3 = p.w1, p.w2, p.w3
    N, q1, q2 = p.N, p.dec.q1, p.dec.q2
    psi = p.dec.psi
    one = trivial_character(1)
    den = _completed_factor(2 * w3, one, "xi(2 w3)")
    if abs(den) < ZERO_THRESHOLD:
        raise SingularInputError("xi(2 w3) vanishes", factor="xi(2 w3)")
    try:
        prod = level_prime_product(N, w1 + w2 - w3 - 1, -2 * w3)
    except SingularInputError as exc:
        raise SingularInputError(str(exc), factor="prod_{p|N} 1/(1 - p^-2w3)") from exc
    num = (
        _completed_factor(w1 + w2 + w3 - 1, one, "xi(w1+w2+w3-1)")
        * _completed_factor(w1 - w2 + w3, psi, "Lambda(w1-w2+w3, psi)")
        * _completed_factor(-w1 + w2 + w3, psi.conj(), "Lambda(-w1+w2+w3, conj psi)")
        * _completed_factor(-w1 - w2 + w3 + 1, one, "xi(-w1-w2+w3+1)")
    )
    scale = np.exp(-w3 * math.log(N) + (w1 + w2) * math.log(q2 / N)) * q1
    return complex(scale * prod * num / den)


def _prefactor(p: TripleProductParams) -> complex:
    return complex(8 * p.dec.q1 * np.exp((p.w1 + p.w2) * math.log(p.dec.q2 / p.N)))


# ---------------------------------------------------------------------------
# Dirichlet series side


def _lambda_tables(p: TripleProductParams, n_max: int):
    one = trivial_character(1)
    psi = p.dec.psi
    lam1 = fourier_coefficients(n_max, p.w1, CharacterDecomposition(one, psi))
    lam2 = fourier_coefficients(n_max, p.w2, CharacterDecomposition(one, psi.conj()))
    return lam1, lam2


def _dirichlet_terms(p: TripleProductParams, n_max: int) -> np.ndarray:
    lam1, lam2 = _lambda_tables(p, n_max)
    n = np.arange(1, n_max + 1)
    return lam1 * lam2 * np.exp(-p.w3 * np.log(n))


def divisor_square_tail_bound(M: int, beta: float) -> float:
    """Upper bound for ``sum_{n > M} d(n)^2 n^-beta`` (``beta > 1``).

    Uses ``sum_{n <= x} d(n)^2 <= x (1 + log x)^3`` (from ``d^2 <= d_4``) and
    partial summation, giving
    ``beta M^(1-beta) sum_{k=0}^{3} 3!/(3-k)! (1 + log M)^(3-k) / (beta-1)^(k+1)``.
    """
    if beta <= 1:
        return math.inf
    L = 1.0 + math.log(M)
    g = beta - 1.0
    s = sum(math.factorial(3) / math.factorial(3 - k) * L ** (3 - k) / g ** (k + 1) for k in range(4))
    return beta * M ** (-g) * s


def dirichlet_partial_sum(p: TripleProductParams, n_max: int) -> tuple[complex, float]:
    """``sum_{n <= n_max} lambda(n, w1) lambda'(n, w2) n^-w3`` and a bound on the rest.

    ``lambda = lambda_{1,psi}``, ``lambda' = lambda_{1,conj psi}``.  The bound
    uses ``|lambda(n, w)| <= d(n) n^|Re w - 1/2|``.
    """
    if n_max < 1:
        raise PreconditionError("n_max must be positive")
    terms = _dirichlet_terms(p, n_max)
    return complex(np.sum(terms)), divisor_square_tail_bound(n_max, p.beta)


def certified_n_max(p: TripleProductParams, tol: float, cap: int = N_MAX_CAP) -> int:
    """Smallest power of two ``n_max`` whose tail bound is below ``tol`` times the sum.

    The size of the sum is estimated from its first 1024 terms (halved for
    safety).  Raises ``ConvergenceError`` if no ``n_max <= cap`` suffices.
    """
    head = abs(np.sum(_dirichlet_terms(p, 1024)))
    target = 0.5 * tol * head
    n = 1024
    while n <= cap:
        if divisor_square_tail_bound(n, p.beta) <= target:
            return n
        n *= 2
    raise ConvergenceError(
        f"tail bound at n_max={cap} is {divisor_square_tail_bound(cap, p.beta):.3g} "
        f"relative {divisor_square_tail_bound(cap, p.beta) / head:.3g}, above tol={tol}",
        error=divisor_square_tail_bound(cap, p.beta) / head,
    )


@dataclass(frozen=True)
class UnfoldedResult:
    """Truncated unfolded value with its certified absolute tail bound."""

    value: complex
    tail_bound: float
    n_max: int

    @property
    def relative_tail(self) -> float:
        return self.tail_bound / abs(self.value) if self.value else math.inf


def triple_product_unfolded(p: TripleProductParams, n_max: int, tol: float | None = None) -> UnfoldedResult:
    """Unfolded form truncated at ``n_max``.

    Parameters
    ----------
    p : TripleProductParams
        Must lie in the convergence strip.
    n_max : int
        Number of Dirichlet terms.
    tol : float, optional
        If given, a relative tail bound above ``tol`` raises ``ConvergenceError``
        (insufficient ``n_max``).
    """
    p.check_strip()
    pref = _prefactor(p) * bessel_moment(p.w1, p.w2, p.w3)
    s, tail = dirichlet_partial_sum(p, n_max)
    res = UnfoldedResult(complex(pref * s), float(abs(pref) * tail), n_max)
    if tol is not None and res.relative_tail > tol:
        raise ConvergenceError(
            f"insufficient n_max={n_max}: relative tail bound {res.relative_tail:.3g} > {tol}",
            estimate=res.value,
            error=res.relative_tail,
        )
    return res


def dirichlet_l_product(p: TripleProductParams) -> complex:
    """``zeta(w1+w2+w3-1) L(w1-w2+w3, psi) L(-w1+w2+w3, conj psi) L(-w1-w2+w3+1, chi_0) / L(2 w3, chi_0)``."""
    w1, w2, w3 = p.w1, p.w2, p.w3
    psi = p.dec.psi
    chi0 = trivial_character(p.N)
    den = dirichlet_l(2 * w3, chi0)
    if abs(den) < ZERO_THRESHOLD:
        raise SingularInputError("L(2 w3, chi_0) vanishes", factor="L(2 w3, chi_0)")
    return complex(
        dirichlet_l(w1 + w2 + w3 - 1, trivial_character(1))
        * dirichlet_l(w1 - w2 + w3, psi)
        * dirichlet_l(-w1 + w2 + w3, psi.conj())
        * dirichlet_l(-w1 - w2 + w3 + 1, chi0)
        / den
    )


def dirichlet_factorization_check(p: TripleProductParams, n_max: int) -> float:
    """Relative gap between the truncated Dirichlet series and its L-function product."""
    p.check_strip()
    s, _ = dirichlet_partial_sum(p, n_max)
    ref = dirichlet_l_product(p)
    return float(abs(s - ref) / abs(ref))


def smoothed_exponents(p: TripleProductParams, count: int = 3) -> list[complex]:
    """Exponents ``e`` in ``S_X = S + sum_e c_e X^e`` for the exponentially smoothed sum.

    They come from the poles of ``Gamma(u) D(w3 + u)`` left of ``u = 0``:
    the two zeta poles of the Dirichlet series, the two L-poles when ``psi``
    is trivial, and ``u = -1, -2, ...`` from Gamma.
    """
    w1, w2, w3 = p.w1, p.w2, p.w3
    ex = [w1 + w2 - w3, 2 - w1 - w2 - w3]
    if p.dec.psi.conductor == 1:
        ex += [1 - w1 + w2 - w3, 1 + w1 - w2 - w3]
    ex += [-float(k) for k in range(1, count + 1)]
    return ex


def triple_product_smoothed(
    p: TripleProductParams,
    X: Sequence[float] | None = None,
) -> UnfoldedResult:
    """Unfolded form with the Dirichlet series summed as ``lim_X sum f(n) e^{-n/X}``.

    Each smoothed sum is exact up to rounding (terms are kept until
    ``e^{-n/X} < 1e-17``); the limit is taken by least squares on the known
    power corrections from :func:`smoothed_exponents` whose real part lies
    above ``-3``.  ``tail_bound`` is the change in the extrapolated value when
    the smallest ``X`` is dropped.
    """
    p.check_strip()
    if X is None:
        X = 1000.0 * 2.0 ** (np.arange(13) / 2)
    X = np.sort(np.asarray(X, dtype=float))
    n_max = int(math.ceil(40 * X[-1]))
    terms = _dirichlet_terms(p, n_max)
    n = np.arange(1, n_max + 1)
    sums = np.array([np.sum(terms * np.exp(-n / x)) for x in X])
    ex = [e for e in smoothed_exponents(p) if e.real > -3]

    def fit(xs, ss):
        A = np.column_stack([np.ones(xs.size)] + [np.exp(e * np.log(xs)) for e in ex])
        sol, *_ = np.linalg.lstsq(A, ss, rcond=None)
        return sol[0]

    if X.size < len(ex) + 2:
        raise PreconditionError(f"need at least {len(ex) + 2} smoothing lengths")
    full = fit(X, sums)
    drop = fit(X[1:], sums[1:])
    pref = _prefactor(p) * bessel_moment(p.w1, p.w2, p.w3)
    return UnfoldedResult(complex(pref * full), float(abs(pref) * abs(full - drop)), n_max)


# ---------------------------------------------------------------------------
# Direct regularized integral


@dataclass(frozen=True)
class EisensteinProduct:
    """``c * prod_k E*_{dec_k}(z, s_k)`` at the cusp ``oo``, ready for x-projection.

    ``with_constant`` includes the level-one constant terms (requires every
    factor to be the trivial pair); otherwise only non-constant parts are
    multiplied, whose zero mode has no moderate-growth part at all.
    """

    factors: tuple[tuple[CharacterDecomposition, complex], ...]
    scale: complex = 1.0
    with_constant: bool = True
    tol: float = 1e-14

    def __post_init__(self):
        if self.with_constant and any(d.N != 1 for d, _ in self.factors):
            raise PreconditionError("constant terms are only available at level one")

    def __mul__(self, c: complex) -> EisensteinProduct:
        return EisensteinProduct(self.factors, self.scale * c, self.with_constant, self.tol)

    __rmul__ = __mul__

    @property
    def moderate_exponents(self) -> list[complex]:
        """Powers of ``y`` in the moderate-growth part of the zero mode."""
        if not self.with_constant:
            return []
        ex = [0j]
        for _, s in self.factors:
            ex = [e + t for e in ex for t in (complex(s), 1 - complex(s))]
        return ex

    @property
    def small_y_exponents(self) -> list[complex]:
        """``rho`` with ``zero mode - moderate part ~ sum A_rho y^(1 - rho)`` as ``y -> 0``.

        For two factors these are the poles of the Mellin transform: the
        moderate exponents themselves and ``+-nu1 +- nu2 - 2k`` from the Bessel
        moment (``nu = s - 1/2``).  For one factor the difference vanishes.
        """
        if len(self.factors) == 1:
            return []
        if len(self.factors) != 2:
            raise PreconditionError("small-y exponents are tabulated for one or two factors")
        (d1, s1), (d2, s2) = self.factors
        n1, n2 = complex(s1) - 0.5, complex(s2) - 0.5
        out = [s1 + s2, 1 + s1 - s2, 1 - s1 + s2, 2 - s1 - s2]
        if d1.psi.conductor != 1 or d2.psi.conductor != 1:
            out = [s1 + s2, 2 - s1 - s2]
        for k in range(4):
            out += [e1 * n1 + e2 * n2 - 2 * k for e1 in (1, -1) for e2 in (1, -1)]
        return [complex(e) for e in out]

    def zero_mode(self, y: float) -> complex:
        """``int_0^1 F(x + iy) dx`` by the trapezoid rule on a grid finer than twice the band limit."""
        specs = [EisensteinSpec.for_tolerance(d, s, y, self.tol) for d, s in self.factors]
        n_band = sum(sp.truncation for sp in specs)
        M = 1 << int(math.ceil(math.log2(2 * n_band + 2)))
        values = np.full(M, complex(self.scale))
        for sp in specs:
            n = np.arange(1, sp.truncation + 1)
            lam = fourier_coefficients(sp.truncation, sp.s, sp.decomposition)
            coef = 2 * math.sqrt(y) * lam * bessel_k(sp.s - 0.5, 2 * math.pi * n * y)
            spectrum = np.zeros(M, dtype=complex)
            spectrum[1 : sp.truncation + 1] = coef
            spectrum[M - sp.truncation :] = (complex(sp.decomposition.chi2(-1)) * coef)[::-1]
            if self.with_constant:
                one = trivial_character(1)
                spectrum[0] = completed(2 * sp.s, one) * y**sp.s + completed(2 * sp.s - 1, one) * y ** (1 - sp.s)
            values *= np.fft.ifft(spectrum) * M
        return complex(np.mean(values))


def eisenstein_product(dec: CharacterDecomposition, w1: complex, w2: complex, tol: float = 1e-14) -> EisensteinProduct:
    """``F(sigma_a z)`` for ``F = E*_{chi1,chi2}(., w1) E*_{conj chi1, conj chi2}(., w2)`` at ``a = 1/q2``.

    By the slash identity at ``1/q2`` (Atkin-Lehner scaling, whose units
    ``chi1(-1)`` cancel in the product) this is
    ``tau(psi) tau(conj psi) / (tau(chi2) tau(conj chi2)) (q2/N)^(w1+w2)``
    times ``E*_{1,psi}(z, w1) E*_{1,conj psi}(z, w2)``.  The Gauss-sum ratio
    equals ``chi2(-1) q1``, so the regularized pairing of this product is
    ``chi2(-1)`` times :func:`triple_product_closed`.  At level one the
    constant terms are included.
    """
    one = trivial_character(1)
    psi = dec.psi
    d1 = CharacterDecomposition(one, psi)
    d2 = CharacterDecomposition(one, psi.conj())
    ratio = gauss_sum(psi) * gauss_sum(psi.conj()) / (gauss_sum(dec.chi2) * gauss_sum(dec.chi2.conj()))
    scale = ratio * np.exp((complex(w1) + complex(w2)) * math.log(dec.q2 / dec.N))
    return EisensteinProduct(((d1, complex(w1)), (d2, complex(w2))), complex(scale), dec.N == 1, tol)


@dataclass(frozen=True)
class RNResult:
    """Value of the direct regularized integral and its pieces."""

    value: complex
    body: complex
    body_error: float
    small_y_tail: complex
    tail_fit_residual: float
    moderate_coefficients: dict = field(default_factory=dict)
    moderate_fit_residual: float = 0.0


def _fit_moderate(F: EisensteinProduct, heights: Sequence[float]):
    ex = F.moderate_exponents
    if not ex:
        return {}, 0.0
    hs = list(heights)[: len(ex) + 1]
    if len(hs) < len(ex) + 1:
        raise PreconditionError(f"need {len(ex) + 1} fitting heights")
    modes = np.array([F.zero_mode(h) for h in hs])
    A = np.array([[h**e for e in ex] for h in hs[:-1]], dtype=complex)
    coef = np.linalg.solve(A, modes[:-1])
    pred = sum(c * hs[-1] ** e for c, e in zip(coef, ex))
    return dict(zip(ex, coef)), float(abs(pred - modes[-1]) / max(abs(modes[-1]), 1e-300))


def theorem_rn_oracle(
    F: EisensteinProduct,
    w: complex,
    *,
    y0: float = 2e-3,
    y_top: float = 6.0,
    tail_window: tuple[float, float] = (3e-4, 2e-3),
    tail_points: int = 16,
    fit_heights: Sequence[float] = (6.0, 7.0, 8.0, 9.0, 10.0),
    tol: float = 1e-9,
    abs_tol: float = 1e-13,
    max_tail_exponent: float = 3.0,
) -> RNResult:
    """``int_0^oo y^(w-2) (a_0(y) - Psi(y)) dy`` by direct numerical integration.

    ``a_0`` is the x-average of ``F`` (:meth:`EisensteinProduct.zero_mode`)
    and ``Psi`` its moderate-growth part, fitted from ``a_0`` at
    ``fit_heights`` (one extra height checks the fit).  The integral over
    ``[y0, y_top]`` is done by tanh-sinh in ``log y``; below ``y0`` the
    integrand is fitted on ``tail_window`` by the power law
    ``sum A_rho y^(w - 1 - rho)`` with the exponents of
    :attr:`EisensteinProduct.small_y_exponents` and integrated exactly.
    The quadrature stops at ``max(tol |I|, abs_tol)``.

    Raises
    ------
    ConvergenceError
        Naming the divergent end: ``y -> 0`` when some ``Re(w - rho) <= 0``,
        ``y -> oo`` when the moderate part does not fit.
    """
    from .special_functions import adaptive_quadrature

    w = complex(w)
    rhos = F.small_y_exponents
    bad = [r for r in rhos if (w - r).real <= 0]
    if bad:
        raise ConvergenceError(f"integral diverges at y -> 0: Re(w - rho) <= 0 for rho={bad[0]}")
    coef, fit_res = _fit_moderate(F, fit_heights)
    if fit_res > 1e-8:
        raise ConvergenceError(f"moderate-growth fit fails at y -> oo (residual {fit_res:.2g})", error=fit_res)

    def remainder(y: float) -> complex:
        return F.zero_mode(y) - sum(c * y**e for e, c in coef.items())

    def integrand(u: np.ndarray) -> np.ndarray:
        ys = np.exp(u)
        return np.array([np.exp((w - 1) * math.log(y)) * remainder(float(y)) for y in ys])

    if abs(remainder(y_top)) * y_top ** (w.real - 1) > tol:
        raise ConvergenceError(f"remainder at y_top={y_top} exceeds tol: integral not settled at y -> oo")
    body = adaptive_quadrature(integrand, math.log(y0), math.log(y_top), tol=tol, abs_tol=abs_tol)

    used = [r for r in rhos if (w - r).real < max_tail_exponent]
    tail, resid = 0j, 0.0
    if used:
        ys = np.geomspace(tail_window[0], tail_window[1], tail_points)
        vals = np.array([remainder(float(y)) * y ** (w - 2) for y in ys])
        A = np.array([[y ** (w - 1 - r) for r in used] for y in ys], dtype=complex)
        # column scaling keeps the least-squares problem balanced
        norms = np.linalg.norm(A, axis=0)
        sol, *_ = np.linalg.lstsq(A / norms, vals, rcond=None)
        sol = sol / norms
        resid = float(np.max(np.abs(A @ sol - vals)) / np.max(np.abs(vals)))
        tail = complex(sum(a * y0 ** (w - r) / (w - r) for a, r in zip(sol, used)))
    return RNResult(
        value=complex(body.value) + tail,
        body=complex(body.value),
        body_error=float(body.error_estimate),
        small_y_tail=tail,
        tail_fit_residual=resid,
        moderate_coefficients=coef,
        moderate_fit_residual=fit_res,
    )


def continuation_diagnostic(p: TripleProductParams, path_step: float = 0.1, points: int = 8) -> dict:
    """Compare the closed form just outside the strip with an extrapolated oracle.

    The smoothed oracle is evaluated at ``w3 + k * path_step`` for
    ``k = 1..points`` (all inside the strip).  The simple pole at
    ``w3 = w1 + w2`` on the strip edge is multiplied out, and the
    interpolating polynomial in ``w3`` is evaluated back at ``w3``.
    Diagnostic only.
    """
    ks = np.arange(1, points + 1)
    pole = p.w1 + p.w2
    vals = []
    for k in ks:
        w3 = p.w3 + k * path_step
        q = TripleProductParams(p.dec, p.w1, p.w2, w3)
        vals.append((w3 - pole) * triple_product_smoothed(q).value)
    # Neville evaluation at k = 0
    table = list(vals)
    xs = [float(k) for k in ks]
    for m in range(1, points):
        for i in range(points - m):
            table[i] = (xs[i + m] * table[i] - xs[i] * table[i + 1]) / (xs[i + m] - xs[i])
    extrapolated = complex(table[0] / (p.w3 - pole))
    closed = triple_product_closed(p)
    return {
        "closed": closed,
        "extrapolated": extrapolated,
        "relative_gap": float(abs(extrapolated - closed) / abs(closed)),
        "inside_strip": p.in_strip(),
    }


def continuous_spectrum_integrand(
    dec: CharacterDecomposition,
    T: float,
    t: float,
    eta_primes: Sequence[float] = (1e-3, 5e-4, 2.5e-4),
) -> dict:
    """Exploratory (non-normative) single-cusp continuous-spectrum integrand.

    Evaluates ``N^(-w1-w2) rho(w1) conj-rho(w2)`` times the closed triple
    product at ``w1 = 1/2 + iT``, ``w2 = 1/2 + eta' - iT``, ``w3 = 1/2 + it``
    and takes ``eta' -> 0`` by Richardson extrapolation (linear in ``eta'``).
    The degenerate limit ``w1 + w2 = 1`` is not covered by the closed form's
    hypotheses, so the value is labelled exploratory.
    """
    from .eisenstein import cusp_normalization

    vals = []
    for e in eta_primes:
        w1, w2, w3 = 0.5 + 1j * T, 0.5 + e - 1j * T, 0.5 + 1j * t
        p = TripleProductParams(dec, w1, w2, w3)
        norm = cusp_normalization(w1, dec, "rho") * cusp_normalization(w2, dec.conj(), "rho")
        vals.append(norm * triple_product_closed(p))
    h = np.asarray(eta_primes, dtype=float)
    coeffs = np.polyfit(h, np.asarray(vals), len(h) - 1)
    limit = complex(coeffs[-1])
    return {
        "value": limit,
        "abs_squared": abs(limit) ** 2,
        "samples": [complex(v) for v in vals],
        "normative": False,
    }
