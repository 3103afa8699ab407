"""The ``I2`` part of the regularized fourth moment along the deformed path
``s1 = s3 = 1/2 + iT``, ``s2 = 1/2 + eta' - iT``, ``s4 = 1/2 + eta - iT``.

``I2 = sum_j Xi_j(eta)`` with ``Xi_1 = F_1 xi(1+eta)^2``,
``Xi_2 = F_2 xi(1-eta)^2``, ``Xi_3 = F_3 xi(1+eta) xi(1-eta)``,
``Xi_4 = F_4 xi(1-eta) xi(1+eta)`` and ``F_j = lim_{eta' -> 0} H_j``.
The double pole at ``eta = 0`` cancels; the constant term is read off
either from numerical derivatives of ``F_j`` at ``0+`` or from a Laurent fit
of the total, and the two must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .characters import (
    CharacterDecomposition,
    DirichletCharacter,
    decompose,
    index_nu,
    level_log_sums,
    level_prime_product,
    primitive_characters,
    trivial_character,
)
from .eisenstein import cusp_normalization, scattering_phi
from .errors import ConvergenceError, PreconditionError, SingularInputError
from .l_functions import (
    LaurentExpansion,
    ZERO_THRESHOLD,
    completed,
    explicit_formula_prime_sum,
    lambda_log_derivative,
    lambda_log_derivative_prime,
    log_derivative,
    xi,
    xi_laurent_at_one,
    xi_log_derivative,
    xi_log_derivative_prime,
)
from .regularized_products import TripleProductParams, triple_product_closed

__all__ = [
    "Tolerances",
    "I2Scenario",
    "XiLaurentData",
    "xi_laurent_data",
    "h_factor",
    "f_factor",
    "f_at_zero",
    "h_zero_limit",
    "DerivativeReport",
    "f_derivative",
    "printed_derivative_formulas",
    "derived_derivative_formulas",
    "xi_assembly",
    "laurent_fit",
    "refine_grid",
    "half_grid_stability",
    "i2_constant_term",
    "i2_asymptotic_report",
    "grh_diagnostics",
    "rederive_i2_terms",
    "DEFAULT_ETA_GRID",
]

DEFAULT_ETA_GRID = (0.1, 0.05, 0.02, 0.01, 0.005, 0.002)


@dataclass(frozen=True)
class Tolerances:
    """Tolerance ladder: algebraic identities, single quadratures, differentiated values."""

    identity: float = 1e-10
    quadrature: float = 1e-8
    derived: float = 1e-5

    def __post_init__(self):
        for name in ("identity", "quadrature", "derived"):
            if not getattr(self, name) > 0:
                raise PreconditionError(f"tolerance {name} must be positive")


@dataclass(frozen=True)
class I2Scenario:
    """One point of the ``I2`` computation.

    Use :meth:`build` to resolve the character and decomposition.
    """

    N: int
    chi: DirichletCharacter
    dec: CharacterDecomposition
    T: float
    eta_grid: tuple[float, ...] = DEFAULT_ETA_GRID
    fd_step: float = 1e-3
    tolerances: Tolerances = field(default_factory=Tolerances)
    level_one: bool = False

    def __post_init__(self):
        if self.N < 1 or (self.N == 1 and not self.level_one):
            raise PreconditionError("I2 needs level N > 1")
        if self.level_one and self.N != 1:
            raise PreconditionError("level_one is only meaningful for N = 1")
        if not self.chi.is_primitive or self.chi.modulus != self.N:
            raise PreconditionError(f"{self.chi!r} is not primitive mod {self.N}")
        if not self.chi.is_even:
            raise PreconditionError("chi must be even")
        if self.dec.N != self.N:
            raise PreconditionError("decomposition level does not match N")
        grid = tuple(float(e) for e in self.eta_grid)
        if any(not 0 < e < 0.25 for e in grid):
            raise PreconditionError("every eta must lie in (0, 1/4)")
        if list(grid) != sorted(grid, reverse=True) or len(set(grid)) != len(grid):
            raise PreconditionError("eta_grid must be strictly decreasing")
        object.__setattr__(self, "eta_grid", grid)
        if not 0 < self.fd_step < 0.25 / 4:
            raise PreconditionError("fd_step must lie in (0, 1/16)")

    @classmethod
    def build(
        cls,
        N: int,
        chi: DirichletCharacter | int | str | None = None,
        q1: int = 1,
        T: float = 1.0,
        **kwargs,
    ) -> I2Scenario:
        """Scenario from a level, a character selector and ``q1``.

        ``chi`` may be a character, a Conrey index, ``"quadratic"`` or ``None``
        (the first primitive even character mod ``N`` in Conrey order).
        """
        if N <= 1 and not kwargs.get("level_one", False):
            raise PreconditionError("I2 needs level N > 1")
        chi = resolve_character(N, chi)
        return cls(N, chi, decompose(chi, q1), float(T), **kwargs)

    @classmethod
    def degenerate(cls, T: float = 1.0, **kwargs) -> I2Scenario:
        """Level-one scenario for checking ``F_j`` specializations.

        ``I2`` itself is not defined here; the assembly functions refuse it.
        """
        one = trivial_character(1)
        return cls(1, one, decompose(one, 1), float(T), level_one=True, **kwargs)

    def require_level(self):
        if self.N <= 1:
            raise PreconditionError("I2 needs level N > 1")

    @property
    def psi(self) -> DirichletCharacter:
        return self.dec.psi

    @property
    def s0(self) -> complex:
        """``1 + 2iT``, the point where the L-data is read."""
        return complex(1.0, 2.0 * self.T)


def resolve_character(N: int, chi) -> DirichletCharacter:
    """Character selector: object, Conrey index, ``"quadratic"`` or ``None``."""
    from .characters import from_conrey, quadratic_character

    if isinstance(chi, DirichletCharacter):
        return chi
    if chi is None:
        cands = primitive_characters(N, "even")
        if not cands:
            raise PreconditionError(f"no primitive even character mod {N}")
        return cands[0]
    if isinstance(chi, str):
        if chi == "quadratic":
            return quadratic_character(N)
        chi = int(chi)
    return from_conrey(N, int(chi))


@dataclass(frozen=True)
class XiLaurentData:
    """``xi(s) = 1/(s-1) + a + b (s-1) + ...``."""

    a: complex
    b: complex

    @classmethod
    def from_expansion(cls, exp: LaurentExpansion) -> XiLaurentData:
        if abs(exp[-1] - 1) > 1e-9:
            raise PreconditionError("expansion does not have residue 1 at s = 1")
        return cls(complex(exp[0]), complex(exp[1]))


_XI_CACHE: dict = {}


def xi_laurent_data() -> XiLaurentData:
    if "data" not in _XI_CACHE:
        _XI_CACHE["data"] = XiLaurentData.from_expansion(xi_laurent_at_one())
    return _XI_CACHE["data"]


# ---------------------------------------------------------------------------
# H_j and F_j


def _lam(s: complex, chi: DirichletCharacter, name: str) -> complex:
    try:
        v = completed(s, chi)
    except SingularInputError as exc:
        raise SingularInputError(f"{name} has a pole at s={s}", factor=name) from exc
    return v


def _den(s: complex, chi: DirichletCharacter, name: str) -> complex:
    v = _lam(s, chi, name)
    if abs(v) < ZERO_THRESHOLD:
        raise SingularInputError(f"{name} vanishes at s={s}", factor=name)
    return v


def _prime_product(N: int, u: complex, v: complex, name: str) -> complex:
    try:
        return level_prime_product(N, u, v)
    except SingularInputError as exc:
        raise SingularInputError(str(exc), factor=name) from exc


def h_factor(j: int, s1: complex, s2: complex, s3: complex, s4: complex, scen: I2Scenario) -> complex:
    """The coefficient ``H_j(s1, s2, s3, s4)`` of the four-term formula for ``I2``."""
    s1, s2, s3, s4 = map(complex, (s1, s2, s3, s4))
    N, psi = scen.N, scen.psi
    psib = psi.conj()
    one = trivial_character(1)
    if j == 1:
        num = _lam(s1 - s2 + s3 + s4, psi, "Lambda(s1-s2+s3+s4, psi)") * _lam(
            -s1 + s2 + s3 + s4, psib, "Lambda(-s1+s2+s3+s4, conj psi)"
        )
        den = (
            _den(2 * s3 + 2 * s4, one, "xi(2s3+2s4)")
            * _den(2 * s1, psi, "Lambda(2s1, psi)")
            * _den(2 * s2, psib, "Lambda(2s2, conj psi)")
        )
        prod = _prime_product(N, s1 + s2 - s3 - s4 - 1, -2 * s3 - 2 * s4, "prod 1/(1-p^(-2s3-2s4))")
        return complex(N ** (1 - s1 - s2 - s3 - s4) * num / den * prod)
    if j == 2:
        num = _lam(s1 - s2 - s3 - s4 + 2, psi, "Lambda(s1-s2-s3-s4+2, psi)") * _lam(
            -s1 + s2 - s3 - s4 + 2, psib, "Lambda(-s1+s2-s3-s4+2, conj psi)"
        )
        den = (
            _den(-2 * s3 - 2 * s4 + 4, one, "xi(-2s3-2s4+4)")
            * _den(2 * s1, psi, "Lambda(2s1, psi)")
            * _den(2 * s2, psib, "Lambda(2s2, conj psi)")
        )
        num2 = _lam(2 - 2 * s3, psib, "Lambda(2-2s3, conj psi)") * _lam(2 - 2 * s4, psi, "Lambda(2-2s4, psi)")
        den2 = _den(2 * s3, psi, "Lambda(2s3, psi)") * _den(2 * s4, psib, "Lambda(2s4, conj psi)")
        prod = _prime_product(N, -s1 - s2 + s3 + s4 - 1, 2 * s3 + 2 * s4 - 4, "prod 1/(1-p^(2s3+2s4-4))")
        return complex(num / den * num2 / den2 * prod / N)
    if j == 3:
        num = _lam(s1 + s2 + s3 - s4, psi, "Lambda(s1+s2+s3-s4, psi)") * _lam(
            s1 + s2 - s3 + s4, psib, "Lambda(s1+s2-s3+s4, conj psi)"
        )
        den = (
            _den(2 * s1 + 2 * s2, one, "xi(2s1+2s2)")
            * _den(2 * s3, psi, "Lambda(2s3, psi)")
            * _den(2 * s4, psib, "Lambda(2s4, conj psi)")
        )
        prod = _prime_product(N, -s1 - s2 + s3 + s4 - 1, -2 * s1 - 2 * s2, "prod 1/(1-p^(-2s1-2s2))")
        return complex(N ** (1 - s1 - s2 - s3 - s4) * num / den * prod)
    if j == 4:
        num = _lam(-s1 - s2 + s3 - s4 + 2, psi, "Lambda(-s1-s2+s3-s4+2, psi)") * _lam(
            -s1 - s2 - s3 + s4 + 2, psib, "Lambda(-s1-s2-s3+s4+2, conj psi)"
        )
        den = (
            _den(-2 * s1 - 2 * s2 + 4, one, "xi(-2s1-2s2+4)")
            * _den(2 * s3, psi, "Lambda(2s3, psi)")
            * _den(2 * s4, psib, "Lambda(2s4, conj psi)")
        )
        num2 = _lam(2 - 2 * s1, psib, "Lambda(2-2s1, conj psi)") * _lam(2 - 2 * s2, psi, "Lambda(2-2s2, psi)")
        den2 = _den(2 * s1, psi, "Lambda(2s1, psi)") * _den(2 * s2, psib, "Lambda(2s2, conj psi)")
        prod = _prime_product(N, s1 + s2 - s3 - s4 - 1, 2 * s1 + 2 * s2 - 4, "prod 1/(1-p^(2s1+2s2-4))")
        return complex(num / den * num2 / den2 * prod / N)
    raise PreconditionError("j must be 1, 2, 3 or 4")


def h_path(eta: float, eta_prime: float, T: float) -> tuple[complex, complex, complex, complex]:
    """``(s1, s2, s3, s4)`` on the deformed path."""
    return (0.5 + 1j * T, 0.5 + eta_prime - 1j * T, 0.5 + 1j * T, 0.5 + eta - 1j * T)


def h_xi_product(j: int, s1, s2, s3, s4) -> complex:
    """The pair of ``xi`` factors multiplying ``H_j``."""
    S = s1 + s2 + s3 + s4
    D = s1 + s2 - s3 - s4
    if j == 1:
        return xi(S - 1) * xi(-D + 1)
    if j == 2:
        return xi(-S + 3) * xi(D + 1)
    if j == 3:
        return xi(S - 1) * xi(D + 1)
    if j == 4:
        return xi(-S + 3) * xi(-D + 1)
    raise PreconditionError("j must be 1, 2, 3 or 4")


def f_factor(j: int, eta: float, scen: I2Scenario, variant: str = "corrected") -> complex:
    """``F_j(eta) = lim_{eta' -> 0} H_j`` from its explicit form.

    ``variant="as_printed"`` uses ``Lambda^2(1+2iT, conj psi)`` in the
    denominator of ``F_2`` as displayed; ``"corrected"`` (default) uses
    ``Lambda^2(1+2iT, psi)``, which is the actual limit of ``H_2``.  The two
    coincide for real ``psi``.  Other ``j`` ignore ``variant``.
    """
    eta = float(eta)
    if variant not in ("corrected", "as_printed"):
        raise PreconditionError(f"unknown variant {variant!r}")
    N, T, psi = scen.N, scen.T, scen.psi
    psib = psi.conj()
    one = trivial_character(1)
    s0 = complex(1, 2 * T)
    if j == 1:
        ratio = abs(_lam(s0 + eta, psi, "Lambda(1+eta+2iT, psi)")) ** 2 / abs(
            _den(s0, psi, "Lambda(1+2iT, psi)")
        ) ** 2
        prod = 1.0 / _prime_product(N, -2 - 2 * eta, -1 - eta, "prod (1+p^(-1-eta))")
        return complex(N ** (-1 - eta) * ratio / _den(2 + 2 * eta, one, "xi(2+2eta)") * prod)
    if j == 2:
        sq = psi if variant == "corrected" else psib
        num = abs(_lam(s0 - eta, psi, "Lambda(1-eta+2iT, psi)")) ** 2 * _lam(
            s0 - 2 * eta, psi, "Lambda(1-2eta+2iT, psi)"
        )
        den = (
            _den(2 - 2 * eta, one, "xi(2-2eta)")
            * _den(s0, sq, "Lambda(1+2iT, psi)") ** 2
            * _den(np.conj(s0) + 2 * eta, psib, "Lambda(1+2eta-2iT, conj psi)")
        )
        prod = 1.0 / _prime_product(N, -2 + 2 * eta, -1 + eta, "prod (1+p^(-1+eta))")
        return complex(num / den * prod / N)
    if j in (3, 4):
        num = _lam(s0 - eta, psi, "Lambda(1-eta+2iT, psi)") * _lam(
            np.conj(s0) + eta, psib, "Lambda(1+eta-2iT, conj psi)"
        )
        den = (
            xi(2.0)
            * _den(s0, psi, "Lambda(1+2iT, psi)")
            * _den(np.conj(s0) + 2 * eta, psib, "Lambda(1+2eta-2iT, conj psi)")
        )
        if j == 3:
            prod = _prime_product(N, -1 + eta, -2.0, "prod 1/(1-p^-2)")
            return complex(N ** (-1 - eta) * num / den * prod)
        prod = _prime_product(N, -1 - eta, -2.0, "prod 1/(1-p^-2)")
        return complex(num / den * prod / N)
    raise PreconditionError("j must be 1, 2, 3 or 4")


@dataclass(frozen=True)
class ZeroValueReport:
    value: float
    extrapolated: complex
    residual: float
    flagged: bool


def _extrapolate_to_zero(hs: Sequence[float], vals: Sequence[complex]) -> tuple[complex, float]:
    """Polynomial extrapolation to 0 (Neville) with the last-correction error estimate."""
    xs = [float(h) for h in hs]
    table = [complex(v) for v in vals]
    est = table[0]
    err = math.inf
    for m in range(1, len(xs)):
        for i in range(len(xs) - m):
            table[i] = (xs[i + m] * table[i] - xs[i] * table[i + 1]) / (xs[i + m] - xs[i])
        err = abs(table[0] - est)
        est = table[0]
    return est, err


def f_at_zero(j: int, scen: I2Scenario, variant: str = "corrected") -> ZeroValueReport:
    """``F_j(0) = 1/(xi(2) nu(N))`` with the extrapolated ``lim_{eta -> 0+} F_j`` for comparison."""
    if j not in (1, 2, 3, 4):
        raise PreconditionError("j must be 1, 2, 3 or 4")
    value = 1.0 / (xi(2.0).real * index_nu(scen.N))
    hs = [scen.fd_step * k for k in (1, 2, 3, 4, 5, 6)]
    est, _ = _extrapolate_to_zero(hs, [f_factor(j, h, scen, variant) for h in hs])
    res = float(abs(est - value) / value)
    return ZeroValueReport(value, est, res, res > scen.tolerances.quadrature)


def h_limit(j: int, eta: float, scen: I2Scenario, eta_primes=(1e-3, 1e-4, 1e-5)) -> tuple[complex, float]:
    """``lim_{eta' -> 0} H_j`` on the path by Richardson extrapolation."""
    vals = [h_factor(j, *h_path(eta, e, scen.T), scen) for e in eta_primes]
    return _extrapolate_to_zero(eta_primes, vals)


def h_zero_limit(j: int, scen: I2Scenario) -> tuple[complex, float]:
    """``F_j(0+)`` through ``H_j`` only: ``eta' -> 0`` at each ``eta``, then ``eta -> 0``."""
    hs = [scen.fd_step * k for k in (1, 2, 3, 4, 5, 6)]
    return _extrapolate_to_zero(hs, [h_limit(j, h, scen)[0] for h in hs])


# ---------------------------------------------------------------------------
# Derivatives


@dataclass(frozen=True)
class DerivativeReport:
    """Numeric ``F_j^(order)(0+)`` and the displayed closed forms it is compared with."""

    j: int
    order: int
    value: complex
    error_estimate: float
    printed_value: complex
    printed_relative_deviation: float
    derived_value: complex
    derived_relative_deviation: float
    terms: dict = field(default_factory=dict)


def _stencil_derivative(f, h: float, order: int) -> complex:
    """Derivative at 0 of the cubic through ``f(h), f(2h), f(3h), f(4h)``."""
    xs = h * np.arange(1, 5)
    ys = np.array([f(x) for x in xs])
    # Lagrange basis derivatives at 0 for the nodes h, 2h, 3h, 4h
    V = np.vander(xs / h, 4, increasing=True)
    c = np.linalg.solve(V, ys)  # coefficients in powers of (x/h)
    if order == 1:
        return complex(c[1] / h)
    if order == 2:
        return complex(2 * c[2] / h**2)
    raise PreconditionError("order must be 1 or 2")


def _l_data(scen: I2Scenario) -> dict:
    s0, psi = scen.s0, scen.psi
    G = lambda_log_derivative(s0, psi)
    Gp = lambda_log_derivative_prime(s0, psi)
    return {
        "G": G,
        "Gp": Gp,
        "xi_ld": xi_log_derivative(2.0).real,
        "xi_ldp": xi_log_derivative_prime(2.0).real,
        "logN": math.log(scen.N),
        "S_plus": level_log_sums(scen.N, "log_p_over_p_plus_1"),
        "S_minus": level_log_sums(scen.N, "log_p_over_p_minus_1"),
        "Q_plus": level_log_sums(scen.N, "p_log2_over_p_plus_1_sq"),
        "Q_minus": level_log_sums(scen.N, "p_log2_over_p_minus_1_sq"),
    }


def printed_derivative_formulas(j: int, scen: I2Scenario, d: dict | None = None) -> dict:
    """The displayed ``F_j'(0)/F_j(0)`` and ``F_j''(0)/F_j(0)`` as printed.

    Returns the first-derivative bracket ``B1``, the second bracket ``B2`` and
    ``F''/F = B1^2 + B2``; for ``j = 2`` the alternative reading of ``B2``
    with the imaginary-part term taken as a real part is included.
    """
    d = d or _l_data(scen)
    G, Gp, L, xl, xlp = d["G"], d["Gp"], d["logN"], d["xi_ld"], d["xi_ldp"]
    if j == 1:
        B1 = -L + 2 * G.real - 2 * xl + d["S_plus"]
        B2 = L**2 + 2 * Gp.real - 4 * xlp - d["Q_plus"]
    elif j == 2:
        B1 = -6 * G.real + 2 * xl - d["S_plus"]
        B2 = 2 * Gp + 6 * Gp.imag - 4 * xlp - d["Q_plus"]
        alt = 2 * Gp.real + 6 * Gp.real - 4 * xlp - d["Q_plus"]
        return {"B1": B1, "B2": B2, "second": B1**2 + B2, "second_real_reading": B1**2 + alt}
    elif j == 3:
        B1 = -L - 2 * G.real - d["S_plus"]
        B1b = -L - 2 * G.real - d["S_minus"]
        B2 = L**2 + 2 * Gp.real - 4 * np.conj(Gp) + d["Q_minus"]
        return {"B1": B1, "B2": B2, "second": B1b**2 + B2}
    elif j == 4:
        B1 = -2 * G.real + d["S_plus"]
        B1b = -2 * G.real + d["S_minus"]
        B2 = 2 * Gp.real - 4 * np.conj(Gp) + d["Q_minus"]
        return {"B1": B1, "B2": B2, "second": B1b**2 + B2}
    else:
        raise PreconditionError("j must be 1, 2, 3 or 4")
    return {"B1": B1, "B2": B2, "second": B1**2 + B2}


def derived_derivative_formulas(j: int, scen: I2Scenario, d: dict | None = None) -> dict:
    """``(log F_j)'(0)`` and ``(log F_j)''(0)`` from differentiating the explicit ``F_j``.

    ``G = Lambda'/Lambda(1+2iT, psi)``, ``G' = (Lambda'/Lambda)'(1+2iT, psi)``;
    ``S_pm = sum log p/(p pm 1)``, ``Q_pm = sum p log^2 p/(p pm 1)^2``.
    """
    d = d or _l_data(scen)
    G, Gp, L, xl, xlp = d["G"], d["Gp"], d["logN"], d["xi_ld"], d["xi_ldp"]
    if j == 1:
        D1 = -L + 2 * G.real - 2 * xl + d["S_plus"]
        D2 = 2 * Gp.real - 4 * xlp - d["Q_plus"]
    elif j == 2:
        D1 = -6 * G.real + 2 * xl - d["S_plus"]
        D2 = 2 * Gp.real + 8j * Gp.imag - 4 * xlp - d["Q_plus"]
    elif j == 3:
        D1 = -L - 2 * G.real - d["S_minus"]
        D2 = -2 * Gp.real + 4j * Gp.imag - d["Q_minus"]
    elif j == 4:
        D1 = -2 * G.real + d["S_minus"]
        D2 = -2 * Gp.real + 4j * Gp.imag - d["Q_minus"]
    else:
        raise PreconditionError("j must be 1, 2, 3 or 4")
    return {"B1": D1, "B2": D2, "second": D1**2 + D2}


def f_derivative(j: int, order: int, scen: I2Scenario, variant: str = "corrected") -> DerivativeReport:
    """Numeric ``F_j'(0+)`` or ``F_j''(0+)`` with the closed-form audit.

    One-sided cubic stencil at ``eta in {h, 2h, 3h, 4h}`` (``h = fd_step``),
    Richardson-combined across ``h`` and ``h/2`` (stencil error is ``O(h^3)``
    for ``order=1`` and ``O(h^2)`` for ``order=2``).  The error estimate is
    the change when the same combination is taken across ``h/2`` and ``h/4``.

    Raises
    ------
    ConvergenceError
        If the Richardson correction exceeds the ``derived`` tolerance
        relative to the value.
    """
    if order not in (1, 2):
        raise PreconditionError("order must be 1 or 2")
    f = lambda e: f_factor(j, e, scen, variant)
    h = scen.fd_step
    # Richardson across h and h/2; the same step on (h/2, h/4) estimates its error
    p = 3 if order == 1 else 2
    d = [_stencil_derivative(f, h / 2**k, order) for k in range(3)]
    q = 2**p
    value = (q * d[1] - d[0]) / (q - 1)
    err = abs((q * d[2] - d[1]) / (q - 1) - value)
    F0 = 1.0 / (xi(2.0).real * index_nu(scen.N))
    scale = max(abs(value), F0)
    if err > scen.tolerances.derived * scale:
        raise ConvergenceError(
            f"F_{j} derivative of order {order}: Richardson correction {err:.3g} too large", estimate=value, error=err
        )
    data = _l_data(scen)
    printed = printed_derivative_formulas(j, scen, data)
    derived = derived_derivative_formulas(j, scen, data)
    key = "B1" if order == 1 else "second"
    pv = F0 * printed[key]
    dv = F0 * derived[key]
    terms = {"printed": printed, "derived": derived}
    if j == 2 and order == 2:
        terms["printed_real_reading_value"] = F0 * printed["second_real_reading"]
    return DerivativeReport(
        j=j,
        order=order,
        value=complex(value),
        error_estimate=float(err),
        printed_value=complex(pv),
        printed_relative_deviation=float(abs(value - pv) / abs(value)),
        derived_value=complex(dv),
        derived_relative_deviation=float(abs(value - dv) / abs(value)),
        terms=terms,
    )


# ---------------------------------------------------------------------------
# Assembly


@dataclass(frozen=True)
class XiAssembly:
    eta: float
    parts: tuple[complex, complex, complex, complex]

    @property
    def total(self) -> complex:
        return complex(sum(self.parts))


def xi_assembly(eta: float, scen: I2Scenario, xi_data: XiLaurentData | None = None, variant: str = "corrected") -> XiAssembly:
    """``(Xi_1, ..., Xi_4)`` at ``eta``; ``xi_data`` is accepted for interface symmetry and unused."""
    scen.require_level()
    if not 0 < eta < 0.25:
        raise PreconditionError("eta must lie in (0, 1/4)")
    xp, xm = xi(1 + eta), xi(1 - eta)
    F = [f_factor(j, eta, scen, variant) for j in (1, 2, 3, 4)]
    return XiAssembly(float(eta), (F[0] * xp * xp, F[1] * xm * xm, F[2] * xp * xm, F[3] * xm * xp))


@dataclass(frozen=True)
class LaurentFit:
    coefficients: dict
    conditioning: float
    residual: float
    expansion: LaurentExpansion

    def __getitem__(self, k):
        return self.coefficients[k]


def refine_grid(grid: Sequence[float], per_interval: int) -> tuple[float, ...]:
    """``grid`` with ``per_interval - 1`` geometric points inserted in every gap."""
    g = [float(e) for e in grid]
    out = []
    for hi, lo in zip(g[:-1], g[1:]):
        out.extend(hi * (lo / hi) ** (k / per_interval) for k in range(per_interval))
    out.append(g[-1])
    return tuple(out)


def laurent_fit(
    scen: I2Scenario,
    grid: Sequence[float] | None = None,
    degree: int = 6,
    per_interval: int = 4,
    variant: str = "corrected",
) -> LaurentFit:
    """Least-squares fit of ``sum_{k=-2}^{degree} c_k eta^k`` to the total ``Xi`` sum.

    The anchor grid (default ``scen.eta_grid``) is refined geometrically to
    ``per_interval`` samples per gap; on six anchors the default gives 21
    samples for 9 unknowns.  ``conditioning`` is the 2-norm condition number of
    the column-scaled design matrix; above ``1e12`` raises.
    """
    anchors = tuple(grid if grid is not None else scen.eta_grid)
    if len(anchors) < 3:
        raise PreconditionError("need at least three anchor points")
    if max(anchors) / min(anchors) < 10 * (1 - 1e-12):
        raise PreconditionError("eta grid must span one decade")
    etas = np.asarray(refine_grid(anchors, per_interval))
    powers = np.arange(-2, degree + 1)
    if etas.size < max(5, powers.size):
        raise PreconditionError(f"{etas.size} samples cannot determine {powers.size} coefficients")
    totals = np.array([xi_assembly(e, scen, variant=variant).total for e in etas])
    A = etas[:, None] ** powers[None, :]
    norms = np.linalg.norm(A, axis=0)
    As = A / norms
    cond = float(np.linalg.cond(As))
    if cond > 1e12:
        raise ConvergenceError(f"Laurent fit ill-conditioned (cond {cond:.2g})")
    sol, *_ = np.linalg.lstsq(As, totals, rcond=None)
    sol = sol / norms
    resid = float(np.max(np.abs(A @ sol - totals)))
    coef = {int(k): complex(c) for k, c in zip(powers, sol)}
    return LaurentFit(coef, cond, resid, LaurentExpansion(0.0, coef, int(degree), cond))


def half_grid_stability(scen: I2Scenario, **kwargs) -> float:
    """Relative change of ``c_0`` when every other anchor is dropped (sample density kept)."""
    per = kwargs.pop("per_interval", 4)
    full = laurent_fit(scen, per_interval=per, **kwargs)
    half = laurent_fit(scen, grid=scen.eta_grid[::2], per_interval=2 * per, **kwargs)
    return float(abs(half[0] - full[0]) / abs(full[0]))


@dataclass(frozen=True)
class ConstantTerm:
    value: complex
    error_estimate: float
    derivatives: dict


def i2_constant_term(scen: I2Scenario, xi_data: XiLaurentData | None = None, variant: str = "corrected") -> ConstantTerm:
    """``1/2 (F_1'' + F_2'' - F_3'' - F_4'') + 2a (F_1' - F_2') + 4 a^2 F_1(0)`` from numeric derivatives."""
    scen.require_level()
    xd = xi_data or xi_laurent_data()
    a = xd.a
    d1 = {j: f_derivative(j, 1, scen, variant) for j in (1, 2)}
    d2 = {j: f_derivative(j, 2, scen, variant) for j in (1, 2, 3, 4)}
    F0 = 1.0 / (xi(2.0).real * index_nu(scen.N))
    value = 0.5 * (d2[1].value + d2[2].value - d2[3].value - d2[4].value)
    value += 2 * a * (d1[1].value - d1[2].value) + 4 * a * a * F0
    err = 0.5 * sum(r.error_estimate for r in d2.values()) + 2 * abs(a) * sum(r.error_estimate for r in d1.values())
    return ConstantTerm(complex(value), float(err), {"first": d1, "second": d2})


def i2_asymptotic_report(scen: I2Scenario, constant: ConstantTerm | None = None) -> dict:
    """Compare ``xi(2) nu(N) I2`` with ``4 log^2 N + 4 Re L''/L(1+2iT, psi)``.

    ``envelope = log N |L'/L| + |L'/L|^2 + log log N |Re Lambda'/Lambda|`` at
    ``1 + 2iT``.
    """
    scen.require_level()
    c = constant or i2_constant_term(scen)
    N, s0, psi = scen.N, scen.s0, scen.psi
    norm = xi(2.0).real * index_nu(N)
    exact = norm * c.value
    L = math.log(N)
    main = 4 * L * L
    l1 = log_derivative(1, s0, psi)
    l2 = log_derivative(2, s0, psi)
    lterm = 4 * l2.real
    G = lambda_log_derivative(s0, psi)
    remainder = exact - main - lterm
    envelope = L * abs(l1) + abs(l1) ** 2 + math.log(L) * abs(G.real) if L > 1 else float("nan")
    return {
        "N": N,
        "T": scen.T,
        "character": scen.chi.label(),
        "q1": scen.dec.q1,
        "i2_constant": complex(c.value),
        "i2_error_estimate": c.error_estimate,
        "exact": complex(exact),
        "main_term": main,
        "l_term": lterm,
        "remainder": complex(remainder),
        "envelope": envelope,
        "ratio": abs(remainder) / envelope,
        "leading_ratio": float((index_nu(N) * c.value).real / ((24 / math.pi) * L * L)),
    }


def grh_diagnostics(scen: I2Scenario, X: float, character: DirichletCharacter | None = None, s: complex | None = None) -> dict:
    """Size ratios for ``L'/L`` and ``L''/L`` at ``1 + 2iT`` and the prime-sum residual.

    ``residual_primes`` uses the prime sum as displayed (primes only);
    ``residual`` includes prime powers, which is the sum whose difference
    from ``-L'/L`` is the zero sum plus ``O(X^-1)``.
    """
    chi = character or scen.psi
    s = complex(s) if s is not None else scen.s0
    if X < 2:
        raise PreconditionError("X must be at least 2")
    ll = math.log(math.log(scen.N))
    l1 = log_derivative(1, s, chi)
    l2 = log_derivative(2, s, chi)
    ps = explicit_formula_prime_sum(s, chi, X)
    pp = explicit_formula_prime_sum(s, chi, X, prime_powers=True)
    return {
        "N": scen.N,
        "X": X,
        "L1": complex(l1),
        "L2": complex(l2),
        "ratio_L1": abs(l1) / ll,
        "ratio_L2": abs(l2) / ll**3.5,
        "prime_sum": complex(ps),
        "residual_primes": abs(l1 + ps),
        "residual": abs(l1 + pp),
        "zero_sum_proxy": complex(-l1 - pp),
    }


# ---------------------------------------------------------------------------
# Re-derivation from the triple product


def _pairing(dec: CharacterDecomposition, w1, w2, w3) -> complex:
    """``<E*_{dec}(w1) E*_{conj dec}(w2), E_{1/q2}(., conj w3)>``.

    The slash identities give the factor ``tau(psi) tau(conj psi) / (tau(chi2) tau(conj chi2))
    = chi2(-1) q1`` where the closed form has ``q1``.
    """
    return complex(dec.chi2(-1)) * triple_product_closed(TripleProductParams(dec, w1, w2, w3))


def rederive_i2_terms(s1, s2, s3, s4, scen: I2Scenario) -> dict:
    """The four pieces of ``I2`` recomputed from the triple product and compared with ``H_j xi xi``.

    ``I2 = <E E, calE_2> + <calE_1, E E>`` with
    ``calE_2 = E_a(., conj(s3+s4)) + conj(phi(conj s3, conj chi) phi(conj s4, chi)) E_a*(., conj(2-s3-s4))``
    (and the mirror image for ``calE_1``); pairings at ``a*`` use the
    functional equation and the slash identity at ``1/q1``.
    """
    s1, s2, s3, s4 = map(complex, (s1, s2, s3, s4))
    dec = scen.dec
    decb = dec.conj()
    c = lambda s, d: cusp_normalization(s, d, "rho")
    phi = scattering_phi
    pieces = {}
    # <E(s1,chi) E(s2,conj chi), E_a(conj(s3+s4))>
    pieces[1] = c(s1, dec) * c(s2, decb) * _pairing(dec, s1, s2, s3 + s4)
    # the a* part of calE_2
    w3 = 2 - s3 - s4
    coef = np.conj(phi(np.conj(s3), decb) * phi(np.conj(s4), dec))
    pieces[2] = coef * c(s1, dec) * c(s2, decb) * _pairing(dec.swapped(), 1 - s1, 1 - s2, w3)
    # <E_a(s1+s2), E(conj s3, conj chi) E(conj s4, chi)>
    B = lambda a3, a4, w: c(a3, decb) * c(a4, dec) * _pairing(decb, a3, a4, w)
    s3b, s4b = np.conj(s3), np.conj(s4)
    pieces[3] = np.conj(B(s3b, s4b, np.conj(s1 + s2)))
    B_star = lambda a3, a4, w: c(a3, decb) * c(a4, dec) * _pairing(decb.swapped(), 1 - a3, 1 - a4, w)
    pieces[4] = phi(s1, dec) * phi(s2, decb) * np.conj(B_star(s3b, s4b, np.conj(2 - s1 - s2)))
    formula = {j: h_factor(j, s1, s2, s3, s4, scen) * h_xi_product(j, s1, s2, s3, s4) for j in (1, 2, 3, 4)}
    total_r = sum(pieces.values())
    total_f = sum(formula.values())
    return {
        "rederived": {j: complex(v) for j, v in pieces.items()},
        "formula": {j: complex(v) for j, v in formula.items()},
        "term_relative_gaps": {j: float(abs(pieces[j] - formula[j]) / abs(formula[j])) for j in pieces},
        "total_rederived": complex(total_r),
        "total_formula": complex(total_f),
        "relative_gap": float(abs(total_r - total_f) / abs(total_f)),
    }
