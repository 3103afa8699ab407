"""Dirichlet L-functions, completed L-functions and the prime-sum side of the
explicit formula.

Values and s-derivatives are carried together as truncated Taylor "jets"
``[f, f', f''/2]`` so that ``L'/L`` and ``L''/L`` come from the same
Euler-Maclaurin evaluation as ``L`` itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from sympy import bernoulli, primerange

from .characters import DirichletCharacter, gauss_sum, prime_divisors, trivial_character
from .errors import PreconditionError, SingularInputError
from .special_functions import digamma, log_gamma, trigamma

__all__ = [
    "hurwitz_zeta",
    "hurwitz_zeta_jet",
    "dirichlet_l",
    "dirichlet_l_jet",
    "log_derivative",
    "CompletedL",
    "completed",
    "completed_parts",
    "xi",
    "lambda_log_derivative",
    "lambda_log_derivative_prime",
    "xi_log_derivative",
    "xi_log_derivative_prime",
    "LaurentExpansion",
    "xi_laurent_at_one",
    "explicit_formula_prime_sum",
    "root_number",
    "ZERO_THRESHOLD",
]

EM_SHIFT = 30
EM_DEPTH = 20
ZERO_THRESHOLD = 1e-10

# B_{2j} / (2j)!
_BERN = np.array(
    [float(bernoulli(2 * j)) / math.factorial(2 * j) for j in range(1, 41)]
)


def _jet_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of Taylor jets along axis 0 (truncated)."""
    n = a.shape[0]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for i in range(n):
        for j in range(n - i):
            out[i + j] += a[i] * b[j]
    return out


def _exp_jet(logbase: np.ndarray, s0: complex, order: int) -> np.ndarray:
    """Jet of ``exp(-s log B)`` at ``s0``: ``B^-s0 [1, -log B, log^2 B / 2]``."""
    v = np.exp(-s0 * logbase)
    coeffs = [v]
    for k in range(1, order + 1):
        coeffs.append(coeffs[-1] * (-logbase) / k)
    return np.array(coeffs)


def _em1_derivs(z: np.ndarray, order: int) -> list[np.ndarray]:
    """``E(z) = (e^z - 1)/z`` and its first ``order`` derivatives, stable near 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1.0
    out = []
    zs = np.where(small, z, 0.0)
    zb = np.where(small, 1.0, z)
    ez = np.exp(zb)
    big = [(ez - 1.0) / zb]
    for m in range(1, order + 1):
        big.append((ez - m * big[-1]) / zb)
    for m in range(order + 1):
        # E^{(m)}(z) = sum_n z^n (n+1)...(n+m) / (n+m+1)!
        term = np.full_like(zs, 1.0 / math.factorial(m + 1))
        acc = term.copy()
        for n in range(1, 30):
            term = term * zs * (n + m) / (n * (n + m + 1))
            acc = acc + term
        out.append(np.where(small, acc, big[m]))
    return out


def hurwitz_zeta_jet(
    s: complex,
    alpha,
    order: int = 0,
    shift: int = EM_SHIFT,
    depth: int = EM_DEPTH,
) -> tuple[np.ndarray, np.ndarray]:
    """Euler-Maclaurin jet of ``zeta(s, alpha)`` at ``s``.

    Returns ``(regular, pole)`` where ``regular`` has shape
    ``(order + 1, len(alpha))`` and ``pole`` is the jet of ``1/(s-1)`` when
    ``|s - 1| < 1`` (zero otherwise), which must be added once per unit
    weight in ``alpha``.  Splitting the pole off near ``s = 1`` lets
    character sums cancel it exactly.
    """
    s = complex(s)
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    if np.any(a <= 0):
        raise PreconditionError("alpha must be positive")
    # fewer direct terms when Re s < 0: the partial sum grows like M^(1-s) and cancels
    M = max(shift if s.real >= 0 else 8, int(math.ceil(abs(s))))
    k = np.arange(M)[:, None]
    logs = np.log(k + a[None, :])
    direct = _exp_jet(logs, s, order).sum(axis=1)

    A = M + a
    LA = np.log(A)
    if s == 1:
        # regular part only; the pole jet is undefined and must cancel in the caller
        inv = np.full(order + 1, np.nan, dtype=complex)
    else:
        inv = np.array([1.0 / (s - 1), -1.0 / (s - 1) ** 2, 1.0 / (s - 1) ** 3][: order + 1], dtype=complex)
    Apow = _exp_jet(LA, s, order)  # A^{-s}
    if abs(s - 1) < 1:
        # A^{1-s}/(s-1) = -log A * E((1-s) log A) + 1/(s-1); the 1/(s-1) part is
        # returned separately so character sums can cancel it exactly
        z = (1.0 - s) * LA
        E = _em1_derivs(z, order)
        tail = np.zeros((order + 1, a.size), dtype=complex)
        dz = -LA
        tail[0] = -LA * E[0]
        if order >= 1:
            tail[1] = -LA * E[1] * dz
        if order >= 2:
            tail[2] = -LA * E[2] * dz**2 / 2
        pole = inv
    else:
        tail = _jet_mul(A * Apow, inv[:, None])
        pole = np.zeros(order + 1, dtype=complex)

    tail += 0.5 * Apow
    # sum_j B_{2j}/(2j)! (s)_{2j-1} A^{-s-2j+1}
    rising = np.zeros((order + 1,), dtype=complex)
    rising[0] = s
    if order >= 1:
        rising[1] = 1.0
    rising = rising[:, None]
    Ainv2 = 1.0 / A**2
    Ak = Apow / A  # A^{-s-1}
    for j in range(1, depth + 1):
        term = _BERN[j - 1] * _jet_mul(rising, Ak)
        tail += term
        # (s)_{2j+1} = (s)_{2j-1} (s + 2j - 1)(s + 2j)
        f1 = np.zeros((order + 1, 1), dtype=complex)
        f1[0] = s + 2 * j - 1
        if order >= 1:
            f1[1] = 1.0
        f2 = f1.copy()
        f2[0] = s + 2 * j
        rising = _jet_mul(_jet_mul(rising, f1), f2)
        Ak = Ak * Ainv2

    return direct + tail, pole


_REFLECT_BELOW = -2.0


def _hurwitz_reflected(s: complex, alpha: float) -> complex:
    # Hurwitz's formula with w = 1 - s, Re w > 3:
    # zeta(1-w, a) = Gamma(w) (2 pi)^-w [e^{-i pi w/2} F(a) + e^{i pi w/2} F(-a)],
    # F(a) = sum_{n>=1} e(n a) n^-w.  Euler-Maclaurin cancels badly here.
    w = 1.0 - s
    frac = alpha - math.floor(alpha)
    if frac == 0.0:
        frac = 1.0
    nterms = int(min(2e6, math.ceil(1e16 ** (1.0 / (w.real - 1.0))))) + 1
    n = np.arange(1, nterms + 1, dtype=float)
    npow = np.exp(-w * np.log(n))
    ang = 2 * math.pi * ((n * frac) % 1.0)
    Fp = np.sum(npow * np.exp(1j * ang))
    Fm = np.sum(npow * np.exp(-1j * ang))
    pre = np.exp(log_gamma(w) - w * math.log(2 * math.pi))
    val = pre * (np.exp(-0.5j * math.pi * w) * Fp + np.exp(0.5j * math.pi * w) * Fm)
    if alpha > 1.0:
        # zeta(s, a) = zeta(s, frac) - sum_{0 <= k < a - frac} (k + frac)^-s
        k = np.arange(int(round(alpha - frac)))
        val -= np.sum(np.exp(-s * np.log(k + frac)))
    return complex(val)


def hurwitz_zeta(s: complex, alpha: float, shift: int = EM_SHIFT, depth: int = EM_DEPTH) -> complex:
    """Hurwitz zeta ``sum_{k>=0} (k + alpha)^-s`` continued to ``s != 1``.

    Euler-Maclaurin for ``Re s >= -2``; further left the sum cancels
    catastrophically in double precision, so Hurwitz's Fourier-series
    formula is used instead.
    """
    s = complex(s)
    if s.real < _REFLECT_BELOW:
        if not alpha > 0:
            raise PreconditionError("alpha must be positive")
        return _hurwitz_reflected(s, float(alpha))
    if s == 1:
        raise SingularInputError("zeta(s, alpha) has a pole at s = 1", factor="zeta")
    reg, pole = hurwitz_zeta_jet(s, alpha, 0, shift, depth)
    return complex(reg[0, 0] + pole[0])


def dirichlet_l_jet(s: complex, chi: DirichletCharacter, order: int = 0) -> np.ndarray:
    """Jet ``[L, L', L''/2]`` of ``L(s, chi)`` (truncated at ``order``)."""
    s = complex(s)
    core = chi.primitive_core()
    f = core.modulus
    a = np.arange(1, f + 1)
    vals = core(a) if f > 1 else np.array([1.0 + 0j])
    units = np.abs(vals) > 0
    if core.is_trivial and s == 1:
        raise SingularInputError("L(s, chi) has a pole at s = 1 for principal chi", factor="zeta")
    reg, pole = hurwitz_zeta_jet(s, a[units] / f, order)
    total = (reg * vals[units]).sum(axis=1)
    if core.is_trivial:
        total = total + pole
    L = _jet_mul(_exp_jet(np.array(math.log(f)), s, order), total)
    for p in prime_divisors(chi.modulus):
        if f % p == 0:
            continue
        cp = core(p)
        # 1 - chi*(p) p^-s
        e = -cp * _exp_jet(np.array(math.log(p)), s, order)
        e[0] += 1.0
        L = _jet_mul(L, e)
    return L


def dirichlet_l(s: complex, chi: DirichletCharacter) -> complex:
    """``L(s, chi)``, imprimitive characters via Euler factors of the primitive core."""
    return complex(dirichlet_l_jet(s, chi, 0)[0])


def _nonzero(L0: complex, what: str, s: complex):
    if abs(L0) < ZERO_THRESHOLD:
        raise SingularInputError(f"{what} is numerically zero at s={s} (|L| = {abs(L0):.2e})", factor=what)


def log_derivative(order: int, s: complex, chi: DirichletCharacter) -> complex:
    """``L'/L`` (order 1) or ``L''/L`` (order 2) at ``s``."""
    if order not in (1, 2):
        raise PreconditionError("order must be 1 or 2")
    jet = dirichlet_l_jet(s, chi, order)
    _nonzero(jet[0], "L(s, chi)", s)
    return complex(jet[order] * math.factorial(order) / jet[0])


@dataclass(frozen=True)
class CompletedL:
    """``Lambda(s, chi) = (q/pi)^(s/2) Gamma((s+kappa)/2) L(s, chi)``.

    ``q`` is the conductor of ``chi``; the trivial character gives ``xi``.
    """

    character: DirichletCharacter = field(default_factory=trivial_character)

    @property
    def kappa(self) -> int:
        return 0 if self.character.is_even else 1

    @property
    def conductor(self) -> int:
        return self.character.conductor

    @property
    def is_xi(self) -> bool:
        return self.character.conductor == 1


def root_number(chi: DirichletCharacter) -> complex:
    """``epsilon`` in ``Lambda(s, chi) = epsilon Lambda(1-s, conj chi)`` for primitive ``chi``."""
    if not chi.is_primitive:
        raise PreconditionError("root number needs a primitive character")
    kappa = 0 if chi.is_even else 1
    return gauss_sum(chi) / ((1j) ** kappa * math.sqrt(chi.modulus))


def _completed_direct_parts(s: complex, chi: DirichletCharacter) -> tuple[complex, complex]:
    q = chi.conductor
    kappa = 0 if chi.is_even else 1
    logv = 0.5 * s * math.log(q / math.pi) + log_gamma((s + kappa) / 2)
    return complex(logv), complex(dirichlet_l(s, chi))


def completed_parts(s: complex, handle: CompletedL | DirichletCharacter) -> tuple[complex, complex]:
    """``(log_factor, value)`` with ``Lambda(s, chi) = exp(log_factor) * value``.

    ``value`` is an L-value (up to the root number when the functional
    equation is used), so vanishing tests on it are scale free while the
    Gamma factor stays in log form.
    """
    chi = handle.character if isinstance(handle, CompletedL) else handle
    s = complex(s)
    if chi.conductor == 1:
        if s == 0 or s == 1:
            raise SingularInputError(f"xi has a pole at s={s.real:g}", factor="xi")
        return _completed_direct_parts(1 - s if s.real < 0.5 else s, chi)
    if s.real < 0 and chi.is_primitive:
        logv, L = _completed_direct_parts(1 - s, chi.conj())
        return logv, complex(root_number(chi) * L)
    return _completed_direct_parts(s, chi)


def completed(s: complex, handle: CompletedL | DirichletCharacter) -> complex:
    """Evaluate the completed L-function.

    For ``Re s < 0`` and primitive characters the functional equation is used,
    which keeps the Gamma factor away from its poles.
    """
    logv, L = completed_parts(s, handle)
    return complex(np.exp(logv) * L)


def xi(s: complex) -> complex:
    """``pi^(-s/2) Gamma(s/2) zeta(s)``."""
    return completed(s, trivial_character(1))


def _lambda_jet_logs(s: complex, chi: DirichletCharacter):
    s = complex(s)
    if chi.conductor == 1 and s.real < 0.5:
        raise PreconditionError("log-derivatives of xi are evaluated for Re s >= 1/2 only")
    jet = dirichlet_l_jet(s, chi, 2)
    _nonzero(jet[0], "L(s, chi)", s)
    l1 = jet[1] / jet[0]
    l2 = 2 * jet[2] / jet[0]
    return s, l1, l2


def lambda_log_derivative(s: complex, chi: DirichletCharacter) -> complex:
    """``Lambda'/Lambda(s, chi) = 1/2 log(q/pi) + 1/2 psi((s+kappa)/2) + L'/L``."""
    s, l1, _ = _lambda_jet_logs(s, chi)
    kappa = 0 if chi.is_even else 1
    return complex(0.5 * math.log(chi.conductor / math.pi) + 0.5 * digamma((s + kappa) / 2) + l1)


def lambda_log_derivative_prime(s: complex, chi: DirichletCharacter) -> complex:
    """``(Lambda'/Lambda)'(s, chi) = 1/4 psi'((s+kappa)/2) + L''/L - (L'/L)^2``."""
    s, l1, l2 = _lambda_jet_logs(s, chi)
    kappa = 0 if chi.is_even else 1
    return complex(0.25 * trigamma((s + kappa) / 2) + l2 - l1 * l1)


def xi_log_derivative(s: complex) -> complex:
    return lambda_log_derivative(s, trivial_character(1))


def xi_log_derivative_prime(s: complex) -> complex:
    return lambda_log_derivative_prime(s, trivial_character(1))


@dataclass(frozen=True)
class LaurentExpansion:
    """Truncated Laurent series ``sum_k c_k (s - center)^k``."""

    center: complex
    coefficients: dict[int, complex]
    max_order: int
    conditioning: float = 0.0

    def __getitem__(self, k: int) -> complex:
        return self.coefficients.get(k, 0.0)

    def __call__(self, s: complex) -> complex:
        h = complex(s) - self.center
        return complex(sum(c * h**k for k, c in self.coefficients.items()))


def xi_laurent_at_one(max_order: int = 2, radius: float = 0.5, points: int = 64) -> LaurentExpansion:
    """Laurent data of ``xi`` at its pole ``s = 1``.

    Samples ``(s-1) xi(s)`` on a circle of ``radius`` around 1 and reads the
    Taylor coefficients off a discrete Fourier transform.  The fit is repeated
    at ``0.8 radius``; the relative spread is stored as ``conditioning`` and a
    spread above ``1e-9`` raises.
    """
    if max_order < 1:
        raise PreconditionError("max_order must be >= 1")

    def coeffs(r):
        theta = 2 * math.pi * np.arange(points) / points
        h = r * np.exp(1j * theta)
        g = np.array([hh * xi(1 + hh) for hh in h])
        c = np.fft.fft(g) / points
        return c[: max_order + 2] / r ** np.arange(max_order + 2)

    c1, c2 = coeffs(radius), coeffs(0.8 * radius)
    spread = float(np.max(np.abs(c1 - c2) / np.maximum(1.0, np.abs(c1))))
    if spread > 1e-9:
        raise SingularInputError(f"xi Laurent fit is ill-conditioned (spread {spread:.2e})")
    coef = {k - 1: complex(c1[k].real) for k in range(max_order + 2)}
    return LaurentExpansion(1.0, coef, max_order, spread)


@lru_cache(maxsize=64)
def _mangoldt_table(X: float, prime_powers: bool):
    ns, lam = [], []
    for p in primerange(2, math.ceil(X)):
        lp = math.log(p)
        pk = p
        while pk < X:
            ns.append(pk)
            lam.append(lp)
            if not prime_powers:
                break
            pk *= p
    order = np.argsort(ns, kind="stable")
    return np.array(ns, dtype=np.int64)[order], np.array(lam)[order]


def explicit_formula_prime_sum(
    s: complex,
    chi: DirichletCharacter,
    X: float,
    *,
    weight: str = "linear",
    prime_powers: bool = False,
) -> complex:
    """``sum_{p < X} chi(p) log p p^-s phi(p/X)`` with ``phi(y) = max(1-y, 0)``.

    ``weight="sharp"`` uses ``phi = 1`` on ``p < X``.  With ``prime_powers``
    the sum runs over all ``n = p^k < X`` weighted by the von Mangoldt function.
    """
    if X < 2:
        raise PreconditionError("X must be at least 2")
    n, lam = _mangoldt_table(float(X), prime_powers)
    if n.size == 0:
        return 0j
    if weight == "linear":
        phi = 1.0 - n / X
    elif weight == "sharp":
        phi = np.ones(n.size)
    else:
        raise PreconditionError(f"unknown weight {weight!r}")
    terms = chi(n) * lam * np.exp(-complex(s) * np.log(n)) * phi
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))
