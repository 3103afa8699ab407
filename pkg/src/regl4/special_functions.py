"""Complex special-function kernels.

Everything here works in double precision and accepts complex input.  The
log-Gamma family uses upward recurrence into the Stirling region, then the
asymptotic series; ``bessel_k`` integrates the ``cosh`` representation of
``K_nu`` with the trapezoid rule on a contour shifted to avoid cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from sympy import bernoulli

from .errors import ConvergenceError, PreconditionError, SingularInputError

__all__ = [
    "log_gamma",
    "gamma",
    "digamma",
    "trigamma",
    "bessel_k",
    "bessel_moment",
    "bessel_moment_arguments",
    "QuadratureResult",
    "adaptive_quadrature",
]

_STIRLING_RE = 15.0
_NTERMS = 12
_B2K = np.array([float(bernoulli(2 * k)) for k in range(1, _NTERMS + 1)])
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_poles(s: np.ndarray):
    bad = (s.imag == 0) & (s.real <= 0) & (s.real == np.round(s.real))
    if np.any(bad):
        raise SingularInputError(f"Gamma has a pole at s={s[bad][0].real:g}", factor="Gamma")


def _shift(s: np.ndarray):
    """Number of unit steps that moves ``Re s`` to at least the Stirling threshold."""
    return np.maximum(0, np.ceil(_STIRLING_RE - s.real)).astype(int)


def _as_complex(s):
    arr = np.asarray(s, dtype=complex)
    return arr, arr.ndim == 0


def log_gamma(s):
    """Principal branch of ``log Gamma(s)``.

    The branch is the one continuous on ``C`` minus the negative real axis
    and real on the positive axis (the same as ``scipy.special.loggamma``).

    Parameters
    ----------
    s : complex or array_like
        Evaluation point(s); nonpositive integers raise ``SingularInputError``.
    """
    s, scalar = _as_complex(s)
    s = np.atleast_1d(s)
    _check_poles(s)
    n = _shift(s)
    z = s + n
    acc = np.zeros_like(s)
    for k in range(int(n.max(initial=0))):
        m = k < n
        acc[m] += np.log(s[m] + k)
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    series = np.zeros_like(z)
    p = zinv
    for k in range(1, _NTERMS + 1):
        series += _B2K[k - 1] / (2 * k * (2 * k - 1)) * p
        p = p * zinv2
    out = (z - 0.5) * np.log(z) - z + _LOG_SQRT_2PI + series - acc
    return complex(out[0]) if scalar else out


def gamma(s):
    """``Gamma(s)`` as ``exp(log_gamma(s))``."""
    out = np.exp(log_gamma(s))
    return complex(out) if np.ndim(out) == 0 else out


def digamma(s):
    """``Gamma'/Gamma(s)``."""
    s, scalar = _as_complex(s)
    s = np.atleast_1d(s)
    _check_poles(s)
    n = _shift(s)
    z = s + n
    acc = np.zeros_like(s)
    for k in range(int(n.max(initial=0))):
        m = k < n
        acc[m] += 1.0 / (s[m] + k)
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    series = np.zeros_like(z)
    p = zinv2
    for k in range(1, _NTERMS + 1):
        series += _B2K[k - 1] / (2 * k) * p
        p = p * zinv2
    out = np.log(z) - 0.5 * zinv - series - acc
    return complex(out[0]) if scalar else out


def trigamma(s):
    """Derivative of the digamma function."""
    s, scalar = _as_complex(s)
    s = np.atleast_1d(s)
    _check_poles(s)
    n = _shift(s)
    z = s + n
    acc = np.zeros_like(s)
    for k in range(int(n.max(initial=0))):
        m = k < n
        acc[m] += 1.0 / (s[m] + k) ** 2
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    series = np.zeros_like(z)
    p = zinv2 * zinv
    for k in range(1, _NTERMS + 1):
        series += _B2K[k - 1] * p
        p = p * zinv2
    out = zinv + 0.5 * zinv2 + series + acc
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Bessel K


def _contour_angle(nu: complex, x: np.ndarray) -> np.ndarray:
    # Tilt the contour through the saddle of x cosh t - nu t for oscillatory
    # orders so the integrand's modulus tracks the size of K instead of
    # cancelling: Im t = arcsin(b/x) when b < x, close to pi/2 otherwise.
    b = abs(nu.imag)
    if b <= 6.0 / math.pi:
        return np.zeros_like(x)
    cap = math.pi / 2 - 3.0 / b
    return math.copysign(1.0, nu.imag) * np.minimum(cap, np.arcsin(np.minimum(1.0, b / x)))


def _cutoff(xc: np.ndarray, r: float, drop: float = 42.0) -> np.ndarray:
    """Smallest ``u`` past the peak of ``-xc cosh u + r u`` where it fell by ``drop``."""
    up = np.arcsinh(r / xc)
    peak = -xc * np.cosh(up) + r * up
    lo, hi = up, up + 1.0
    f = lambda u: -xc * np.cosh(u) + r * u - (peak - drop)
    while np.any(f(hi) > 0):
        hi = np.where(f(hi) > 0, hi + (hi - up) + 1.0, hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        pos = f(mid) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    return hi


def bessel_k(nu, x, tol: float = 1e-13, max_halvings: int = 12):
    """Modified Bessel function of the second kind ``K_nu(x)``.

    Uses ``K_nu(x) = 1/2 int_R exp(-x cosh t + nu t) dt`` on the line
    ``t = u + i alpha`` and the trapezoid rule in ``u``, halving the step
    until two successive sums agree to ``tol`` (relative).

    Parameters
    ----------
    nu : complex
        Order.  ``K_nu = K_{-nu}``, so only ``|Re nu|`` matters for the cutoff.
    x : float or ndarray
        Positive argument(s).
    tol : float
        Relative tolerance on the trapezoid ladder.

    Returns
    -------
    complex or ndarray of complex
    """
    nu = complex(nu)
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(~(xa > 0)):
        raise PreconditionError("bessel_k requires x > 0")
    alpha = _contour_angle(nu, xa)
    umax = _cutoff(xa * np.cos(alpha), abs(nu.real))
    # group arguments with similar cutoffs so small x do not inflate the grid for all
    key = np.floor(np.log2(umax + 1.0)).astype(int)
    out = np.empty(xa.size, dtype=complex)
    for k in np.unique(key):
        sel = key == k
        out[sel] = _bessel_k_group(nu, xa[sel], umax[sel], alpha[sel], tol, max_halvings)
    return complex(out[0]) if scalar else out


def _bessel_k_group(nu: complex, xa: np.ndarray, umax: np.ndarray, alpha: np.ndarray, tol: float, max_halvings: int):
    ca, sa = np.cos(alpha), np.sin(alpha)
    phase = np.exp(1j * nu * alpha)

    def integrand(u):
        # u has shape (npts, nx); pair +u and -u
        ch, sh = np.cosh(u), np.sinh(u)
        base = -xa * (ch * ca)
        osc = -xa * (sh * sa)
        ep = np.exp(base + nu.real * u + 1j * (osc + nu.imag * u))
        em = np.exp(base - nu.real * u + 1j * (-osc - nu.imag * u))
        return ep + em

    h = 0.5
    n = np.ceil(umax / h).astype(int)
    nmax = int(n.max())
    u = np.arange(1, nmax + 1)[:, None] * h * np.ones((1, xa.size))
    g = integrand(u)
    g[u > umax + h] = 0.0
    g0 = 2.0 * np.exp(-xa * ca)
    total = g0 / 2 + g.sum(axis=0)
    mag = np.abs(g0) / 2 + np.abs(g).sum(axis=0)
    prev = h * total
    for _ in range(max_halvings):
        h /= 2
        nmax = int(np.ceil(umax.max() / h))
        u = (2 * np.arange(nmax // 2 + 1) + 1)[:, None] * h * np.ones((1, xa.size))
        g = integrand(u)
        g[u > umax + h] = 0.0
        total = total + g.sum(axis=0)
        mag = mag + np.abs(g).sum(axis=0)
        cur = h * total
        err = np.abs(cur - prev)
        # cancellation leaves a rounding floor of a few ulps of sum |g|
        floor = 64 * np.finfo(float).eps * h * mag
        if np.all(err <= np.maximum(tol * np.abs(cur), floor)):
            return 0.5 * phase * cur
        prev = cur
    bad = int(np.argmax(err / np.abs(cur)))
    raise ConvergenceError(
        f"bessel_k did not converge at nu={nu}, x={xa[bad]}",
        estimate=0.5 * phase * cur[bad],
        error=float(err[bad] / abs(cur[bad])),
    )


def bessel_moment_arguments(w1, w2, w3):
    """The four Gamma arguments ``(w3 + e1 (w1-1/2) + e2 (w2-1/2)) / 2``."""
    n1, n2 = complex(w1) - 0.5, complex(w2) - 0.5
    w3 = complex(w3)
    return {
        (e1, e2): (w3 + e1 * n1 + e2 * n2) / 2
        for e1 in (1, -1)
        for e2 in (1, -1)
    }


def bessel_moment(w1, w2, w3) -> complex:
    """``int_0^oo y^(w3-1) K_{w1-1/2}(2 pi y) K_{w2-1/2}(2 pi y) dy`` in closed form.

    Equals ``pi^-w3 / (8 Gamma(w3)) prod Gamma((w3 +- (w1-1/2) +- (w2-1/2))/2)``.
    The integral converges only when all four Gamma arguments have positive
    real part; otherwise ``PreconditionError`` names the offending signs.
    """
    args = bessel_moment_arguments(w1, w2, w3)
    for (e1, e2), a in args.items():
        if a.real <= 0:
            sgn = lambda e: "+" if e > 0 else "-"
            raise PreconditionError(
                f"outside the convergence strip: Re(w3 {sgn(e1)} (w1-1/2) {sgn(e2)} (w2-1/2)) <= 0"
            )
    w3 = complex(w3)
    logv = -w3 * math.log(math.pi) - math.log(8.0) - log_gamma(w3)
    logv += sum(log_gamma(a) for a in args.values())
    return complex(np.exp(logv))


# ---------------------------------------------------------------------------
# Quadrature


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of :func:`adaptive_quadrature`."""

    value: complex
    error_estimate: float
    evaluations: int


Decay = Literal["exp", "power"]


def _nodes_finite(a: float, b: float, t: np.ndarray):
    u = 0.5 * math.pi * np.sinh(t)
    width = b - a
    with np.errstate(over="ignore"):
        left = width / (1.0 + np.exp(-2.0 * u))  # distance from a
        right = width / (1.0 + np.exp(2.0 * u))  # distance from b
        x = np.where(t < 0, a + left, b - right)
        w = width * 0.5 * (0.5 * math.pi * np.cosh(t)) / np.cosh(u) ** 2
    return x, np.nan_to_num(w)


def _nodes_half_line(a: float, scale: float, t: np.ndarray, decay: Decay):
    with np.errstate(over="ignore"):
        if decay == "exp":
            e = np.exp(-t)
            y = np.exp(t - e)
            w = y * (1.0 + e)
        else:
            y = np.exp(0.5 * math.pi * np.sinh(t))
            w = y * 0.5 * math.pi * np.cosh(t)
    return a + scale * y, scale * np.nan_to_num(w, posinf=0.0)


def adaptive_quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    a: float = 0.0,
    b: float = math.inf,
    tol: float = 1e-10,
    *,
    decay: Decay = "exp",
    scale: float = 1.0,
    abs_tol: float = 0.0,
    max_level: int = 12,
) -> QuadratureResult:
    """Double-exponential quadrature with a step-halving ladder.

    Finite intervals use the tanh-sinh map (endpoint singularities allowed).
    The half line ``(a, oo)`` uses ``x = a + scale * exp(t - exp(-t))`` for
    exponentially decaying integrands (``decay="exp"``) and the exp-sinh map
    for power decay.  ``f`` must accept an ndarray of nodes and return values
    of the same shape.

    The error estimate is the difference between the last two levels; the
    value is returned only once it is below ``max(tol * |I|, abs_tol)``.

    Raises
    ------
    ConvergenceError
        If ``max_level`` halvings do not meet the tolerance.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    finite = math.isfinite(b)
    if finite and not b > a:
        raise PreconditionError("need a < b")
    if finite:
        tlo, thi = -4.0, 4.0
        nodes = lambda t: _nodes_finite(a, b, t)
    else:
        tlo, thi = (-5.0, 7.0) if decay == "exp" else (-4.0, 4.0)
        nodes = lambda t: _nodes_half_line(a, scale, t, decay)

    def partial(t):
        x, w = nodes(t)
        keep = w > 0
        if finite:
            keep &= (x > a) & (x < b)
        else:
            keep &= (x > a) & np.isfinite(x)
        if not np.any(keep):
            return 0.0, 0
        vals = np.asarray(f(x[keep]), dtype=complex)
        return complex(np.sum(w[keep] * vals)), int(keep.sum())

    h = 0.5
    t = np.arange(math.ceil(tlo / h), math.floor(thi / h) + 1) * h
    s, evals = partial(t)
    prev = h * s
    err = math.inf
    for _ in range(max_level):
        h /= 2
        k = np.arange(math.ceil((tlo / h - 1) / 2), math.floor((thi / h - 1) / 2) + 1)
        snew, m = partial((2 * k + 1) * h)
        s += snew
        evals += m
        cur = h * s
        err = abs(cur - prev)
        if err <= max(tol * abs(cur), abs_tol):
            return QuadratureResult(cur, err, evals)
        prev = cur
    raise ConvergenceError(
        f"quadrature did not reach tol={tol} (last error {err:.3g})", estimate=prev, error=err
    )
