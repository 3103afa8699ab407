"""Dirichlet characters stored by prime-power components.

A character mod ``q`` is kept as a tuple of components ``(p, k, exps)``, one
per prime power ``p**k`` exactly dividing ``q``:

* odd ``p``: ``exps = (e,)`` with ``chi(g) = e(e / phi(p**k))`` for the Conrey
  generator ``g`` of ``(Z/p**k)^*``;
* ``p**k = 2``: ``exps = ()``;
* ``p**k = 4``: ``exps = (ea,)`` with ``chi(-1) = (-1)**ea``;
* ``p**k = 2**k, k >= 3``: ``exps = (ea, eb)`` with ``chi(-1) = (-1)**ea`` and
  ``chi(5) = e(eb / 2**(k-2))``.

Values are kept as integer exponents of a fixed root of unity and turned into
complex numbers only on request, so Gauss sums carry a single rounding per
term.  The exponents coincide with the Conrey labelling used by the LMFDB, see
:func:`from_conrey`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Literal

import numpy as np
from sympy import factorint, primerange
from sympy.ntheory.residue_ntheory import is_primitive_root, primitive_root

from .errors import PreconditionError, SingularInputError

__all__ = [
    "DirichletCharacter",
    "CharacterDecomposition",
    "trivial_character",
    "from_conrey",
    "enumerate_characters",
    "primitive_characters",
    "quadratic_character",
    "decompose",
    "gauss_sum",
    "index_nu",
    "level_prime_product",
    "level_log_sums",
    "prime_divisors",
]


@lru_cache(maxsize=None)
def prime_divisors(n: int) -> tuple[int, ...]:
    """Distinct primes dividing ``n`` in increasing order."""
    if n < 1:
        raise PreconditionError(f"n must be positive, got {n}")
    return tuple(sorted(factorint(n)))


@lru_cache(maxsize=None)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


@lru_cache(maxsize=None)
def conrey_generator(p: int) -> int:
    """Least primitive root mod ``p`` that is also primitive mod ``p**2``."""
    g = primitive_root(p)
    while not is_primitive_root(g, p * p):
        g += 1
        while not is_primitive_root(g, p):
            g += 1
    return g


def _cyclic_orders(p: int, k: int) -> tuple[int, ...]:
    if p != 2:
        return ((p - 1) * p ** (k - 1),)
    if k == 1:
        return ()
    if k == 2:
        return (2,)
    return (2, 2 ** (k - 2))


@lru_cache(maxsize=None)
def _log_tables(p: int, k: int) -> tuple[np.ndarray, ...]:
    """Discrete-log tables for ``(Z/p**k)^*``, one per cyclic factor; -1 on non-units."""
    pk = p**k
    if p != 2:
        g = conrey_generator(p)
        table = np.full(pk, -1, dtype=np.int64)
        x = 1
        for ell in range((p - 1) * p ** (k - 1)):
            table[x] = ell
            x = x * g % pk
        return (table,)
    if k == 1:
        return ()
    sign = np.full(pk, -1, dtype=np.int64)
    if k == 2:
        sign[1], sign[3] = 0, 1
        return (sign,)
    five = np.full(pk, -1, dtype=np.int64)
    x = 1
    for ell in range(2 ** (k - 2)):
        sign[x], five[x] = 0, ell
        sign[pk - x], five[pk - x] = 1, ell
        x = x * 5 % pk
    return (sign, five)


@lru_cache(maxsize=None)
def _roots_of_unity(m: int) -> np.ndarray:
    angle = 2.0 * np.pi * np.arange(m) / m
    return np.cos(angle) + 1j * np.sin(angle)


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod ``modulus``.

    Construct through :func:`from_conrey`, :func:`enumerate_characters` or
    :func:`trivial_character` rather than directly.  Calling the character on
    an integer (or an integer array) returns its complex value.
    """

    modulus: int
    components: tuple[tuple[int, int, tuple[int, ...]], ...]
    _order: int = field(init=False, repr=False, compare=False)
    _table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = self.modulus
        if q < 1:
            raise PreconditionError(f"modulus must be positive, got {q}")
        if tuple((p, k) for p, k, _ in self.components) != _factor(q):
            raise PreconditionError(f"components do not match the factorization of {q}")
        orders = [o for p, k, _ in self.components for o in _cyclic_orders(p, k)]
        m = reduce(math.lcm, orders, 1)
        a = np.arange(q)
        table = np.zeros(q, dtype=np.int64)
        unit = np.gcd(a, q) == 1
        for p, k, exps in self.components:
            if len(exps) != len(_cyclic_orders(p, k)):
                raise PreconditionError(f"wrong number of exponents at {p}^{k}")
            for order, e, logs in zip(_cyclic_orders(p, k), exps, _log_tables(p, k)):
                ell = logs[a % p**k]
                table = (table + (e % order) * (m // order) * np.where(ell < 0, 0, ell)) % m
        table[~unit] = -1
        object.__setattr__(self, "_order", m)
        object.__setattr__(self, "_table", table)

    # -- values ---------------------------------------------------------
    def exponent(self, a):
        """Integer ``k`` with ``chi(a) = e(k / root_order)``, or -1 if ``gcd(a, q) > 1``."""
        return self._table[np.asarray(a) % self.modulus]

    @property
    def root_order(self) -> int:
        return self._order

    def __call__(self, a):
        k = self.exponent(a)
        vals = np.where(k < 0, 0.0, _roots_of_unity(self._order)[np.maximum(k, 0)])
        return complex(vals) if np.ndim(vals) == 0 else vals

    # -- structure ------------------------------------------------------
    @property
    def parity(self) -> int:
        """``chi(-1)`` as +1 or -1."""
        s = 0
        for p, k, exps in self.components:
            if exps:
                s += exps[0]
        return -1 if s % 2 else 1

    @property
    def is_even(self) -> bool:
        return self.parity == 1

    @property
    def is_trivial(self) -> bool:
        return bool(np.all(self._table[self._table >= 0] == 0))

    @property
    def conductor(self) -> int:
        f = 1
        for p, k, exps in self.components:
            f *= p ** _component_conductor_exponent(p, k, exps)
        return f

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def is_real(self) -> bool:
        return bool(np.all((2 * self._table[self._table >= 0]) % self._order == 0))

    def primitive_core(self) -> DirichletCharacter:
        """The primitive character mod the conductor inducing this one."""
        comps = []
        for p, k, exps in self.components:
            c = _component_conductor_exponent(p, k, exps)
            if c == 0:
                continue
            if p != 2:
                comps.append((p, c, (exps[0] // p ** (k - c),)))
            elif c == 2:
                comps.append((2, 2, (exps[0],)))
            else:
                comps.append((2, c, (exps[0], exps[1] // 2 ** (k - c))))
        return DirichletCharacter(self.conductor, tuple(comps))

    def conj(self) -> DirichletCharacter:
        comps = tuple(
            (p, k, tuple((-e) % o for e, o in zip(exps, _cyclic_orders(p, k))))
            for p, k, exps in self.components
        )
        return DirichletCharacter(self.modulus, comps)

    def restrict(self, d: int) -> DirichletCharacter:
        """Component of this character on the prime powers dividing ``d``.

        ``d`` must be a unitary divisor of the modulus (``gcd(d, q/d) = 1``).
        """
        q = self.modulus
        if q % d or math.gcd(d, q // d) != 1:
            raise PreconditionError(f"{d} is not a unitary divisor of {q}")
        return DirichletCharacter(d, tuple(c for c in self.components if d % c[0] == 0))

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        if self.modulus == other.modulus:
            comps = tuple(
                (p, k, tuple((a + b) % o for a, b, o in zip(ea, eb, _cyclic_orders(p, k))))
                for (p, k, ea), (_, _, eb) in zip(self.components, other.components)
            )
            return DirichletCharacter(self.modulus, comps)
        if math.gcd(self.modulus, other.modulus) == 1:
            comps = tuple(sorted(self.components + other.components))
            return DirichletCharacter(self.modulus * other.modulus, comps)
        raise PreconditionError("products are supported for equal or coprime moduli only")

    @property
    def conrey_index(self) -> int:
        """Conrey label ``n`` of this character (``chi = chi_q(n, .)``)."""
        residues, moduli = [], []
        for p, k, exps in self.components:
            pk = p**k
            if p != 2:
                r = pow(conrey_generator(p), exps[0], pk)
            elif k == 1:
                r = 1
            elif k == 2:
                r = 3 if exps[0] else 1
            else:
                r = pow(5, exps[1], pk)
                if exps[0]:
                    r = (-r) % pk
            residues.append(r)
            moduli.append(pk)
        n = 0
        for r, m in zip(residues, moduli):
            rest = self.modulus // m
            n += r * rest * pow(rest, -1, m)
        return n % self.modulus if self.modulus > 1 else 1

    def label(self) -> str:
        return f"{self.modulus}.{self.conrey_index}"

    def __repr__(self):
        return f"DirichletCharacter({self.label()})"


def _component_conductor_exponent(p: int, k: int, exps: tuple[int, ...]) -> int:
    if p != 2:
        e = exps[0]
        if e == 0:
            return 0
        v = 0
        while e % p == 0:
            e //= p
            v += 1
        return k - v
    if k == 1:
        return 0
    if k == 2:
        return 2 if exps[0] else 0
    ea, eb = exps
    if eb == 0:
        return 2 if ea else 0
    v = 0
    while eb % 2 == 0:
        eb //= 2
        v += 1
    return max(3, k - v)


def trivial_character(q: int = 1) -> DirichletCharacter:
    """Principal character mod ``q`` (the trivial character when ``q = 1``)."""
    comps = tuple((p, k, (0,) * len(_cyclic_orders(p, k))) for p, k in _factor(q))
    return DirichletCharacter(q, comps)


def from_conrey(q: int, n: int) -> DirichletCharacter:
    """The Conrey character ``chi_q(n, .)``; ``n`` must be coprime to ``q``."""
    if math.gcd(n, q) != 1:
        raise PreconditionError(f"Conrey index {n} is not coprime to {q}")
    comps = []
    for p, k in _factor(q):
        pk = p**k
        r = n % pk
        logs = _log_tables(p, k)
        comps.append((p, k, tuple(int(t[r]) for t in logs)))
    return DirichletCharacter(q, tuple(comps))


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All ``phi(q)`` characters mod ``q``, ordered by Conrey index."""
    if q < 1:
        raise PreconditionError(f"q must be positive, got {q}")
    if q == 1:
        return [trivial_character(1)]
    return [from_conrey(q, n) for n in range(1, q) if math.gcd(n, q) == 1]


def primitive_characters(q: int, parity: Literal["even", "odd", None] = None):
    """Primitive characters mod ``q``, optionally filtered by parity."""
    out = [c for c in enumerate_characters(q) if c.is_primitive]
    if parity == "even":
        out = [c for c in out if c.is_even]
    elif parity == "odd":
        out = [c for c in out if not c.is_even]
    return out


def quadratic_character(q: int) -> DirichletCharacter:
    """The primitive real nontrivial character mod ``q``."""
    for c in enumerate_characters(q):
        if c.is_primitive and c.is_real and not c.is_trivial:
            return c
    raise PreconditionError(f"no primitive quadratic character mod {q}")


@dataclass(frozen=True)
class CharacterDecomposition:
    """``chi = chi1 * conj(chi2)`` with ``chi_j`` primitive mod ``q_j``, ``q1 q2 = N``."""

    chi1: DirichletCharacter
    chi2: DirichletCharacter

    @property
    def q1(self) -> int:
        return self.chi1.modulus

    @property
    def q2(self) -> int:
        return self.chi2.modulus

    @property
    def N(self) -> int:
        return self.q1 * self.q2

    @property
    def chi(self) -> DirichletCharacter:
        return self.chi1 * self.chi2.conj()

    @property
    def psi(self) -> DirichletCharacter:
        """The product ``chi1 * chi2`` entering the L-functions."""
        return self.chi1 * self.chi2

    def conj(self) -> CharacterDecomposition:
        return CharacterDecomposition(self.chi1.conj(), self.chi2.conj())

    def swapped(self) -> CharacterDecomposition:
        """The pair ``(conj chi2, conj chi1)`` of the functional equation."""
        return CharacterDecomposition(self.chi2.conj(), self.chi1.conj())


def decompose(chi: DirichletCharacter, q1: int) -> CharacterDecomposition:
    """Split a primitive ``chi`` mod ``N`` as ``chi1 * conj(chi2)`` along ``N = q1 q2``."""
    N = chi.modulus
    if not chi.is_primitive:
        raise PreconditionError(f"{chi!r} is not primitive")
    if q1 < 1 or N % q1 or math.gcd(q1, N // q1) != 1:
        raise PreconditionError(f"q1={q1} must be a divisor of {N} coprime to {N}/q1")
    return CharacterDecomposition(chi.restrict(q1), chi.restrict(N // q1).conj())


def gauss_sum(chi: DirichletCharacter) -> complex:
    """``sum_{a mod q} chi(a) e(a/q)``."""
    q, m = chi.modulus, chi.root_order
    a = np.arange(q)
    k = chi.exponent(a)
    units = k >= 0
    # exact integer numerator of the angle 2 pi (k/m + a/q)
    num = (k[units] * q + a[units] * m) % (m * q)
    angle = 2.0 * np.pi * num / (m * q)
    return complex(np.sum(np.cos(angle)) + 1j * np.sum(np.sin(angle)))


def index_nu(N: int) -> int:
    """Index of Gamma_0(N) in SL_2(Z): ``N prod_{p | N} (1 + 1/p)``."""
    nu = N
    for p in prime_divisors(N):
        nu = nu // p * (p + 1)
    return nu


def level_prime_product(N: int, u: complex, v: complex) -> complex:
    """``prod_{p | N} (1 - p**u) / (1 - p**v)``."""
    out = 1.0 + 0.0j
    for p in prime_divisors(N):
        den = -np.expm1(v * math.log(p))
        if abs(den) < 1e-14:
            raise SingularInputError(f"1 - {p}^v vanishes at v={v}", factor=f"1-{p}^v")
        out *= -np.expm1(u * math.log(p)) / den
    return complex(out)


LogSumVariant = Literal[
    "log_p_over_p_plus_1",
    "log_p_over_p_minus_1",
    "p_log2_over_p_plus_1_sq",
    "p_log2_over_p_minus_1_sq",
    "log_p_over_p",
]


def level_log_sums(N: int, variant: LogSumVariant) -> float:
    """Finite sums over the primes dividing ``N`` used in the I2 expansion."""
    terms = {
        "log_p_over_p_plus_1": lambda p: math.log(p) / (p + 1),
        "log_p_over_p_minus_1": lambda p: math.log(p) / (p - 1),
        "p_log2_over_p_plus_1_sq": lambda p: p * math.log(p) ** 2 / (p + 1) ** 2,
        "p_log2_over_p_minus_1_sq": lambda p: p * math.log(p) ** 2 / (p - 1) ** 2,
        "log_p_over_p": lambda p: math.log(p) / p,
    }
    try:
        term = terms[variant]
    except KeyError:
        raise PreconditionError(f"unknown variant {variant!r}") from None
    return math.fsum(term(p) for p in prime_divisors(N))


def primes_below(X: float) -> list[int]:
    return list(primerange(2, math.ceil(X)))
