import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regl4 import characters as ch
from regl4.errors import PreconditionError, SingularInputError


def units(q):
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]


def test_counts_mod_5():
    chars = ch.enumerate_characters(5)
    assert len(chars) == 4
    assert sum(c.is_even and not c.is_trivial for c in chars) == 1
    assert ch.quadratic_character(5).is_even


def test_primitive_count_mod_8():
    assert sum(c.is_primitive for c in ch.enumerate_characters(8)) == 2


def test_primitive_counts_match_moebius_convolution():
    # number of primitive characters mod q is the Dirichlet convolution mu * phi
    def mu(n):
        out, m, p = 1, n, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                out = -out
            p += 1
        return -out if m > 1 else out

    for q in range(1, 61):
        expected = sum(mu(d) * len(units(q // d)) for d in range(1, q + 1) if q % d == 0)
        assert len(ch.primitive_characters(q)) == expected


def test_conrey_values_mod_13():
    # chi_13(3, .) with primitive root 2: chi(2) = e(ind_2(3)/12) = e(1/3)
    c = ch.from_conrey(13, 3)
    assert c(2) == pytest.approx(cmath.exp(2j * math.pi / 3), abs=1e-14)
    assert c.is_even and c.is_primitive
    assert c.label() == "13.3"


def test_quadratic_mod_5_is_legendre():
    c = ch.quadratic_character(5)
    assert [complex(c(a)).real for a in range(5)] == [0, 1, -1, -1, 1]


def test_conrey_rejects_noncoprime():
    with pytest.raises(PreconditionError):
        ch.from_conrey(12, 3)


def test_conductor_of_imprimitive():
    c = ch.from_conrey(5, 4) * ch.trivial_character(3)
    assert c.modulus == 15
    assert c.conductor == 5
    assert not c.is_primitive
    assert c.primitive_core() == ch.from_conrey(5, 4)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.data())
def test_multiplicative_and_periodic(q, data):
    idx = data.draw(st.sampled_from(units(q)))
    c = ch.from_conrey(q, idx)
    a, b = data.draw(st.integers(-200, 200)), data.draw(st.integers(-200, 200))
    assert abs(c(a * b) - c(a) * c(b)) < 1e-12
    assert abs(c(a + q) - c(a)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 80), st.data())
def test_gauss_sum_modulus(q, data):
    prim = ch.primitive_characters(q)
    if not prim:
        return
    c = data.draw(st.sampled_from(prim))
    tau = ch.gauss_sum(c)
    assert abs(abs(tau) ** 2 - q) < 1e-10 * q
    # tau(chi) tau(conj chi) = chi(-1) q
    assert abs(tau * ch.gauss_sum(c.conj()) - c(-1) * q) < 1e-10 * q


def test_gauss_sum_quadratic_5():
    assert abs(ch.gauss_sum(ch.quadratic_character(5)) - math.sqrt(5)) < 1e-13


def test_gauss_sum_direct_sum():
    for c in ch.enumerate_characters(21):
        direct = sum(c(a) * cmath.exp(2j * math.pi * a / 21) for a in range(21))
        assert abs(ch.gauss_sum(c) - direct) < 1e-12


@pytest.mark.parametrize("N", [15, 21, 35, 60, 91])
def test_decomposition_round_trip(N):
    for chi in ch.primitive_characters(N, "even"):
        for q1 in (d for d in range(1, N + 1) if N % d == 0 and math.gcd(d, N // d) == 1):
            d = ch.decompose(chi, q1)
            assert d.q1 == q1 and d.q2 == N // q1
            assert d.chi1.is_primitive and d.chi2.is_primitive
            assert np.max(np.abs(d.chi(np.array(units(N))) - chi(np.array(units(N))))) < 1e-12


def test_decompose_rejects_nonunitary_divisor():
    chi = ch.primitive_characters(12)[0]
    with pytest.raises(PreconditionError):
        ch.decompose(chi, 2)


def test_index_nu():
    assert ch.index_nu(1) == 1
    assert ch.index_nu(12) == 24
    assert ch.index_nu(101) == 102
    assert ch.index_nu(8) == 12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 300), st.integers(1, 300))
def test_index_nu_multiplicative(m, n):
    if math.gcd(m, n) == 1:
        assert ch.index_nu(m * n) == ch.index_nu(m) * ch.index_nu(n)


def test_level_prime_product():
    assert ch.level_prime_product(10, -1, -2) == pytest.approx(5 / 9, rel=1e-14)
    assert ch.level_prime_product(1, 0.3, 0.7) == 1
    with pytest.raises(SingularInputError):
        ch.level_prime_product(6, -1, 0)


def test_level_log_sums():
    v = ch.level_log_sums(6, "p_log2_over_p_minus_1_sq")
    assert v == pytest.approx(2 * math.log(2) ** 2 + 0.75 * math.log(3) ** 2, rel=1e-14)
    assert ch.level_log_sums(1, "log_p_over_p") == 0
    with pytest.raises(PreconditionError):
        ch.level_log_sums(6, "nope")
