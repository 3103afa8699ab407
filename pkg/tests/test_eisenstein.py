import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles.values import VALUES
from regl4 import characters as ch
from regl4 import eisenstein as es
from regl4.errors import PreconditionError

ONE = es.trivial_decomposition()
D5 = ch.decompose(ch.quadratic_character(5), 1)
D13 = ch.decompose(ch.from_conrey(13, 3), 1)
D15 = ch.decompose(ch.from_conrey(15, 2), 3)


def unitary_divisors(N):
    return [d for d in range(1, N + 1) if N % d == 0 and math.gcd(d, N // d) == 1]


def test_cusp_count_gamma0_15():
    cusps = es.cusp_representatives(15)
    assert len(cusps) == 4
    assert all(c.singular_for_chi for c in cusps)
    assert sorted(c.width for c in cusps) == [1, 3, 5, 15]


def test_cusp_count_gamma0_12():
    # sum_{d | N} phi(gcd(d, N/d)) = 6 for N = 12
    cusps = es.cusp_representatives(12)
    assert len(cusps) == 6
    assert sum(c.singular_for_chi for c in cusps) == 4


def test_fourier_coefficients_match_divisor_sum():
    lam = es.fourier_coefficients(60, 0.7 + 0.2j, D15)
    for n in range(1, 61):
        assert abs(lam[n - 1] - es.fourier_coefficient(n, 0.7 + 0.2j, D15)) < 1e-12


def test_fourier_coefficient_negative_index():
    assert es.fourier_coefficient(-6, 0.7, D15) == pytest.approx(D15.chi2(-1) * es.fourier_coefficient(6, 0.7, D15))
    with pytest.raises(PreconditionError):
        es.fourier_coefficient(0, 0.7, D15)


def test_level_one_coefficients_are_sigma():
    s = 0.9
    lam = es.fourier_coefficients(12, s, ONE)
    sigma = [sum(d ** (2 * s - 1) for d in range(1, n + 1) if n % d == 0) for n in range(1, 13)]
    ref = np.array(sigma) * np.arange(1, 13) ** (0.5 - s)
    assert np.max(np.abs(lam - ref)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([5, 8, 12, 13, 15, 21, 24, 28]), st.data(), st.builds(complex, st.floats(-1, 2), st.floats(-5, 5)))
def test_huxley_coefficient_identity(N, data, s):
    chis = ch.primitive_characters(N, "even")
    if not chis:
        return
    chi = data.draw(st.sampled_from(chis))
    d = ch.decompose(chi, data.draw(st.sampled_from(unitary_divisors(N))))
    a = es.fourier_coefficients(100, s, d)
    b = es.fourier_coefficients(100, 1 - s, d.swapped())
    assert np.max(np.abs(a - b) / np.maximum(np.abs(a), 1)) < 1e-12


def test_nonconstant_part_against_mpmath():
    e = VALUES["eisenstein_level_one"]
    spec = es.EisensteinSpec.for_tolerance(ONE, e["s"], e["z"].imag)
    assert abs(es.eval_fourier(e["z"], spec) - e["nonconstant"]) < 1e-13
    assert spec.tail_bound < 1e-12


def test_lattice_against_mpmath():
    e = VALUES["eisenstein_level_one_full"]
    assert abs(es.eval_lattice(e["z"], e["s"], ONE) - e["value"]) < 1e-12


def test_level_one_lattice_equals_fourier_plus_constant():
    z = np.array([0.13 + 0.8j, -0.4 + 1.3j])
    s = 1.3 + 0.5j
    lat = es.eval_lattice(z, s, ONE)
    four = es.eval_fourier(z, es.EisensteinSpec.for_tolerance(ONE, s, 0.8))
    const = es.classical_constant_term(z.imag, s)
    assert np.max(np.abs(lat - four - const)) < 1e-11


@pytest.mark.parametrize("dec", [D5, D13, D15])
def test_lattice_nonconstant_modes_match_fourier(dec):
    s, y, M = 1.6, 1.2, 64
    x = np.arange(M) / M
    lat = es.eval_lattice(x + 1j * y, s, dec)
    four = es.eval_fourier(x + 1j * y, es.EisensteinSpec.for_tolerance(dec, s, y))
    A, B = es.constant_term_fit(s, dec)
    assert np.max(np.abs(lat - four - (A * y**s + B * y ** (1 - s)))) < 1e-9


def test_lattice_requires_re_s_above_one():
    with pytest.raises(PreconditionError):
        es.eval_lattice(0.1 + 1j, 0.9, D5)


@pytest.mark.parametrize("dec", [D5, D13, D15])
def test_functional_equation_residual(dec):
    z = np.array([0.2 + 1.5j, -0.3 + 1.2j, 0.45 + 0.6j])
    assert es.functional_equation_residual(z, 0.7 + 0.4j, dec) < 1e-8


@pytest.mark.parametrize("N", [5, 13, 15, 21, 29])
def test_scattering_unitarity(N):
    for chi in ch.primitive_characters(N, "even"):
        for q1 in unitary_divisors(N):
            d = ch.decompose(chi, q1)
            for t in np.linspace(0, 10, 11):
                assert abs(abs(es.scattering_phi(0.5 + 1j * t, d)) - 1) < 1e-9


def test_scattering_reflection():
    s = 0.8 + 1.1j
    assert abs(es.scattering_phi(s, D15) * es.scattering_phi(1 - s, D15.swapped()) - 1) < 1e-10


def test_cusp_normalizations_agree_when_q1_is_one():
    s = 1.7 + 0.3j
    assert es.cusp_normalization(s, D5, "rho") == pytest.approx(es.cusp_normalization(s, D5, "cusp"))
    assert abs(es.cusp_normalization(s, D15, "rho") / es.cusp_normalization(s, D15, "cusp") - 3**s) < 1e-12
    with pytest.raises(PreconditionError):
        es.cusp_normalization(s, D5, "other")


def test_cusp_constant_modes_n15():
    s, y = 1.6, 2.0
    own = es.cusp_constant_mode(s, D15, D15.q2, y)
    assert abs(own - y**s) < 1e-10
    dual = es.cusp_constant_mode(s, D15, D15.q1, y)
    assert abs(dual - es.scattering_phi(s, D15) * y ** (1 - s)) < 1e-10
    for q in (1, 15):
        assert abs(es.cusp_constant_mode(s, D15, q, 1.5, samples=8)) < 1e-12


def test_atkin_lehner_matrix():
    for N in (5, 15, 21):
        for q2 in unitary_divisors(N):
            g = es.atkin_lehner_matrix(q2, N)
            assert abs(np.linalg.det(g) - 1) < 1e-12
            q1 = N // q2
            # sends oo to 1/q2
            assert abs(g[0, 0] / g[1, 0] - q1 / N) < 1e-14
    with pytest.raises(PreconditionError):
        es.atkin_lehner_matrix(2, 12)


@pytest.mark.parametrize("dec", [D5, D13, D15])
@pytest.mark.parametrize("which", ["a", "a_star"])
def test_slash_identity(dec, which):
    rep = es.slash_identity_check(np.array([0.1 + 2.0j, 0.37 + 1.6j, -0.2 + 1.1j]), 1.7, dec, which=which)
    assert rep.residual_after_unit < 1e-8 * np.max(np.abs(rep.rhs))
    assert rep.ratio_spread < 1e-8


def test_slash_identity_rejects_unknown_cusp():
    with pytest.raises(PreconditionError):
        es.slash_identity_check(1j, 1.7, D5, which="b")


def test_mode_projection():
    M = 32
    x = np.arange(M) / M
    vals = 3 * np.exp(2j * math.pi * 2 * x) + 0.5
    assert abs(es.mode_projection(vals, 2) - 3) < 1e-14
    assert abs(es.mode_projection(vals, 0) - 0.5) < 1e-14
