import math

import numpy as np
import pytest

from oracles.values import VALUES
from regl4 import characters as ch
from regl4 import i2_pipeline as ip
from regl4 import l_functions as lf
from regl4.errors import PreconditionError


@pytest.fixture(scope="module")
def scen5():
    return ip.I2Scenario.build(5, T=1.0)


@pytest.fixture(scope="module")
def scen13():
    return ip.I2Scenario.build(13, T=1.0)


def f0(N):
    return 1.0 / (lf.xi(2.0).real * ch.index_nu(N))


def test_scenario_defaults(scen5):
    assert scen5.chi.label() == "5.4"
    assert scen5.s0 == 1 + 2j
    assert scen5.eta_grid == ip.DEFAULT_ETA_GRID
    assert ip.I2Scenario.build(13).chi.label() == "13.3"


def test_scenario_validation():
    with pytest.raises(PreconditionError):
        ip.I2Scenario.build(1)
    with pytest.raises(PreconditionError):
        ip.I2Scenario.build(5, chi=2)  # odd character
    with pytest.raises(PreconditionError):
        ip.I2Scenario.build(5, eta_grid=(0.1, 0.2))
    with pytest.raises(PreconditionError):
        ip.I2Scenario.build(5, eta_grid=(0.3, 0.1))
    with pytest.raises(PreconditionError):
        ip.I2Scenario.build(5, fd_step=0.1)
    with pytest.raises(PreconditionError):
        ip.I2Scenario.degenerate().require_level()


def test_resolve_character():
    assert ip.resolve_character(5, "quadratic") == ch.quadratic_character(5)
    assert ip.resolve_character(13, 3) == ch.from_conrey(13, 3)
    assert ip.resolve_character(13, "3") == ch.from_conrey(13, 3)
    with pytest.raises(PreconditionError):
        ip.resolve_character(6, None)


def test_xi_laurent_data():
    d = ip.xi_laurent_data()
    assert abs(d.a - VALUES["xi_laurent"]["a"]) < 1e-12
    assert abs(d.b - VALUES["xi_laurent"]["b"]) < 1e-12


@pytest.mark.parametrize("N", [5, 13, 15, 17])
def test_f_at_zero(N):
    sc = ip.I2Scenario.build(N, T=0.5)
    for j in (1, 2, 3, 4):
        z = ip.f_at_zero(j, sc)
        assert z.value == pytest.approx(f0(N), rel=1e-15)
        assert abs(z.extrapolated / f0(N) - 1) < 1e-10
        assert not z.flagged
        assert abs(ip.h_zero_limit(j, sc)[0] / f0(N) - 1) < 1e-7


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_f_is_the_limit_of_h(scen13, j):
    v, err = ip.h_limit(j, 0.05, scen13)
    assert abs(ip.f_factor(j, 0.05, scen13) - v) < 1e-8 * abs(v)


def test_printed_f2_differs_for_complex_psi(scen13):
    v, _ = ip.h_limit(2, 0.1, scen13)
    printed = ip.f_factor(2, 0.1, scen13, variant="as_printed")
    assert abs(printed - v) > 1e-2 * abs(v)


def test_printed_f2_agrees_for_real_psi(scen5):
    assert ip.f_factor(2, 0.1, scen5, "as_printed") == pytest.approx(ip.f_factor(2, 0.1, scen5))


def test_h_factor_rejects_bad_index(scen5):
    with pytest.raises(PreconditionError):
        ip.h_factor(5, 0.5 + 1j, 0.6 - 1j, 0.5 + 1j, 0.6 - 1j, scen5)


@pytest.mark.parametrize("j", [1, 2])
def test_first_derivatives_match_printed_formulas(scen13, j):
    r = ip.f_derivative(j, 1, scen13)
    assert r.printed_relative_deviation < 1e-5
    assert r.derived_relative_deviation < 1e-5
    assert r.error_estimate < 1e-5 * abs(r.value)


@pytest.mark.parametrize("j", [3, 4])
def test_printed_first_derivatives_for_j34_deviate(scen13, j):
    # the derived formula (S_minus in place of S_plus) matches; the printed one does not
    r = ip.f_derivative(j, 1, scen13)
    assert r.derived_relative_deviation < 1e-5
    assert r.printed_relative_deviation > 1e-3


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_second_derivatives_match_derived_formulas(scen13, j):
    r = ip.f_derivative(j, 2, scen13)
    assert r.derived_relative_deviation < 1e-5
    assert math.isfinite(r.printed_relative_deviation)


def test_second_derivative_f2_reports_alternative_reading(scen13):
    r = ip.f_derivative(2, 2, scen13)
    assert "printed_real_reading_value" in r.terms


def test_level_one_f4_derivative():
    sc = ip.I2Scenario.degenerate(1.0)
    r = ip.f_derivative(4, 1, sc)
    expected = -2 * VALUES["xi_log_derivative_1p2i"].real * f0(1)
    assert abs(r.value / expected - 1) < 1e-5
    assert abs(r.printed_value / expected - 1) < 1e-10
    assert abs(r.derived_value / expected - 1) < 1e-10


def test_level_one_refuses_assembly():
    sc = ip.I2Scenario.degenerate(1.0)
    with pytest.raises(PreconditionError):
        ip.xi_assembly(0.1, sc)
    with pytest.raises(PreconditionError):
        ip.i2_constant_term(sc)


def test_refine_grid():
    g = ip.refine_grid((0.1, 0.01), 2)
    assert g == pytest.approx((0.1, math.sqrt(0.001), 0.01))
    assert len(ip.refine_grid(ip.DEFAULT_ETA_GRID, 4)) == 21


def test_poles_cancel_and_paths_agree(scen13):
    fit = ip.laurent_fit(scen13)
    assert abs(fit[-2]) < 1e-4 * abs(fit[0])
    assert abs(fit[-1]) < 1e-4 * abs(fit[0])
    assert fit.conditioning < 1e12
    c = ip.i2_constant_term(scen13)
    assert abs(c.value / fit[0] - 1) < 1e-5
    assert abs(c.value.imag) < 1e-4 * abs(c.value)
    assert ip.half_grid_stability(scen13) < 1e-5


def test_xi_assembly_matches_fit(scen5):
    fit = ip.laurent_fit(scen5)
    eta = 0.03
    tot = ip.xi_assembly(eta, scen5).total
    assert abs(fit.expansion(eta) - tot) < 1e-7 * abs(tot)
    with pytest.raises(PreconditionError):
        ip.xi_assembly(0.3, scen5)


@pytest.mark.parametrize("N,q1", [(5, 1), (13, 1), (15, 1), (15, 3), (15, 5), (21, 3)])
def test_rederived_terms_match_h_products(N, q1):
    sc = ip.I2Scenario.build(N, q1=q1)
    r = ip.rederive_i2_terms(0.6 + 0.3j, 0.7 - 0.2j, 0.65 + 0.1j, 0.55 - 0.4j, sc)
    assert r["relative_gap"] < 1e-10
    assert max(r["term_relative_gaps"].values()) < 1e-10


def test_asymptotic_report(scen5):
    rep = ip.i2_asymptotic_report(scen5)
    assert rep["main_term"] == pytest.approx(4 * math.log(5) ** 2)
    assert rep["l_term"] == pytest.approx(4 * lf.log_derivative(2, 1 + 2j, scen5.psi).real)
    assert abs(rep["exact"] - rep["main_term"] - rep["l_term"] - rep["remainder"]) < 1e-12
    assert 0 < rep["ratio"] < 50
    assert math.isfinite(rep["leading_ratio"])


def test_grh_diagnostics(scen13):
    reps = [ip.grh_diagnostics(scen13, X) for X in (1e2, 1e4, 1e6)]
    assert reps[0]["residual"] > reps[1]["residual"] > reps[2]["residual"]
    assert all(r["ratio_L1"] > 0 and r["ratio_L2"] > 0 for r in reps)
    with pytest.raises(PreconditionError):
        ip.grh_diagnostics(scen13, 1.0)
