import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specrecip.errors import DomainError, ParameterError, PoleError
from specrecip.reciprocity import (ReciprocityParams, big_h, big_h_asymptotic_check,
                                   envelope_report, gtoj_identity_gap, hcal_envelope,
                                   hcal_transform, main_terms, mellin_grid, omega,
                                   stirling_correction, stirling_expansion_check, tilde_transform,
                                   transition_parameters)
from specrecip.transforms import make_triple

mp.mp.dps = 30


def big_h_mp(t, tg):
    q = mp.mpf(1) / 4 + 0.5j * t
    num = abs(mp.gamma(q)) ** 4 * abs(mp.gamma(q + 1j * tg)) ** 2 * abs(mp.gamma(q - 1j * tg)) ** 2
    den = abs(mp.gamma(0.5 + 1j * t)) ** 2 * abs(mp.gamma(0.5 + 1j * tg)) ** 4
    return mp.pi ** 2 / 24 * num / den


@pytest.mark.parametrize("t", [0.0, 13.0, 79.0, 81.0, 120.0])
def test_big_h_against_mpmath(t):
    tg = 40.0
    ref = float(big_h_mp(t, tg))
    assert abs(float(big_h(t, tg)) - ref) < 1e-11 * ref


@pytest.mark.parametrize("tg", [50.0, 300.0])
def test_big_h_asymptotic_within_error_budget(tg):
    out = big_h_asymptotic_check(tg)
    assert out["max_ratio"] <= 5.0
    assert abs(out["exponent_coefficient"] - 1.0) < 0.01


def test_omega():
    assert np.allclose(omega([-50, 0, 19, 21, 25], 10.0), [30, 0, 0, 1, 5])


def jhat_minus_log_ratio_mp(s, tg):
    """log of Jhat^-_{2t_g}(s) / ((1/2)(t_g/pi)^{s-1}) from gamma functions."""
    r = 2 * tg
    s = mp.mpc(s)
    log_j = (-s * mp.log(2 * mp.pi) + mp.loggamma(s / 2 + 1j * r) + mp.loggamma(s / 2 - 1j * r)
             + mp.log(mp.cosh(mp.pi * r)))
    return complex(log_j - mp.log(0.5) - (s - 1) * mp.log(tg / mp.pi))


@pytest.mark.parametrize("s", [0.5 + 0j, 0.5 + 3j, 0.2 - 6j])
def test_stirling_series_converges_to_gamma_ratio(s):
    tg = 60.0
    ref = jhat_minus_log_ratio_mp(s, tg)
    errs = [abs(complex(stirling_correction(np.array([s]), tg, order)[0]) - ref)
            for order in (0, 2, 4, 8)]
    assert errs[0] > errs[1] > errs[2] > errs[3]
    assert errs[3] < 1e-12 * max(1.0, abs(ref))


def test_stirling_leading_term_scales_as_inverse_square():
    s = 0.5 + 4j
    d1 = stirling_expansion_check(s, 100.0)["deviation"]
    d2 = stirling_expansion_check(s, 200.0)["deviation"]
    assert 3.5 < d1 / d2 < 4.5
    assert stirling_expansion_check(s, 100.0, M_terms=4)["deviation"] < 1e-3 * d1


def test_stirling_rejects_negative_order():
    with pytest.raises(ParameterError):
        stirling_correction(0.5, 10.0, -1)


def test_gamma_to_kernel_identity():
    s = 0.5 + np.linspace(-30, 30, 13) * 1j
    assert gtoj_identity_gap(s, 25.0) < 1e-10


def test_pole_guard():
    p = ReciprocityParams(30.0, sigma=1e-8)
    assert abs(p.contour_sigma - (1e-8 + 0.05)) < 1e-15
    assert abs(ReciprocityParams(30.0, sigma=1 - 1e-9).contour_sigma - (1 - 1e-9 - 0.05)) < 1e-12
    assert ReciprocityParams(30.0, sigma=0.5).contour_sigma == 0.5
    with pytest.raises(PoleError):
        ReciprocityParams(30.0, sigma=1e-8, auto_perturb=False).contour_sigma
    with pytest.raises(DomainError):
        ReciprocityParams(30.0, sigma=1.5)
    with pytest.raises(ParameterError):
        ReciprocityParams(-1.0)


@pytest.fixture(scope="module")
def small_setup():
    tr = make_triple("triple1", 2, 3.0)
    p = ReciprocityParams(10.0)
    return tr, p, mellin_grid(tr, p)


def test_hcal_independent_of_mellin_route(small_setup):
    tr, p, grid = small_setup
    grid_c = mellin_grid(tr, p, route="cosine")
    ts = [0.0, 2.0, 7.0]
    a = [v.value for v in hcal_transform(tr, ts, p, grid)]
    b = [v.value for v in hcal_transform(tr, ts, p, grid_c)]
    for x, y in zip(a, b):
        assert abs(x - y) < 1e-6 * abs(a[0])


def test_hcal_independent_of_contour(small_setup):
    tr, p, grid = small_setup
    p2 = ReciprocityParams(10.0, sigma=0.3)
    ts = [0.0, 4.0]
    a = [v.value for v in hcal_transform(tr, ts, p, grid)]
    b = [v.value for v in hcal_transform(tr, ts, p2)]
    for x, y in zip(a, b):
        assert abs(x - y) < 1e-7 * abs(a[0])


@given(st.floats(min_value=0.0, max_value=30.0))
@settings(max_examples=6, deadline=None)
def test_hcal_conjugate_symmetric_in_t(t):
    # real Mellin data and a conjugation-closed mu give Hcal(-t) = conj Hcal(t)
    tr = make_triple("triple1", 2, 3.0)
    p = ReciprocityParams(10.0)
    grid = _GRID.setdefault("g", mellin_grid(tr, p))
    a, b = hcal_transform(tr, [t, -t], p, grid)
    assert abs(a.value - b.value.conjugate()) <= 1e-9 * abs(a.value) + a.error_estimate


_GRID = {}


def test_tilde_hol_needs_even_weight(small_setup):
    tr, p, grid = small_setup
    with pytest.raises(DomainError):
        tilde_transform(tr, "hol", [3], p, grid)
    with pytest.raises(ParameterError):
        tilde_transform(tr, "sideways", [3], p, grid)


def test_envelope_continuous_at_edge_and_report():
    tg, T = 100.0, 10.0
    edge = tg * tg / (T * T)
    left, right = hcal_envelope([edge * (1 - 1e-12), edge * (1 + 1e-12)], tg, T, 8)
    assert abs(left - right) < 1e-9 * left
    rep = envelope_report("hcal", [0, 1], [2.0, -6.0], [1.0, 2.0])
    assert rep.fitted_constant == 3.0


def test_transition_parameters():
    T, U = transition_parameters(100.0)
    assert abs(T - (200 - 100 ** 0.6)) < 1e-12
    assert abs(U - (100 - T / 2 + 1)) < 1e-12


def test_main_terms_relation_and_validation():
    tr = make_triple("triple1", 2, 3.0)
    a = main_terms(tr, "first", 2.0)
    b = main_terms(tr, "second", 2.0)
    assert abs(b / a - 2.0 / (math.pi ** 2 / 6)) < 1e-12
    with pytest.raises(ParameterError):
        main_terms(tr, "first", -1.0)
    with pytest.raises(ParameterError):
        main_terms(tr, "third", 1.0)
