import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specrecip.errors import DomainError, ParameterError
from specrecip.mellin import MellinHints, numeric_mellin
from specrecip.transforms import (h_minus_cosine_route, k_transform, l_hol_hplus_closed,
                                  l_plus_hplus_closed, l_transform_hplus, make_triple,
                                  mellin_h_minus, mellin_h_minus_cosine,
                                  sears_titchmarsh_reconstruction, spectral_density,
                                  spectral_measure_integral)

mp.mp.dps = 20


def gaussian(T):
    return lambda r: np.exp(-(np.asarray(r, dtype=float) / T) ** 2)


def test_spectral_measure_of_gaussian_against_mpmath():
    T = 3.0
    got = spectral_measure_integral(gaussian(T), (0.0, T * math.sqrt(46)))
    ref = 2 * mp.quad(lambda r: mp.exp(-(r / T) ** 2) * r * mp.tanh(mp.pi * r) / (2 * mp.pi ** 2),
                      [0, 5, mp.inf])
    assert abs(got.value - float(ref)) < 1e-12 * float(ref)


def test_minus_transform_against_mpmath_quadrature():
    T, x = 2.0, 0.3
    got = k_transform(gaussian(T), "minus", [x], support=(0.0, T * math.sqrt(46)))[0]

    def integrand(r):
        return (mp.exp(-(r / T) ** 2) * r * mp.tanh(mp.pi * r) / (2 * mp.pi ** 2)
                * 4 * mp.cosh(mp.pi * r) * mp.re(mp.besselk(2j * r, 4 * mp.pi * x)))
    ref = float(2 * mp.quad(integrand, [0, 2, 6, 14]))
    assert abs(got - ref) < 1e-9 * abs(ref)


def test_minus_transform_two_routes_agree():
    tr = make_triple("triple1", 3, 4.0)
    xs = np.array([0.05, 0.2, 0.7])
    a = k_transform(tr.h_minus, "minus", xs, support=tr.minus_support())
    b = h_minus_cosine_route(tr, xs)
    assert np.allclose(a, b, rtol=1e-8, atol=1e-12 * np.abs(a).max())


def test_mellin_of_h_minus_two_routes_agree():
    tr = make_triple("triple1", 2, 3.0)
    s = np.array([0.5 + 0j, 0.3 + 4j, 0.7 - 9j])
    a = mellin_h_minus(tr, s)
    b = mellin_h_minus_cosine(tr, s)
    assert np.all(np.abs(a - b) < 1e-7 * np.abs(a).max())


def test_mellin_of_h_plus_closed_form_against_quadrature():
    tr = make_triple("triple2", 3, 5.0)
    for s in (0.5 + 0j, 1.0 + 6j):
        num = numeric_mellin(lambda x: tr.H_plus(x).real, s, MellinHints(scale=1.0))
        ref = complex(np.ravel(tr.mellin_H_plus(s))[0])
        assert abs(num.value - ref) < 1e-9 * abs(ref)


@pytest.mark.parametrize("M,T", [(1, 5.0), (3, 10.0)])
def test_l_transform_closed_forms_against_quadrature(M, T):
    tr = make_triple("triple2", M, T)
    for k in (2, 4, 10, 20):
        ref = complex(np.ravel(l_hol_hplus_closed(k, M, T))[0])
        assert abs(l_transform_hplus(tr, "hol", k).value - ref) < 1e-8 * abs(ref)
    for r in (0.0, 1.0, 4.0):
        ref = complex(np.ravel(l_plus_hplus_closed(r, M, T))[0])
        assert abs(l_transform_hplus(tr, "plus", r).value - ref) < 1e-8 * abs(ref)


def test_sears_titchmarsh_small_triple():
    rep = sears_titchmarsh_reconstruction(make_triple("triple2", 4, 10.0), n_x=12)
    assert rep.max_rel_deviation < 1e-3


@given(st.floats(min_value=-50, max_value=50), st.sampled_from(["triple1", "triple4"]))
@settings(max_examples=40, deadline=None)
def test_h_minus_even_and_nonnegative(t, kind):
    tr = make_triple(kind, 4, 20.0, 5.0 if kind == "triple4" else None)
    a, b = tr.h_minus(np.array([t, -t]))
    assert a >= 0 and abs(a - b) <= 1e-14 * max(a, 1e-300)


@given(st.floats(min_value=-40, max_value=40))
@settings(max_examples=40, deadline=None)
def test_spectral_density_formula(r):
    ref = r * math.tanh(math.pi * r) / (2 * math.pi ** 2)
    got = float(spectral_density(np.array([r]))[0])
    assert got >= 0 and abs(got - ref) <= 1e-15 * max(abs(ref), 1e-300) + 1e-300


def test_support_holds_the_mass():
    tr = make_triple("triple1", 8, 15.0)
    lo, hi = tr.minus_support()
    peak = tr.h_minus(np.linspace(lo, hi, 2001)).max()
    assert tr.h_minus(np.array([hi + 1.0]))[0] < 1e-19 * peak


def test_triple_validation():
    with pytest.raises(ParameterError):
        make_triple("triple9", 3, 5.0)
    with pytest.raises(ParameterError):
        make_triple("triple1", 0, 5.0)
    with pytest.raises(ParameterError):
        make_triple("triple4", 3, 5.0)
    with pytest.raises(ParameterError):
        make_triple("triple4", 3, 5.0, 6.0)
    with pytest.raises(DomainError):
        k_transform(gaussian(1.0), "minus", [-1.0], support=(0, 5))
    with pytest.raises(ParameterError):
        k_transform(gaussian(1.0), "hol", [1.0])
