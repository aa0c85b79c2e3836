import math

import mpmath as mp
import numpy as np
import pytest
from scipy import special as sp

from specrecip.besselkern import KernelOrder, kernel, kernel_bound_check, kernel_values, y0
from specrecip.errors import ParameterError

mp.mp.dps = 40


def plus_ref(r, x):
    z = 4 * mp.pi * x
    v = mp.pi * 1j / mp.sinh(mp.pi * r) * (mp.besselj(2j * r, z) - mp.besselj(-2j * r, z))
    return float(mp.re(v))


def minus_ref(r, x):
    return float(4 * mp.cosh(mp.pi * r) * mp.besselk(2j * r, 4 * mp.pi * x).real)


@pytest.mark.parametrize("r", [0.3, 1.0, 5.0, 12.0])
@pytest.mark.parametrize("x", [0.01, 0.2, 1.0, 7.5])
def test_plus_kernel_against_mpmath(r, x):
    ref = plus_ref(r, x)
    assert abs(kernel(KernelOrder.plus(r), x) - ref) <= 1e-9 * max(abs(ref), 1e-3)


@pytest.mark.parametrize("r", [0.0, 0.3, 1.0, 5.0, 12.0])
@pytest.mark.parametrize("x", [0.01, 0.2, 1.0, 3.0])
def test_minus_kernel_against_mpmath(r, x):
    ref = minus_ref(r, x)
    assert abs(kernel(KernelOrder.minus(r), x) - ref) <= 1e-9 * max(abs(ref), 1e-12)


@pytest.mark.parametrize("k", [2, 4, 12, 30])
def test_hol_kernel_against_mpmath(k):
    # the implementation calls scipy's jv, so the oracle is mpmath
    xs = [0.05, 0.5, 2.0, 10.0]
    ref = np.array([float(2 * mp.pi * mp.re(mp.power(1j, -k)) * mp.besselj(k - 1, 4 * mp.pi * x))
                    for x in xs])
    got = kernel_values(KernelOrder.hol(k), np.array(xs))
    assert np.allclose(got, ref, rtol=1e-10, atol=1e-14)


def test_series_and_contour_routes_agree():
    o = KernelOrder.minus(3.0)
    for x in (0.2, 0.4):
        a = kernel(o, x, method="series")
        b = kernel(o, x, method="contour")
        assert abs(a - b) < 1e-9 * abs(a)


def test_plus_kernel_continuous_at_r_zero():
    a = kernel(KernelOrder.plus(0.0), 0.3)
    b = kernel(KernelOrder.plus(1e-5), 0.3)
    assert abs(a - b) < 1e-6 * abs(a)


def test_minus_kernel_huge_r_no_overflow():
    # cosh(pi r) overflows double for r = 300; the product stays finite
    v = kernel(KernelOrder.minus(300.0), 200.0)
    assert math.isfinite(v)


@pytest.mark.parametrize("x", [0.1, 1.0, 11.9, 12.1, 50.0, 400.0])
def test_y0_against_scipy(x):
    assert abs(y0(x) - sp.y0(x)) < 1e-12 * max(1.0, abs(sp.y0(x)))


def test_bad_orders():
    with pytest.raises(ParameterError):
        KernelOrder("sideways")
    with pytest.raises(ParameterError):
        KernelOrder.hol(3)
    with pytest.raises(ParameterError):
        KernelOrder.plus(float("nan"))


@pytest.mark.parametrize("order", [KernelOrder.plus(3.0), KernelOrder.minus(3.0), KernelOrder.hol(8)])
def test_kernel_within_size_envelope(order):
    for x in np.geomspace(1e-3, 1e3, 25):
        out = kernel_bound_check(order, float(x))
        assert out["ratio"] < 50.0, out
