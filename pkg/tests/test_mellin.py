import math

import mpmath as mp
import numpy as np
import pytest

from specrecip.besselkern import KernelOrder
from specrecip.errors import ParameterError, PoleError
from specrecip.mellin import (MellinHints, kernel_mellin_numeric, mellin_kernel,
                              mellin_kernel_pole, mellin_kernel_residue, numeric_mellin)

mp.mp.dps = 30


def test_numeric_mellin_of_exponential_is_gamma():
    ss = [0.5 + 0j, 1.5 + 3j, 2.0 - 10j]
    vals = numeric_mellin(lambda x: np.exp(-x), ss)
    for s, v in zip(ss, vals):
        ref = complex(mp.gamma(mp.mpc(s)))
        assert abs(v.value - ref) < 1e-10 * abs(ref)
        assert v.error_estimate < 1e-6 * abs(ref)


def test_numeric_mellin_oscillatory_tail():
    # int_0^inf sin(x) x^{s-1} dx = Gamma(s) sin(pi s / 2), 0 < Re s < 1
    s = 0.5 + 2j
    v = numeric_mellin(np.sin, s, MellinHints(x_frequency=1.0, wynn_start=10.0))
    ref = complex(mp.gamma(s) * mp.sin(mp.pi * s / 2))
    assert abs(v.value - ref) < 1e-8 * abs(ref)


def mp_mellin(order, s):
    """Closed forms evaluated independently in mpmath."""
    s = mp.mpc(s)
    if order.kind == "hol":
        k = order.k
        return complex(2 * mp.pi * mp.re(mp.power(1j, -k)) * (4 * mp.pi) ** (-s) * 2 ** (s - 1)
                       * mp.gamma((k - 1 + s) / 2) / mp.gamma((k + 1 - s) / 2))
    # int_0^inf J_nu(a x) x^{s-1} dx and int K_nu(a x) x^{s-1} dx, a = 4 pi
    r = mp.mpf(order.r)
    a = 4 * mp.pi

    def mj(nu):
        return 2 ** (s - 1) * a ** (-s) * mp.gamma((nu + s) / 2) / mp.gamma((nu - s) / 2 + 1)
    if order.kind == "plus":
        if r == 0:
            return complex(mp.limit(lambda rr: mp.pi * 1j / mp.sinh(mp.pi * rr)
                                    * (mj(2j * rr) - mj(-2j * rr)), 0))
        return complex(mp.pi * 1j / mp.sinh(mp.pi * r) * (mj(2j * r) - mj(-2j * r)))
    return complex(4 * mp.cosh(mp.pi * r) * 2 ** (s - 2) * a ** (-s)
                   * mp.gamma((s + 2j * r) / 2) * mp.gamma((s - 2j * r) / 2))


@pytest.mark.parametrize("order", [KernelOrder.plus(1.0), KernelOrder.plus(0.0), KernelOrder.minus(5.0),
                                   KernelOrder.minus(0.0), KernelOrder.hol(2), KernelOrder.hol(10)])
@pytest.mark.parametrize("s", [0.3 + 0j, 0.5 + 7j, 1.2 - 15j])
def test_closed_form_against_mpmath(order, s):
    if order.kind == "hol" and s.real <= 1 - order.k:
        pytest.skip("outside the strip")
    ref = mp_mellin(order, s)
    got = mellin_kernel(order, s).value
    assert abs(got - ref) < 1e-11 * abs(ref)


@pytest.mark.parametrize("order", [KernelOrder.plus(5.0), KernelOrder.minus(1.0), KernelOrder.hol(4)])
def test_closed_form_against_quadrature(order):
    ss = [0.3 + 10j, 0.5 - 3j, 1.2 + 20j]
    for s, nv in zip(ss, kernel_mellin_numeric(order, ss)):
        ref = mellin_kernel(order, s).value
        assert abs(nv.value - ref) < 1e-6 * abs(ref)


def test_companion_route_independent_of_real_route():
    o = KernelOrder.plus(5.0)
    s = 0.5 + 3.0j  # |tau| < 2r: the real-axis plus integral cancels heavily
    comp = kernel_mellin_numeric(o, s, route="companion")
    ref = mellin_kernel(o, s).value
    assert abs(comp.value - ref) < 1e-8 * abs(ref)


@pytest.mark.parametrize("order,ell,which", [(KernelOrder.minus(2.0), 0, 1),
                                            (KernelOrder.minus(2.0), 2, -1),
                                            (KernelOrder.plus(1.5), 1, 1),
                                            (KernelOrder.hol(6), 0, 1),
                                            (KernelOrder.hol(6), 3, 1)])
def test_residue_is_limit_of_closed_form(order, ell, which):
    s0 = mellin_kernel_pole(order, ell, which)
    eps = 1e-7
    approx = eps * mellin_kernel(order, s0 + eps).value
    res = mellin_kernel_residue(order, ell, which)
    assert abs(approx - res) < 1e-5 * abs(res)


def test_residue_errors():
    with pytest.raises(PoleError):
        mellin_kernel_residue(KernelOrder.minus(0.0), 0)
    with pytest.raises(PoleError):
        mellin_kernel_residue(KernelOrder.hol(2), -1)
    with pytest.raises(ParameterError):
        mellin_kernel_residue(KernelOrder.minus(1.0), 0, which=2)


def test_closed_form_large_tau_finite():
    v = mellin_kernel(KernelOrder.minus(10.0), 0.5 + 400j)
    assert math.isfinite(abs(v.value))
