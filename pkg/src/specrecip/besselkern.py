"""Spectral kernels J_r^+(x), J_r^-(x), J_k^hol(x) and the Y_0 helper.

J_r^+(x) = (pi i / sinh pi r)(J_{2ir} - J_{-2ir})(4 pi x)
J_r^-(x) = 4 cosh(pi r) K_{2ir}(4 pi x)
J_k^hol(x) = 2 pi i^{-k} J_{k-1}(4 pi x)

The +/- kernels are evaluated either by the ascending power series (small
argument, where the terms never grow by more than e^4) or by integrating

    int_R exp(i(z cosh t - mu t)) dt = pi i e^{-pi mu/2} H^(1)_{i mu}(z)
    int_R exp(-z cosh t + i mu t) dt = 2 K_{i mu}(z)

along steepest-descent paths through their saddle points.  On those paths
the integrand modulus never exceeds its saddle value, so there is no
cancellation even when cosh(pi r) is astronomically large; the cosh factor
is folded into the exponent.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special as sp

from .complexfn import EULER_GAMMA, harmonic, log_gamma, log_sinh
from .errors import DomainError, ParameterError
from .quad import adaptive_gl, trapezoid_line

SMALL_R = 1e-6
Y0_SERIES_MAX = 12.0


@dataclass(frozen=True)
class KernelOrder:
    kind: str
    r: float = 0.0
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("plus", "minus", "hol"):
            raise ParameterError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "hol":
            if self.k is None or int(self.k) != self.k or self.k < 2 or self.k % 2:
                raise ParameterError("holomorphic kernel needs an even weight k >= 2")
        elif not math.isfinite(self.r):
            raise ParameterError("spectral parameter must be finite")

    @classmethod
    def plus(cls, r: float) -> "KernelOrder":
        return cls("plus", float(r))

    @classmethod
    def minus(cls, r: float) -> "KernelOrder":
        return cls("minus", float(r))

    @classmethod
    def hol(cls, k: int) -> "KernelOrder":
        return cls("hol", 0.0, int(k))


# ------------------------------------------------------------------ series

def use_series(z: float, r: float) -> bool:
    """Series when term growth stays below e^4: z <= 4, or z^2 <= 8 mu and z <= mu (mu = 2|r|)."""
    mu = 2.0 * abs(r)
    return z <= 4.0 or (z * z <= 8.0 * mu and z <= mu)


def _bessel_series_sum(z: float, nu: complex, sign: int, log_scale: complex) -> complex:
    """exp(log_scale) * sum_m sign^m (z/2)^{2m+nu} / (m! Gamma(m+1+nu))."""
    q = 0.25 * z * z
    term = cmath.exp(nu * math.log(0.5 * z) - log_gamma(1.0 + nu) + log_scale)
    total = term
    peak = abs(term)
    m = 0
    while True:
        m += 1
        term = term * (sign * q) / (m * (m + nu))
        total += term
        a = abs(term)
        peak = max(peak, a)
        if m > q and a <= 1e-18 * peak:
            break
        if m > 10000:
            break
    return total


def _y0_series(z: float) -> float:
    q = 0.25 * z * z
    j0 = 0.0
    tail = 0.0
    term = 1.0
    for m in range(0, 10000):
        if m > 0:
            term *= -q / (m * m)
            tail += -term * harmonic(m)
        j0 += term
        if m > q and abs(term) < 1e-18:
            break
    return (2.0 / math.pi) * ((math.log(0.5 * z) + EULER_GAMMA) * j0 + tail)


def _k0_series(z: float) -> float:
    q = 0.25 * z * z
    i0 = 0.0
    tail = 0.0
    term = 1.0
    for m in range(0, 10000):
        if m > 0:
            term *= q / (m * m)
            tail += term * harmonic(m)
        i0 += term
        if m > q and term < 1e-18 * i0:
            break
    return -(math.log(0.5 * z) + EULER_GAMMA) * i0 + tail


def _jplus_series(z: float, r: float) -> float:
    r = abs(r)
    if r < SMALL_R:
        return -2.0 * math.pi * _y0_series(z)
    # -(2 pi / sinh pi r) Im J_{2ir}(z)
    s = _bessel_series_sum(z, 2j * r, -1, -log_sinh(math.pi * r).real)
    return -2.0 * math.pi * s.imag


def _jminus_series(z: float, r: float) -> float:
    r = abs(r)
    if r < SMALL_R:
        return 4.0 * _k0_series(z)
    # -(2 pi / sinh pi r) Im I_{2ir}(z)
    s = _bessel_series_sum(z, 2j * r, 1, -log_sinh(math.pi * r).real)
    return -2.0 * math.pi * s.imag


# ------------------------------------------------------------------ contours

def hankel_type_integral(z: float, mu: float, *, phase_shift: float = 0.0) -> complex:
    """int_R exp(i(z cosh t - mu t) - i phase_shift) dt for z > 0, mu >= 0.

    Path t = t* + u + i (pi/2) tanh(2u/pi) through the saddle t* = arcsinh(mu/z).
    """
    if z <= 0:
        raise DomainError("argument must be positive")
    t_star = math.asinh(mu / z)
    curv = math.sqrt(z * z + mu * mu)
    h = min(0.1, 0.2 / math.sqrt(curv))
    c = 2.0 / math.pi

    def integrand(u):
        th = np.tanh(c * u)
        t = t_star + u + 0.5j * math.pi * th
        dt = 1.0 + 1j * (1.0 - th * th)
        return np.exp(1j * (z * np.cosh(t) - mu * t) - 1j * phase_shift) * dt

    return complex(trapezoid_line(integrand, h))


def _k_type_integral_logscaled(z: float, mu: float, log_scale: float) -> complex:
    """exp(log_scale) * int_R exp(-z cosh t + i mu t) dt for z > 0, mu >= 0."""
    if mu <= z:
        # Line Im t = theta through the saddle.  Close to mu = z the line would
        # approach Im t = pi/2 where the integrand stops decaying; lowering it
        # by d costs at most a factor exp(mu (d - sin d)) ~ exp(mu d^3/6).
        theta = math.asin(mu / z)
        d = min(0.5, (3.0 / max(mu, 1e-300)) ** (1.0 / 3.0))
        theta = min(theta, 0.5 * math.pi - d)
        ct = math.cos(theta)
        curv = max(z * ct, 1e-300)
        h = min(0.1, 0.25 / math.sqrt(curv))

        def integrand(u):
            t = u + 1j * theta
            return np.exp(-z * np.cosh(t) + 1j * mu * t + log_scale)

        return complex(trapezoid_line(integrand, h))

    u1 = math.acosh(mu / z)
    base = -0.5 * math.pi * mu + log_scale

    def middle(u):
        # t = u + i pi/2: -z cosh t = -i z sinh u
        return np.exp(1j * (mu * u - z * np.sinh(u)) + base)

    freq = mu - z + 1.0
    panels = max(4, int(math.ceil(2.0 * u1 * freq / 3.0)))
    mid, _ = adaptive_gl(middle, -u1, u1, tol=1e-13, initial_panels=panels)

    def outer(v, side):
        d = np.tanh(v)
        t = side * (u1 + v) + 1j * (0.5 * math.pi - d)
        dt = side - 1j * (1.0 - d * d)
        return np.exp(-z * np.cosh(t) + 1j * mu * t + log_scale) * dt

    curv = z * math.sinh(u1) + 1.0
    width = min(0.5, 1.0 / math.sqrt(curv))
    vmax = width
    # extend until the modulus is negligible
    while True:
        m = abs(outer(np.array([vmax]), 1.0)[0])
        if m < 1e-20 or vmax > 50.0:
            break
        vmax *= 1.5
    tot = mid
    for side in (1.0, -1.0):
        val, _ = adaptive_gl(lambda v: outer(v, side), 0.0, vmax, tol=1e-13,
                             initial_panels=max(4, int(math.ceil(vmax / width))))
        # the left piece runs from -u1 leftwards; orient both towards +inf/-inf
        tot += val if side > 0 else -val
    return tot


def _jplus_contour(z: float, r: float) -> float:
    mu = 2.0 * abs(r)
    return 2.0 * hankel_type_integral(z, mu).real


def _jminus_contour(z: float, r: float) -> float:
    mu = 2.0 * abs(r)
    # 2 cosh(pi r) folded into the exponent
    log_c = math.pi * abs(r) + math.log1p(math.exp(-2.0 * math.pi * abs(r)))
    return _k_type_integral_logscaled(z, mu, log_c).real


# ------------------------------------------------------------------ public

def kernel(order: KernelOrder, x: float, *, method: str = "auto") -> float:
    """Evaluate the spectral kernel of the given order at x > 0 (real result)."""
    if not x > 0:
        raise DomainError("kernel argument must be positive")
    z = 4.0 * math.pi * x
    if order.kind == "hol":
        k = int(order.k)
        return 2.0 * math.pi * (-1.0) ** (k // 2) * float(sp.jv(k - 1, z))
    r = order.r
    if method == "auto":
        method = "series" if use_series(z, r) else "contour"
    if method not in ("series", "contour"):
        raise ParameterError(f"unknown method {method!r}")
    if order.kind == "plus":
        return _jplus_series(z, r) if method == "series" else _jplus_contour(z, r)
    return _jminus_series(z, r) if method == "series" else _jminus_contour(z, r)


def kernel_values(order: KernelOrder, xs, *, method: str = "auto") -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if order.kind == "hol":
        k = int(order.k)
        return 2.0 * math.pi * (-1.0) ** (k // 2) * sp.jv(k - 1, 4.0 * math.pi * xs)
    return np.array([kernel(order, float(x), method=method) for x in xs.ravel()]).reshape(xs.shape)


def hankel0_envelope(x: float) -> complex:
    """W(x) = sqrt(x) e^{-ix} H_0^(1)(x), so that Y_0(x) = Im(e^{ix} W(x)/sqrt(x))."""
    if not x > 0:
        raise DomainError("argument must be positive")
    # int_R e^{i x (cosh t - 1)} dt = pi i e^{-ix} H_0^(1)(x)
    val = hankel_type_integral(x, 0.0, phase_shift=x)
    return math.sqrt(x) * val / (math.pi * 1j)


def y0(x: float, *, method: str = "auto") -> float:
    """Bessel Y_0 for x > 0: series for x <= 12, envelope representation beyond."""
    if not x > 0:
        raise DomainError("Y_0 needs x > 0")
    if method == "auto":
        method = "series" if x <= Y0_SERIES_MAX else "envelope"
    if method == "series":
        return _y0_series(x)
    if method == "envelope":
        w = hankel0_envelope(x)
        return (cmath.exp(1j * x) * w / math.sqrt(x)).imag
    raise ParameterError(f"unknown method {method!r}")


def kernel_bound_check(order: KernelOrder, x: float, *, eps: float = 0.05) -> dict:
    """Measured kernel size against the small-x / large-x envelopes.

    Small x (4 pi x <= 1 + 4t^2): (1+|t|)^eps (x^eps + x^-eps).  Beyond: x^{-1/2}.
    """
    t = order.r if order.kind != "hol" else float(order.k - 1) / 2.0
    val = kernel(order, x)
    if 4.0 * math.pi * x <= 1.0 + 4.0 * t * t:
        env = (1.0 + abs(t)) ** eps * (x ** eps + x ** (-eps))
        branch = "small"
    else:
        env = x ** -0.5
        branch = "large"
    return {"kind": order.kind, "t": t, "x": x, "measured": abs(val), "envelope": env,
            "ratio": abs(val) / env, "branch": branch}
