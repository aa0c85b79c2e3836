"""Oscillatory integrals int A(v) e(phi(v)) dv, the AFE weights and the cubic-phase integral.

e(z) = exp(2 pi i z).  Panels are sized from the local phase speed |phi'|
and, near stationary points, from |phi''|^{-1/2}; Gauss-Legendre panels
are then refined adaptively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .complexfn import afe_gamma_ratio, _eps_value
from .errors import DomainError, NonConvergenceError, ParameterError
from .quad import adaptive_gl, panel_nodes


def bump(v):
    """Omega(v) = exp(1 - 1/(1 - v^2)) on |v| < 1, zero outside; Omega(0) = 1."""
    v = np.asarray(v, dtype=float)
    inside = np.abs(v) < 1.0
    out = np.zeros(v.shape)
    vi = v[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - vi * vi))
    return out


@dataclass(frozen=True)
class PhaseSpec:
    """phi with derivative oracles and the amplitude A (optionally A') on [a, b].

    All callables are vectorised over numpy arrays.
    """

    phase: Callable[[np.ndarray], np.ndarray]
    dphase: Callable[[np.ndarray], np.ndarray]
    amplitude: Callable[[np.ndarray], np.ndarray]
    interval: tuple[float, float]
    ddphase: Optional[Callable[[np.ndarray], np.ndarray]] = None
    dddphase: Optional[Callable[[np.ndarray], np.ndarray]] = None
    damplitude: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        a, b = self.interval
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ParameterError("interval must be finite with a < b")

    def oracle_pairs(self) -> list:
        """(function, claimed derivative, name) for every supplied oracle."""
        pairs = [(self.phase, self.dphase, "dphase")]
        if self.ddphase is not None:
            pairs.append((self.dphase, self.ddphase, "ddphase"))
            if self.dddphase is not None:
                pairs.append((self.ddphase, self.dddphase, "dddphase"))
        if self.damplitude is not None:
            pairs.append((self.amplitude, self.damplitude, "damplitude"))
        return pairs

    def check_oracles(self, n_points: int = 17, rtol: float = 1e-6) -> float:
        """Compare each derivative oracle with a five-point central difference.

        Returns the worst relative deviation; raises NonConvergenceError above rtol.
        """
        a, b = self.interval
        h = 1e-3 * (b - a)
        v = np.linspace(a + 2 * h, b - 2 * h, n_points)
        worst = 0.0
        for f, df, name in self.oracle_pairs():
            fd = (f(v - 2 * h) - 8 * f(v - h) + 8 * f(v + h) - f(v + 2 * h)) / (12 * h)
            claimed = np.asarray(df(v))
            scale = np.max(np.abs(claimed)) + np.max(np.abs(f(v))) / (b - a) + 1e-300
            dev = float(np.max(np.abs(fd - claimed)) / scale)
            worst = max(worst, dev)
            if dev > rtol:
                raise NonConvergenceError(f"derivative oracle {name} disagrees with finite "
                                          f"differences (relative deviation {dev:.2e})")
        return worst


@dataclass(frozen=True)
class OscillatoryResult:
    value: complex
    error_estimate: float
    stationary_points: tuple
    n_panels: int


def stationary_points(spec: PhaseSpec, n_grid: int = 4001) -> list:
    """Zeros of phi' on the interval: sign changes on a grid, refined by Brent's method."""
    a, b = spec.interval
    v = np.linspace(a, b, n_grid)
    d = np.asarray(spec.dphase(v), dtype=float)
    pts = [float(v[i]) for i in np.nonzero(d == 0.0)[0]]
    for i in np.nonzero(d[:-1] * d[1:] < 0)[0]:
        pts.append(brentq(lambda u: float(spec.dphase(np.array([u]))[0]), v[i], v[i + 1],
                          xtol=1e-14))
    return sorted(pts)


def phase_panels(spec: PhaseSpec, cycles: float = 1.0, h_max: Optional[float] = None) -> np.ndarray:
    """Panel edges with about `cycles` oscillations per panel.

    Local width cycles / (|phi'| + |phi''|^{1/2}); stationary points are edges.
    """
    a, b = spec.interval
    h_max = h_max or (b - a) / 16.0
    stops = [a] + [p for p in stationary_points(spec) if a < p < b] + [b]
    edges = [a]
    for lo, hi in zip(stops[:-1], stops[1:]):
        v = lo
        while v < hi:
            x = np.array([v])
            speed = abs(float(spec.dphase(x)[0]))
            if spec.ddphase is not None:
                speed += math.sqrt(abs(float(spec.ddphase(x)[0])))
            w = min(h_max, cycles / speed) if speed > 0 else h_max
            v = min(hi, v + w)
            edges.append(v)
    return np.array(edges)


def oscillatory_quad(spec: PhaseSpec, tol: float = 1e-10, *, max_panels: int = 200000) -> OscillatoryResult:
    """int_a^b A(v) e(phi(v)) dv.

    The derivative oracles are checked against finite differences first, since
    the panel layout trusts them.
    """
    spec.check_oracles()
    edges = phase_panels(spec)

    def f(v):
        return spec.amplitude(v) * np.exp(2j * math.pi * spec.phase(v))

    val, err = adaptive_gl(f, edges[0], edges[-1], tol=tol, edges=list(edges),
                           max_panels=max_panels)
    return OscillatoryResult(complex(val), float(err), tuple(stationary_points(spec)), len(edges) - 1)


def integrate_by_parts(spec: PhaseSpec, tol: float = 1e-10) -> OscillatoryResult:
    """-int e(phi) (A / (2 pi i phi'))' dv.

    Equal to the original integral when A vanishes at both ends and phi' has no zero.
    """
    if spec.ddphase is None or spec.damplitude is None:
        raise ParameterError("integration by parts needs ddphase and damplitude oracles")
    if no_stationary_bound(spec) == 0.0:
        raise DomainError("dphase vanishes on the interval")

    def new_amp(v):
        d1 = spec.dphase(v)
        return -(spec.damplitude(v) / d1 - spec.amplitude(v) * spec.ddphase(v) / d1 ** 2) \
            / (2j * math.pi)

    return oscillatory_quad(PhaseSpec(spec.phase, spec.dphase, new_amp, spec.interval,
                                      spec.ddphase, spec.dddphase), tol)


def no_stationary_bound(spec: PhaseSpec) -> float:
    """min |phi'| on the interval (grid estimate); large values mean the integral is negligible."""
    a, b = spec.interval
    v = np.linspace(a, b, 4001)
    return float(np.min(np.abs(spec.dphase(v))))


# ------------------------------------------------------------------ AFE weights

@dataclass(frozen=True)
class AFEWeight:
    value: float
    imag_residual: float
    error_estimate: float


def afe_weight(x, t: float, eps, t_g: float, X: float, *, sign: int = 1,
               sigma: float = 1.0) -> list:
    """V^pm(x, t, eps) = (1/2 pi i) int_(sigma) e^{s^2} (X^{pm1}/x)^s G(1/2+s)/G(1/2) ds/s.

    Vectorised over x; the e^{s^2} factor cuts the contour at |tau| = 9 + sigma.
    """
    if not sigma > 0:
        raise DomainError("the contour must lie right of the pole at s = 0")
    _eps_value(eps)
    if sign not in (1, -1):
        raise ParameterError("sign must be +1 or -1")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise DomainError("x must be positive")
    lx = math.log(X) * sign - np.log(xs)
    speed = float(np.abs(lx).max()) + 3.0 * math.log(1.0 + 4.0 * t_g + abs(t)) + 1.0
    tau_max = 9.0 + sigma
    n_pan = int(math.ceil(2 * tau_max / min(0.5, 4.0 / speed)))
    edges = np.linspace(-tau_max, tau_max, n_pan + 1)
    out = []
    nodes = {}
    for n in (20, 10):
        tau, w = panel_nodes(edges, n)
        s = sigma + 1j * tau
        base = np.exp(s * s) * afe_gamma_ratio(s, t, eps, t_g) / s * w / (2 * math.pi)
        nodes[n] = (s, base)
    for lxv in lx:
        vf = complex(np.exp(nodes[20][0] * lxv) @ nodes[20][1])
        vc = complex(np.exp(nodes[10][0] * lxv) @ nodes[10][1])
        # cancellation: the integrand can be far larger than the result
        rnd = 4e-16 * float(np.abs(np.exp(nodes[20][0] * lxv) * nodes[20][1]).sum())
        out.append(AFEWeight(vf.real, abs(vf.imag), abs(vf - vc) + rnd + 1e-15 * abs(vf)))
    return out


def afe_decay_envelope(x, X: float, U: float, t_g: float, sigma: float, sign: int = 1):
    """(X^{pm1} U t_g^2 / x)^sigma."""
    xs = np.asarray(x, dtype=float)
    return (X ** sign * U * t_g ** 2 / xs) ** sigma


# ------------------------------------------------------------------ cubic phase integral

@dataclass(frozen=True)
class StatIntegralResult:
    value: float
    error_estimate: float
    bound: float
    x_range: tuple
    stationary_x: float


def bump_nodes(speed: float):
    """Trapezoid nodes on [-1, 1] for int Omega(v) e(phase) dv with |phase'| <= speed.

    Omega is smooth with compact support, so the trapezoid error is the aliased
    Fourier coefficient of Omega at 1/h - speed; a margin of 120 keeps that near 1e-14.
    """
    n = int(math.ceil(2 * (abs(speed) + 120.0)))
    v = np.linspace(-1.0, 1.0, n + 1)
    return v, np.full(v.shape, 2.0 / n)


def cubic_phase_inner(x, t: float, t_g: float, U: float, c: float, v_nodes=None) -> np.ndarray:
    """I(x) = int e(v a(x) - v^3 b(x)) Omega(v) dv with
    a = t/U - 2 pi^2 t_g x/(U c), b = pi^4 t_g x/(3 U^3 c)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    a = t / U - 2 * math.pi ** 2 * t_g * xs / (U * c)
    b = math.pi ** 4 * t_g * xs / (3 * U ** 3 * c)
    if v_nodes is None:
        v_nodes = bump_nodes(float(np.max(np.abs(a) + 3 * b)))
    v, w = v_nodes
    amp = bump(v) * w
    out = np.empty(xs.shape, dtype=complex)
    for i0 in range(0, xs.size, 256):
        ph = np.outer(a[i0:i0 + 256], v) - np.outer(b[i0:i0 + 256], v ** 3)
        out[i0:i0 + 256] = np.exp(2j * math.pi * ph) @ amp
    return out


# |int Omega(v) e(a v) dv| < 5e-13 once |a| >= 80
_BUMP_CUTOFF = 80.0


def stat_integral(t: float, t_g: float, U: float, c: float, *, eps: float = 0.05,
                  x_range: Optional[tuple] = None, tol: float = 1e-5) -> StatIntegralResult:
    """int over x in [t_g^-eps, t_g^eps] of |I(x)|, with I from cubic_phase_inner.

    Only x with -80 <= a(x) <= 3 b(x) + 80 can carry a stationary point of
    v a - v^3 b (or come close enough to one to matter), so the integral is
    taken over that window; the rest contributes below 5e-13 per unit x.
    The bound returned for comparison is t_g^{-1/2+eps} U^{-1/2}.
    """
    if not (t_g > 1 and U > 0 and c > 0):
        raise ParameterError("need t_g > 1, U > 0, c > 0")
    lo, hi = x_range if x_range is not None else (t_g ** -eps, t_g ** eps)
    slope = 2 * math.pi ** 2 * t_g / (U * c)  # -da/dx
    b_hi = math.pi ** 4 * t_g * hi / (3 * U ** 3 * c)
    x0 = t * c / (2 * math.pi ** 2 * t_g)  # a(x0) = 0
    w_lo = max(lo, x0 - (3 * b_hi + _BUMP_CUTOFF) / slope)
    w_hi = min(hi, x0 + _BUMP_CUTOFF / slope)
    tail = _BUMP_CUTOFF * 1e-14 * (hi - lo)
    bound = t_g ** (-0.5 + eps) * U ** -0.5
    if w_lo >= w_hi:
        return StatIntegralResult(0.0, tail, bound, (lo, hi), x0)
    v_nodes = bump_nodes(_BUMP_CUTOFF + 6 * b_hi)
    # |I| oscillates with up to `slope` cycles per unit x
    n0 = int(min(20000, max(16, math.ceil((w_hi - w_lo) * slope))))
    val, err = adaptive_gl(lambda x: np.abs(cubic_phase_inner(x, t, t_g, U, c, v_nodes)),
                           w_lo, w_hi, tol=tol, initial_panels=n0, max_panels=200000)
    return StatIntegralResult(float(val.real), float(err) + tail, bound, (lo, hi), x0)
