"""Mellin transforms of the spectral kernels and a numeric Mellin transform.

Closed forms (s = sigma + i tau):

    plus:  (2 pi)^{-s} Gamma(s/2 + ir) Gamma(s/2 - ir) cos(pi s/2)
    minus: (2 pi)^{-s} Gamma(s/2 + ir) Gamma(s/2 - ir) cosh(pi r)
    hol:   pi i^{-k} (2 pi)^{-s} Gamma((s+k-1)/2) / Gamma((1-s+k)/2)

The hol form is used as a ratio so that only the genuine poles at
s = 1 - k - 2l appear.  Everything is assembled in log space.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .besselkern import KernelOrder, kernel_values
from .complexfn import LOG_2PI, POLE_TOL, log_cos_pi_half, log_cosh, log_gamma
from .errors import NonConvergenceError, ParameterError, PoleError
from .quad import gl_rule, wynn_epsilon


@dataclass(frozen=True)
class MellinValue:
    value: complex
    error_estimate: float

    def __complex__(self):
        return complex(self.value)


# ------------------------------------------------------------------ closed forms

def _pole_distance_pm(s: complex, r: float) -> float:
    best = math.inf
    for eta in (1, -1):
        w = s / 2.0 - eta * 1j * r  # pole when w = -l
        if w.real <= 0.5:
            l = max(0, round(-w.real))
            best = min(best, abs(w + l) * 2.0)
    return best


def log_mellin_kernel(order: KernelOrder, s: complex) -> complex:
    """log of the kernel's Mellin transform (principal branch of each factor)."""
    s = complex(s)
    if order.kind == "hol":
        k = int(order.k)
        a = 0.5 * (s + k - 1)
        if a.real <= 0.5:
            l = max(0, round(-a.real))
            if abs(a + l) < 0.5 * POLE_TOL:
                raise PoleError(f"s = {s} is a pole of the holomorphic kernel transform")
        b = 0.5 * (1 - s + k)
        return (math.log(math.pi) - 0.5j * math.pi * k - s * LOG_2PI
                + log_gamma(a) - log_gamma(b, check_pole=False))
    r = order.r
    if _pole_distance_pm(s, r) < POLE_TOL:
        raise PoleError(f"s = {s} is a pole of the kernel transform")
    base = -s * LOG_2PI + log_gamma(s / 2 + 1j * r) + log_gamma(s / 2 - 1j * r)
    if order.kind == "plus":
        return base + log_cos_pi_half(s)
    return base + log_cosh(math.pi * r)


def mellin_kernel(order: KernelOrder, s) -> MellinValue:
    """Closed-form Mellin transform of the kernel at s."""
    s = complex(s)
    if order.kind == "hol":
        b = 0.5 * (1 - s + order.k)
        if b.real <= 0.5 and abs(b - round(b.real)) < 1e-14:
            return MellinValue(0j, 0.0)  # 1/Gamma vanishes
    lv = log_mellin_kernel(order, s)
    val = cmath.exp(lv)
    # rounding of the exponent: |d log| ~ eps * (|Im parts| + |s| log 2 pi)
    err = abs(val) * 1e-15 * (10.0 + abs(lv.imag) + abs(lv.real))
    return MellinValue(val, err)


def mellin_kernel_residue(order: KernelOrder, ell: int, which: int = 1) -> complex:
    """Residue of the kernel transform at its l-th pole.

    hol: pole s = 1 - k - 2l, residue (2 pi i)^{k+2l} / (Gamma(k+l) Gamma(l+1)).
    plus/minus: pole s = 2(which * i r - l); simple only for r != 0.
    """
    ell = int(ell)
    if ell < 0:
        raise PoleError("pole index must be nonnegative")
    if order.kind == "hol":
        k = int(order.k)
        # (2 pi i)^{k+2l} = (2 pi)^{k+2l} (-1)^{k/2 + l}
        sign = (-1) ** ((k // 2 + ell) % 2)
        return sign * math.exp((k + 2 * ell) * math.log(2 * math.pi)
                               - math.lgamma(k + ell) - math.lgamma(ell + 1)) + 0j
    r = order.r
    if abs(r) < 1e-12:
        raise PoleError("for r = 0 the poles are double; no simple residue")
    if which not in (1, -1):
        raise ParameterError("which must be +1 or -1")
    s0 = 2.0 * (which * 1j * r - ell)
    # Gamma(s/2 - which*ir) has the pole; its s-residue is 2 (-1)^l / l!
    lg = (-s0 * LOG_2PI + math.log(2.0) - math.lgamma(ell + 1)
          + log_gamma(2 * which * 1j * r - ell))
    if order.kind == "plus":
        lg += log_cos_pi_half(s0)
    else:
        lg += log_cosh(math.pi * r)
    return (-1) ** ell * cmath.exp(lg)


def mellin_kernel_pole(order: KernelOrder, ell: int, which: int = 1) -> complex:
    if order.kind == "hol":
        return complex(1 - order.k - 2 * ell)
    return 2.0 * (which * 1j * order.r - ell)


# ------------------------------------------------------------------ numeric

@dataclass
class MellinHints:
    """Shape information for numeric_mellin.

    scale: x where the function changes character (start of log panels).
    log_frequency: oscillation rate of f in log x as x -> 0.
    x_frequency: angular frequency of f in x as x -> infinity (0: no oscillation).
    wynn_start: x from which half-period panels with Wynn extrapolation are used.
    x_max: optional hard right end; with it set, oscillation is resolved by
        panel width alone and no extrapolation is done.
    """
    scale: float = 1.0
    log_frequency: float = 0.0
    x_frequency: float = 0.0
    wynn_start: Optional[float] = None
    x_max: Optional[float] = None
    wynn_terms: int = 40
    floor: float = 1e-17
    max_log_span: float = 400.0


def numeric_mellin(f: Callable[[np.ndarray], np.ndarray], s, hints: Optional[MellinHints] = None):
    """int_0^inf f(x) x^{s-1} dx by Gauss-Legendre panels on the log axis.

    Near 0 and for non-oscillatory decay the integrand is integrated in
    u = log x; an oscillatory tail (hints.x_frequency > 0) is summed over
    half periods and extrapolated with Wynn's epsilon.  s may be a scalar
    or a sequence; all s values share the function evaluations.
    Returns a MellinValue (or a list of them).
    """
    hints = hints or MellinHints()
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    tau_max = float(np.abs(s_arr.imag).max())
    n = 20
    xg, wg = gl_rule(n)
    xh, wh = gl_rule(n // 2)
    omega_x = hints.x_frequency
    u_scale = math.log(hints.scale)

    def width(u):
        x = math.exp(u)
        return min(0.5, 5.0 / (tau_max + hints.log_frequency + omega_x * x + 1.0))

    total = np.zeros(s_arr.size, dtype=complex)
    err = np.zeros(s_arr.size)
    absint = np.zeros(s_arr.size)

    def do_panel(lo, hi, logaxis=True):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes = np.concatenate([mid + half * xg, mid + half * xh])
        if logaxis:
            x = np.exp(nodes)
            fx = np.asarray(f(x), dtype=complex)
            # integrand f(x) x^s du
            kern = np.exp(np.outer(s_arr, nodes))
        else:
            x = nodes
            fx = np.asarray(f(x), dtype=complex)
            kern = np.exp(np.outer(s_arr - 1.0, np.log(x)))
        vals = kern * fx[None, :]
        vf = vals[:, :n] @ (half * wg)
        vc = vals[:, n:] @ (half * wh)
        sc = np.abs(vals[:, :n]) @ (half * wg)
        diff = np.abs(vf - vc)
        scs = np.maximum(sc, 1e-300)
        e = np.maximum(scs * np.minimum(1.0, (200.0 * diff / scs) ** 1.5), 200 * 2.2e-16 * scs)
        return vf, e, sc

    # left part: u from log(scale) down to -inf
    peak = [0.0]  # running max of panel magnitudes (per unit log length)
    u = u_scale
    span = 0.0
    quiet = 0
    while True:
        w = width(u)
        lo, hi = u - w, u
        vf, e, sc = do_panel(lo, hi)
        total += vf; err += e; absint += sc
        peak[0] = max(peak[0], float(sc.max()) / w)
        # decay test uses sigma_min (slowest decay towards 0)
        tail_mag = float(sc.max()) / w
        if tail_mag < hints.floor * peak[0]:
            quiet += 1
        else:
            quiet = 0
        u = lo
        span = u_scale - u
        if quiet >= 3 and span > 2.0:
            break
        if span > hints.max_log_span:
            raise NonConvergenceError("numeric_mellin: integrand does not decay as x -> 0")

    # right part: Wynn-accelerated half periods only for an unbounded oscillatory tail
    if omega_x > 0 and hints.x_max is None:
        x_w = hints.wynn_start if hints.wynn_start is not None else max(
            2.0 * hints.scale, 3.0 * tau_max / omega_x, 1.0)
        u = u_scale
        u_end = math.log(x_w)
        while u < u_end - 1e-15:
            w = min(width(u), u_end - u)
            vf, e, sc = do_panel(u, u + w)
            total += vf; err += e; absint += sc
            u += w
        half_period = math.pi / omega_x
        partial = [np.zeros(s_arr.size, dtype=complex)]
        x0 = x_w
        run = np.zeros(s_arr.size, dtype=complex)
        for j in range(hints.wynn_terms):
            vf, e, sc = do_panel(x0 + j * half_period, x0 + (j + 1) * half_period, logaxis=False)
            run = run + vf
            err += e
            absint += sc
            partial.append(run.copy())
        partial = np.array(partial)  # (terms+1, n_s)
        for i in range(s_arr.size):
            est, we = wynn_epsilon(list(partial[:, i]))
            total[i] += est
            err[i] += we
    else:
        quiet = 0
        u = u_scale
        x_max = hints.x_max
        while True:
            w = width(u)
            if x_max is not None:
                w = min(w, math.log(x_max) - u)
                if w <= 1e-15:
                    break
            vf, e, sc = do_panel(u, u + w)
            total += vf; err += e; absint += sc
            tail_mag = float(sc.max()) / w
            peak[0] = max(peak[0], tail_mag)
            quiet = quiet + 1 if tail_mag < hints.floor * peak[0] else 0
            u += w
            if x_max is None and quiet >= 3:
                break
            if u - u_scale > hints.max_log_span:
                raise NonConvergenceError("numeric_mellin: integrand does not decay as x -> inf")

    out = [MellinValue(complex(v), float(e)) for v, e in zip(total, err)]
    return out[0] if scalar else out


# ------------------------------------------------------------------ kernel oracle

def kernel_hints(order: KernelOrder) -> MellinHints:
    if order.kind == "hol":
        k = int(order.k)
        return MellinHints(scale=max(1.0, k) / (4 * math.pi), x_frequency=4 * math.pi)
    r = abs(order.r)
    scale = (1.0 + 2.0 * r) / (4.0 * math.pi)
    if order.kind == "plus":
        return MellinHints(scale=scale, log_frequency=2.0 * r, x_frequency=4 * math.pi,
                           wynn_start=max(2.0 * scale, 1.0))
    return MellinHints(scale=scale, log_frequency=2.0 * r)


def kernel_mellin_numeric(order: KernelOrder, s, *, route: str = "auto"):
    """Numeric Mellin transform of a kernel, independent of the gamma closed forms.

    route "real": quadrature of the kernel itself on the real axis.
    route "companion" (plus/minus only): the plus kernel splits into two Hankel
    halves analytic in opposite half planes.  Turning each half onto the
    imaginary axis turns it into the K-Bessel function that makes up the minus
    kernel, which gives

        M[J^+](s) / M[J^-](s) = cos(pi s/2) / cosh(pi r).

    For |tau| < 2|r| the real-axis plus integral is a tiny number produced by
    massive cancellation, while the minus integral is well conditioned; for
    |tau| > 2|r| the roles swap.  The companion route computes one kernel's
    transform from the other's real-axis quadrature.  "auto" keeps, per s, the
    candidate with the smaller relative error estimate.
    """
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    routes = []
    if route in ("auto", "real"):
        f = lambda x: kernel_values(order, x)
        routes.append(numeric_mellin(f, list(s_arr), kernel_hints(order)))
    if route in ("auto", "companion") and order.kind != "hol":
        other = KernelOrder("minus" if order.kind == "plus" else "plus", order.r)
        g = lambda x: kernel_values(other, x)
        mo = numeric_mellin(g, list(s_arr), kernel_hints(other))
        comp = []
        for sv, mv in zip(s_arr, mo):
            log_ratio = log_cos_pi_half(sv) - log_cosh(math.pi * abs(order.r))
            if order.kind == "minus":
                log_ratio = -log_ratio
            fac = cmath.exp(log_ratio)
            comp.append(MellinValue(fac * mv.value, abs(fac) * mv.error_estimate))
        routes.append(comp)
    elif route == "companion":
        raise ParameterError("the companion route is for the plus/minus kernels")
    if not routes:
        raise ParameterError(f"unknown route {route!r}")
    out = []
    for i in range(s_arr.size):
        cands = [rt[i] for rt in routes]
        out.append(min(cands, key=lambda m: m.error_estimate / max(abs(m.value), 1e-300)))
    return out[0] if scalar else out
