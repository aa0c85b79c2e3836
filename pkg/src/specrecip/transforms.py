"""Spectral test functions and the transforms between the two sides.

The spectral measure is d_spec r = r tanh(pi r) / (2 pi^2) dr on the real
line.  For a test function h on the spectral side

    N^pm h   = int h(r) d_spec r
    K^pm h(x) = int J_r^pm(x) h(r) d_spec r
    N^hol h  = sum_{k even} (k-1)/(2 pi^2) h(k)
    K^hol h(x) = sum_{k even} (k-1)/(2 pi^2) J_k^hol(x) h(k)

and for a function H on (0, inf) the inverse direction is

    L^pm H(t)   = int_0^inf J_t^pm(x) H(x) dx/x
    L^hol H(k)  = int_0^inf J_k^hol(x) H(x) dx/x.

Three families of test functions are provided (see ``make_triple``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special as sp

from .besselkern import KernelOrder, kernel_values
from .complexfn import LOG_2PI, log_cosh, log_gamma
from .errors import DomainError, ParameterError
from .mellin import MellinHints, MellinValue, numeric_mellin
from .quad import GL_ORDER, panel_nodes

TWO_PI2 = 2.0 * math.pi ** 2
LOG_FLOOR = 46.0  # e^-46 ~ 1e-20: where a log-concave bump is treated as zero


def spectral_density(r):
    """r tanh(pi r) / (2 pi^2)."""
    r = np.asarray(r, dtype=float)
    return r * np.tanh(math.pi * r) / TWO_PI2


def _log_poly_factor(t: np.ndarray, M: int, T: float) -> np.ndarray:
    """log prod_{j<=M} ((t^2 + (j-1/2)^2)/T^2)^2 for real t."""
    t2 = np.asarray(t, dtype=float) ** 2
    out = np.zeros_like(t2)
    for j in range(1, M + 1):
        out += 2.0 * np.log((t2 + (j - 0.5) ** 2) / (T * T))
    return out


# ------------------------------------------------------------------ H^+ closed forms

def _lgamma_ratio_poly(j: int, M: int, r) -> np.ndarray:
    """Gamma(M + 2ir)/Gamma(1 + j + 2ir) as the rising product (1+j+2ir)...(M-1+2ir)."""
    z = 2j * np.asarray(r, dtype=float)
    out = np.ones_like(z)
    for m in range(1 + j, M):
        out = out * (m + z)
    return out


def l_plus_hplus_closed(r, M: int, T: float) -> np.ndarray:
    """L^+ H^+(r) for H^+(x) = sinh^{M-1}(1/T)(4 pi x)^M exp(-4 pi x sinh(1/T)).

    Finite sum over j < M of the binomial-weighted terms; the gamma ratio
    is a polynomial in r so the value is exact up to rounding.  At r = 0
    the odd numerator is divided by sinh(pi r) through its derivative.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    a = 1.0 / T
    sech = 1.0 / math.cosh(a)
    pref = math.tanh(a) ** (M - 1) * sech
    num = np.zeros(r.shape)
    dnum0 = 0.0
    for j in range(M):
        c = ((-1) ** j * math.comb(M - 1, j) * math.exp(math.lgamma(M + j) - math.lgamma(M))
             * 2.0 ** (-j) * math.exp(-j * a) * sech ** j)
        p = _lgamma_ratio_poly(j, M, r)
        num += c * (np.exp(-2j * r * a) * p).imag
        p0 = math.prod(range(1 + j, M))  # p(0)
        dnum0 += c * p0 * (-2.0 * a + sum(2.0 / m for m in range(1 + j, M)))
    small = np.abs(r) < 1e-7
    rr = np.where(small, 1.0, r)
    val = -2.0 * math.pi * pref * num / np.sinh(math.pi * rr)
    val0 = -2.0 * math.pi * pref * dnum0 / math.pi
    return np.where(small, val0, val)


def l_hol_hplus_closed(k, M: int, T: float) -> np.ndarray:
    """L^hol H^+(k) for even k >= 2, by the finite sum over j < M.

    i^k L^hol H^+(k) = 2 pi sinh^{M-1}(1/T) e^{-k/T} sum_j (-1)^j C(M-1,j)
        (M-1+j)! (k-2+M)! / ((M-1)! (k-1+j)!) 2^{-j} e^{-(j-1)/T} cosh^{-(M+j)}(1/T).
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    a = 1.0 / T
    lsh = math.log(math.sinh(a))
    lch = math.log(math.cosh(a))
    total = np.zeros(k.shape)
    for j in range(M):
        lw = (sp.gammaln(M + j) - sp.gammaln(M) + sp.gammaln(k - 1 + M) - sp.gammaln(k + j)
              - j * math.log(2.0) - (j - 1) * a - (M + j) * lch + (M - 1) * lsh - k * a)
        total += (-1) ** j * math.comb(M - 1, j) * np.exp(lw)
    ik = np.where((k.astype(int) // 2) % 2 == 0, 1.0, -1.0)  # i^{-k} for even k
    return 2.0 * math.pi * ik * total


# ------------------------------------------------------------------ test functions

@dataclass(frozen=True)
class TestFunctionTriple:
    """A triple (h^+, h^-, h^hol) of spectral test functions.

    kind "gaussian-minus": h^- = e^{-t^2/T^2} prod_{j<=M} ((t^2+(j-1/2)^2)/T^2)^2,
        h^+ = h^hol = 0.
    kind "hplus": h^+ = L^+ H^+, h^hol = L^hol H^+, h^- = 0 with
        H^+(x) = sinh^{M-1}(1/T)(4 pi x)^M e^{-4 pi x sinh(1/T)}.
    kind "shifted-minus": h^- = sum_pm e^{-(t pm T)^2/U^2} times the same
        polynomial factor, h^+ = h^hol = 0.
    """

    __test__ = False  # not a pytest class

    kind: str
    M: int
    T: float
    U: Optional[float] = None

    def __post_init__(self):
        if self.kind not in TRIPLE_KINDS:
            raise ParameterError(f"unknown triple kind {self.kind!r}")
        if int(self.M) != self.M or self.M < 1:
            raise ParameterError("M must be a positive integer")
        if not (math.isfinite(self.T) and self.T > 0):
            raise ParameterError("T must be positive")
        if self.kind == "shifted-minus":
            if self.U is None or not (self.U > 0):
                raise ParameterError("the shifted family needs U > 0")
            if self.U > self.T:
                raise ParameterError("the shifted family needs U <= T")

    # -- which components are present
    @property
    def has_plus(self) -> bool:
        return self.kind == "hplus"

    @property
    def has_minus(self) -> bool:
        return self.kind != "hplus"

    def log_h_minus(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "hplus":
            return np.full(t.shape, -np.inf)
        poly = _log_poly_factor(t, self.M, self.T)
        if self.kind == "gaussian-minus":
            return poly - (t / self.T) ** 2
        U = self.U
        a = -((t - self.T) / U) ** 2
        b = -((t + self.T) / U) ** 2
        return poly + np.logaddexp(a, b)

    def h_minus(self, t) -> np.ndarray:
        return np.exp(self.log_h_minus(t))

    def h_plus(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.kind != "hplus":
            return np.zeros(r.shape)
        return l_plus_hplus_closed(r, self.M, self.T).reshape(r.shape)

    def h_hol(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        if self.kind != "hplus":
            return np.zeros(k.shape)
        return l_hol_hplus_closed(k, self.M, self.T).reshape(k.shape)

    def H_plus(self, x):
        """H^+(x); accepts complex x (used by the rotated route)."""
        x = np.asarray(x)
        if self.kind != "hplus":
            return np.zeros(x.shape)
        a = math.sinh(1.0 / self.T)
        return a ** (self.M - 1) * (4 * math.pi * x) ** self.M * np.exp(-4 * math.pi * a * x)

    def mellin_H_plus(self, s):
        """4 pi (4 pi sinh(1/T))^{-s-1} Gamma(s+M)."""
        s = np.asarray(s, dtype=complex)
        if self.kind != "hplus":
            return np.zeros(s.shape, dtype=complex)
        la = math.log(4 * math.pi * math.sinh(1.0 / self.T))
        return np.exp(math.log(4 * math.pi) - (s + 1) * la + log_gamma(s + self.M))

    def minus_support(self) -> tuple[float, float]:
        """Interval of t >= 0 outside which h^- is below e^-46 of its peak."""
        if self.kind == "hplus":
            return (0.0, 0.0)
        hi_guess = self.T * (math.sqrt(2.0 * self.M) + 12.0) + 12.0 * (self.U or 0.0)
        grid = np.linspace(0.0, hi_guess, 40001)
        lh = self.log_h_minus(grid)
        keep = np.nonzero(lh > lh.max() - LOG_FLOOR)[0]
        step = grid[1] - grid[0]
        return (max(0.0, grid[keep[0]] - step), grid[keep[-1]] + step)

    def plus_support(self) -> float:
        """r beyond which h^+ (of size e^{-pi r} r^{M-1}) is negligible."""
        return 30.0 + 2.0 * self.M

    def hol_cutoff(self) -> int:
        """Even k beyond which h^hol (of size (k/T)^{M-1} e^{-k/T}) is negligible."""
        k = int(self.T * (self.M + 60.0)) + 2
        return k + (k % 2)


TRIPLE_KINDS = ("gaussian-minus", "hplus", "shifted-minus")
TRIPLE_ALIASES = {"triple1": "gaussian-minus", "triple2": "hplus", "triple4": "shifted-minus"}


def make_triple(kind: str, M: int, T: float, U: Optional[float] = None) -> TestFunctionTriple:
    """Build a test-function triple; kind accepts the short names triple1/2/4 too."""
    kind = TRIPLE_ALIASES.get(kind, kind)
    return TestFunctionTriple(kind, int(M), float(T), None if U is None else float(U))


# ------------------------------------------------------------------ N and K transforms

def _r_nodes(lo: float, hi: float, width: float = 0.5, n: int = GL_ORDER):
    n_pan = max(1, int(math.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, n_pan + 1)
    return panel_nodes(edges, n)


def _graded_r_nodes(lo: float, hi: float, r_a: float, r_b: float, w0: float = 0.5,
                    w_max: float = 4.0):
    """GL-20 panels of width w0 on [r_a, r_b], widening to w_max away from it.

    A panel at distance d from [r_a, r_b] has width at most 0.8 d, which keeps
    it clear of the near-singularities at r = |tau|/2 - i sigma/2 (w0 <= sigma);
    near r = 0 the poles of tanh(pi r) at +-i/2 keep the width at w0.
    """
    def width(r):
        d = max(0.0, r_a - r, r - r_b)
        if r < 2.0:
            d = 0.0
        return min(w_max, max(w0, 0.8 * d))
    edges = [lo]
    while edges[-1] < hi:
        r = edges[-1]
        edges.append(min(hi, r + width(r)))
    return panel_nodes(np.array(edges))


def _r_integral(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                width: float = 0.5) -> MellinValue:
    """int_lo^hi f(r) dr with GL-20 vs GL-10 panel error estimate."""
    xf, wf = _r_nodes(lo, hi, width)
    xc, wc = _r_nodes(lo, hi, width, GL_ORDER // 2)
    vf = np.asarray(f(xf)) @ wf
    vc = np.asarray(f(xc)) @ wc
    scale = np.abs(np.asarray(f(xf))) @ np.abs(wf)
    err = abs(vf - vc) + 1e-15 * scale
    return MellinValue(complex(vf), float(err))


def spectral_measure_integral(h: Callable, support: tuple[float, float]) -> MellinValue:
    """N h = int_R h(r) d_spec r for an even h negligible outside |r| in support."""
    lo, hi = support
    v = _r_integral(lambda r: 2.0 * h(r) * spectral_density(r), lo, hi)
    return MellinValue(v.value.real, v.error_estimate)


def n_hol(h_hol: Callable, k_max: int) -> MellinValue:
    """N^hol h = sum over even k <= k_max of (k-1)/(2 pi^2) h(k)."""
    k = np.arange(2, k_max + 1, 2, dtype=float)
    terms = (k - 1) / TWO_PI2 * np.asarray(h_hol(k), dtype=float)
    tail = abs(terms[-8:]).sum() if terms.size else 0.0
    return MellinValue(math.fsum(terms), float(tail))


def triple_n_values(triple: TestFunctionTriple) -> dict:
    """N^+ h^+, N^- h^-, N^hol h^hol for a triple."""
    out = {}
    out["plus"] = (spectral_measure_integral(triple.h_plus, (0.0, triple.plus_support()))
                   if triple.has_plus else MellinValue(0.0, 0.0))
    out["minus"] = (spectral_measure_integral(triple.h_minus, triple.minus_support())
                    if triple.has_minus else MellinValue(0.0, 0.0))
    out["hol"] = (n_hol(triple.h_hol, triple.hol_cutoff())
                  if triple.has_plus else MellinValue(0.0, 0.0))
    return out


def k_transform(h: Callable, kind: str, x, *, support: Optional[tuple[float, float]] = None,
                k_max: Optional[int] = None, width: float = 0.5) -> np.ndarray:
    """K^pm h(x) (kind "plus"/"minus") or K^hol h(x) (kind "hol") on an array of x.

    For plus/minus, h must be even and negligible outside |r| in support;
    the r integral uses GL-20 panels of the given width.  For hol, the sum
    runs over even k <= k_max.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise DomainError("K transforms need x > 0")
    if kind == "hol":
        if k_max is None:
            raise ParameterError("k_max is required for the holomorphic transform")
        k = np.arange(2, k_max + 1, 2)
        w = (k - 1) / TWO_PI2 * np.asarray(h(k.astype(float)), dtype=float)
        sign = np.where((k // 2) % 2 == 0, 1.0, -1.0)
        J = sp.jv((k - 1)[:, None], 4 * math.pi * xs[None, :])
        return 2 * math.pi * ((w * sign) @ J)
    if kind not in ("plus", "minus"):
        raise ParameterError(f"unknown transform kind {kind!r}")
    if support is None:
        raise ParameterError("support is required for the plus/minus transforms")
    rn, rw = _r_nodes(support[0], support[1], width)
    weights = 2.0 * rw * spectral_density(rn) * np.asarray(h(rn), dtype=float)
    out = np.zeros(xs.shape)
    for r, w in zip(rn, weights):
        if w == 0.0:
            continue
        out += w * kernel_values(KernelOrder(kind, float(r)), xs)
    return out


def h_cosine_transform(triple: TestFunctionTriple, v) -> np.ndarray:
    """h_hat(v) = int_R h^-(r) cos(2 r v) d_spec r."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    lo, hi = triple.minus_support()
    rn, rw = _r_nodes(lo, hi, 0.25)
    w = 2.0 * rw * spectral_density(rn) * triple.h_minus(rn)
    out = np.empty(v.shape)
    for i0 in range(0, v.size, 512):
        vv = v[i0:i0 + 512]
        out[i0:i0 + 512] = np.cos(2.0 * np.outer(vv, rn)) @ w
    return out


def _cosine_v_max(triple: TestFunctionTriple) -> float:
    # h_hat decays like exp(-(2M+1) v); below e^-40 of h_hat(0) it is dropped
    return 40.0 / (2 * triple.M + 1) + 4.0 / triple.T


def h_minus_cosine_route(triple: TestFunctionTriple, x) -> np.ndarray:
    """H^- = K^- h^- through cosh(pi r) K_{2ir}(z) = int_0^inf cos(z sinh v) cos(2rv) dv.

    H^-(x) = 4 int_0^inf cos(4 pi x sinh v) h_hat(v) dv.  h_hat decays like
    e^{-(2M+1) v} because the polynomial factor cancels the first M poles
    of tanh(pi r).  Panels follow the local frequency 4 pi x cosh v.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    v_max = _cosine_v_max(triple)
    w0 = 0.25 / triple.T + 0.02
    out = np.empty(xs.shape)
    for i, xv in enumerate(xs):
        edges = [0.0]
        while edges[-1] < v_max:
            v = edges[-1]
            edges.append(min(v_max, v + min(w0, 4.0 / (4 * math.pi * xv * math.cosh(v) + 1e-300))))
        vn, vw = panel_nodes(np.array(edges))
        out[i] = 4.0 * (np.cos(4 * math.pi * xv * np.sinh(vn)) @ (h_cosine_transform(triple, vn) * vw))
    return out


def mellin_h_minus_cosine(triple: TestFunctionTriple, s) -> np.ndarray:
    """Mellin transform of H^- for 0 < Re s < 1 from the cosine representation.

    int_0^inf cos(a x) x^{s-1} dx = Gamma(s) cos(pi s/2) a^{-s} turns the
    transform into 4 Gamma(s) cos(pi s/2) int_0^inf h_hat(v) (4 pi sinh v)^{-s} dv.
    The v integral runs on log-v panels; below v_min h_hat is frozen at h_hat(0).
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any((s_arr.real <= 0) | (s_arr.real >= 1)):
        raise DomainError("the cosine route needs 0 < Re s < 1")
    tau_max = float(np.abs(s_arr.imag).max())
    v_max = _cosine_v_max(triple)
    u_min = -40.0 / (1.0 - float(s_arr.real.max()))
    width = min(0.25, 3.0 / (tau_max + 1.0))
    u_hi = math.log(v_max)
    edges = np.linspace(u_min, u_hi, int(math.ceil((u_hi - u_min) / width)) + 1)
    un, uw = panel_nodes(edges)
    vn = np.exp(un)
    weight = h_cosine_transform(triple, vn) * vn * uw
    lsh = np.log(4 * math.pi * np.sinh(vn))
    h0 = h_cosine_transform(triple, np.array([0.0]))[0]
    out = np.empty(s_arr.shape, dtype=complex)
    for i, sv in enumerate(s_arr.ravel()):
        head = h0 * np.exp(-sv * math.log(4 * math.pi) + (1 - sv) * u_min) / (1 - sv)
        body = np.exp(-sv * lsh) @ weight
        pref = cmath.exp(log_gamma(sv)) * cmath.cos(math.pi * sv / 2)
        out.flat[i] = 4.0 * pref * (body + head)
    return out


# ------------------------------------------------------------------ L transforms

def _hplus_hints(M: int, T: float) -> tuple[float, float]:
    a = 4 * math.pi * math.sinh(1.0 / T)
    scale = M / a
    x_max = (M * math.log(max(M, 2) * 10.0) + LOG_FLOOR + 20.0) / a + scale
    return scale, x_max


def l_transform(H: Callable, kind: str, arg, *, route: str = "real",
                scale: float = 1.0, x_max: Optional[float] = None) -> MellinValue:
    """L^pm H(arg) or L^hol H(k) by quadrature.

    route "real": int_0^inf J(x) H(x) dx/x on the real axis (GL panels in log x,
        resolving the kernel's e^{4 pi i x} oscillation up to x_max).
    route "rotated" (plus only, H analytic in Re x > 0, real on the axis and of
        at most polynomial growth along i R): the Hankel halves of J_r^+ are
        turned onto the imaginary axis, giving
            L^+ H(r) = (1/cosh pi r) int_0^inf J_r^-(y) Re H(iy) dy/y,
        which avoids the e^{-pi|r|} cancellation of the real-axis integral.
    """
    if kind == "hol":
        order = KernelOrder.hol(int(arg))
    elif kind in ("plus", "minus"):
        order = KernelOrder(kind, float(arg))
    else:
        raise ParameterError(f"unknown transform kind {kind!r}")
    if route == "real":
        hints = MellinHints(scale=scale, log_frequency=2.0 * abs(order.r),
                            x_frequency=4 * math.pi if kind != "minus" else 0.0, x_max=x_max)
        return numeric_mellin(lambda x: kernel_values(order, x) * H(x), 0.0, hints)
    if route == "rotated":
        if kind != "plus":
            raise ParameterError("the rotated route is only defined for the plus transform")
        r = float(arg)
        morder = KernelOrder.minus(r)
        hints = MellinHints(scale=(1.0 + 2.0 * abs(r)) / (4 * math.pi), log_frequency=2.0 * abs(r))
        v = numeric_mellin(lambda y: kernel_values(morder, y) * np.real(H(1j * y)), 0.0, hints)
        c = math.exp(-log_cosh(math.pi * r).real)
        return MellinValue(v.value * c, v.error_estimate * c)
    raise ParameterError(f"unknown route {route!r}")


def l_transform_hplus(triple: TestFunctionTriple, kind: str, arg, *, route: str = "auto") -> MellinValue:
    """L transform of the triple's H^+ by quadrature (auto: rotated for plus, real for hol)."""
    if triple.kind != "hplus":
        raise ParameterError("H^+ is only defined for the hplus family")
    if route == "auto":
        route = "rotated" if kind == "plus" else "real"
    scale, x_max = _hplus_hints(triple.M, triple.T)
    if route == "rotated":
        return l_transform(triple.H_plus, kind, arg, route="rotated")
    return l_transform(lambda x: triple.H_plus(x).real, kind, arg, route="real",
                       scale=scale, x_max=x_max)


# ------------------------------------------------------------------ Sears-Titchmarsh

@dataclass
class ReconstructionReport:
    x: np.ndarray
    target: np.ndarray
    reconstructed: np.ndarray
    plus_part: np.ndarray
    hol_part: np.ndarray
    max_rel_deviation: float
    mask_floor: float


def sears_titchmarsh_reconstruction(triple: TestFunctionTriple, x=None, *,
                                    floor: float = 1e-6, n_x: int = 40) -> ReconstructionReport:
    """Rebuild H^+ from its transforms: K^+ L^+ H^+ + K^hol L^hol H^+ = H^+.

    The relative deviation is measured where H^+ is at least floor times its peak.
    """
    if triple.kind != "hplus":
        raise ParameterError("reconstruction needs the hplus family")
    if x is None:
        a = 4 * math.pi * math.sinh(1.0 / triple.T)
        peak_x = triple.M / a
        # where x^M e^{-a x} drops to floor of its peak, on both sides
        grid = np.exp(np.linspace(math.log(peak_x) - 12, math.log(peak_x) + 4, 4000))
        lv = triple.M * np.log(grid) - a * grid
        inside = grid[lv >= lv.max() + math.log(floor)]
        x = np.exp(np.linspace(math.log(inside[0]), math.log(inside[-1]), n_x))
    x = np.asarray(x, dtype=float)
    target = triple.H_plus(x).real
    plus = k_transform(triple.h_plus, "plus", x, support=(0.0, triple.plus_support()), width=0.25)
    hol = k_transform(triple.h_hol, "hol", x, k_max=triple.hol_cutoff())
    rec = plus + hol
    mask = target >= floor * float(np.max(triple.H_plus(np.array([triple.M / (4 * math.pi * math.sinh(1 / triple.T))])).real))
    dev = np.abs(rec - target)[mask] / np.abs(target[mask])
    return ReconstructionReport(x, target, rec, plus, hol, float(dev.max()) if dev.size else 0.0, floor)


# ------------------------------------------------------------------ Mellin transform of H^-

def h_minus_mellin_envelope(triple: TestFunctionTriple, s) -> np.ndarray:
    """Size bound for the Mellin transform of H^- on Re s = sigma.

    gaussian-minus: T^{1+sigma} (1+|tau|)^{-M}.
    shifted-minus:  U T^sigma for |tau| <= T/U, times (|tau| U/T)^{-M/2} beyond.
    """
    s = np.asarray(s, dtype=complex)
    sig, tau = s.real, np.abs(s.imag)
    if triple.kind == "gaussian-minus":
        return triple.T ** (1.0 + sig) * (1.0 + tau) ** (-triple.M)
    if triple.kind == "shifted-minus":
        U, T = triple.U, triple.T
        base = U * T ** sig
        q = tau * U / T
        return np.where(q <= 1.0, base, base * np.maximum(q, 1.0) ** (-triple.M / 2.0))
    raise ParameterError("H^- vanishes for the hplus family")


def mellin_h_minus(triple: TestFunctionTriple, s, *, chunk: int = 256) -> np.ndarray:
    """Mellin transform of H^- = K^- h^- on 0 < Re s, as an array over s.

    Uses M[H^-](s) = int_R h^-(r) M[J_r^-](s) d_spec r with the gamma closed
    form of M[J_r^-].  The gamma factors are nearly singular at r = +-tau/2
    (distance sigma/2 from the axis), so panels have width 1/2 where r
    meets |tau|/2 for the requested s and widen away from there.  Callers
    with a wide tau range should pass it in chunks.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(s_arr.real <= 0):
        raise DomainError("the spectral route needs Re s > 0")
    if not triple.has_minus:
        return np.zeros(s_arr.shape, dtype=complex)
    lo, hi = triple.minus_support()
    tau = np.abs(s_arr.imag)
    w0 = min(0.5, float(s_arr.real.min()))
    # h^- varies on the scale T (U for the shifted family)
    w_max = max(4.0, 0.125 * (triple.U if triple.U is not None else triple.T))
    rn, rw = _graded_r_nodes(lo, hi, 0.5 * float(tau.min()), 0.5 * float(tau.max()), w0, w_max)
    lw = np.log(2.0 * rw * spectral_density(rn) + 1e-300) + triple.log_h_minus(rn)
    lc = log_cosh(math.pi * rn).real
    out = np.empty(s_arr.shape, dtype=complex)
    flat = s_arr.ravel()
    res = np.empty(flat.shape, dtype=complex)
    for i0 in range(0, flat.size, chunk):
        ss = flat[i0:i0 + chunk][:, None]
        lg = (-ss * LOG_2PI + log_gamma(ss / 2 + 1j * rn[None, :], check_pole=False)
              + log_gamma(ss / 2 - 1j * rn[None, :], check_pole=False) + (lc + lw)[None, :])
        res[i0:i0 + chunk] = np.exp(lg).sum(axis=1)
    out[...] = res.reshape(s_arr.shape)
    return out
