"""Complex special functions: log-gamma, gamma products, zeta functions.

Everything here works on Python complex scalars or numpy complex arrays.
Products of gamma functions are formed as sums of log-gammas and only
exponentiated at the end, so that arguments with large imaginary part
(|Im| in the thousands) neither overflow nor underflow prematurely.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, ParameterError, PoleError

ComplexLike = Union[complex, float, int, np.ndarray]

LOG_2PI = math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)
EULER_GAMMA = 0.57721566490153286061

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])

LOG_GAMMA_POLE_TOL = 1e-12
G_PM_POLE_TOL = 1e-10
POLE_TOL = 1e-8


@dataclass(frozen=True)
class ComplexPoint:
    """A complex number with explicit parts (the wire format for complex values)."""

    re: float
    im: float

    @classmethod
    def of(cls, z: complex) -> "ComplexPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def is_finite(self) -> bool:
        return math.isfinite(self.re) and math.isfinite(self.im)


@dataclass(frozen=True)
class ContourSpec:
    """Vertical-line (or bent) contour settings for Mellin-Barnes quadrature."""

    sigma: float = 0.5
    height: float = 200.0
    x0: float = -0.75
    delta: float = 0.25
    step: float = 0.05

    def __post_init__(self):
        if not self.height > 0:
            raise ParameterError("contour height must be positive")
        if not self.step > 0:
            raise ParameterError("contour step must be positive")
        if not self.delta > 0:
            raise ParameterError("detour delta must be positive")
        if not self.x0 < -0.5:
            raise ParameterError("detour abscissa x0 must lie left of -1/2")


def _wrap(out: np.ndarray, scalar: bool):
    return complex(np.asarray(out).reshape(-1)[0]) if scalar else out


def _nonpositive_integer_distance(z: np.ndarray) -> np.ndarray:
    n = np.round(z.real)
    d = np.abs(z - n)
    return np.where(n <= 0, d, np.inf)


def _lanczos(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2
    zm = z - 1.0
    a = np.full(zm.shape, _LANCZOS_COEF[0], dtype=complex)
    for k in range(1, len(_LANCZOS_COEF)):
        a = a + _LANCZOS_COEF[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return 0.5 * LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(a)


def _log_sin_pi_upper(z: np.ndarray) -> np.ndarray:
    # log sin(pi z) for Im z >= 0, continuous in the closed upper half-plane
    return (-math.log(2.0) + 0.5j * math.pi - 1j * math.pi * z
            + np.log1p(-np.exp(2j * math.pi * z)))


def log_gamma(z: ComplexLike, *, check_pole: bool = True) -> ComplexLike:
    """Principal branch of log Gamma(z) (branch cut along the negative real axis).

    Accepts scalars or arrays.  Raises PoleError within 1e-12 of a pole.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if check_pole and np.any(_nonpositive_integer_distance(z) < LOG_GAMMA_POLE_TOL):
        raise PoleError("log_gamma evaluated at a nonpositive integer")
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lanczos(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        upper = zl.imag >= 0
        w = np.where(upper, zl, np.conj(zl))
        # both pieces are continuous on the closed upper half-plane and agree
        # with the principal branch at Re z = 1/2, so no 2*pi*i shift is needed
        val = LOG_PI - _log_sin_pi_upper(w) - _lanczos(1.0 - w)
        out[left] = np.where(upper, val, np.conj(val))
    return _wrap(out, scalar)


def gamma(z: ComplexLike) -> ComplexLike:
    return np.exp(log_gamma(z))


def log_gamma_R(s: ComplexLike) -> ComplexLike:
    """log of Gamma_R(s) = pi^(-s/2) Gamma(s/2)."""
    s = np.asarray(s, dtype=complex)
    if np.any(_nonpositive_integer_distance(np.atleast_1d(s / 2.0)) < LOG_GAMMA_POLE_TOL):
        raise PoleError("Gamma_R has a pole at s = -2n")
    out = -0.5 * s * LOG_PI + log_gamma(s / 2.0)
    return complex(out) if np.ndim(out) == 0 else out


def gamma_R(s: ComplexLike) -> ComplexLike:
    """Gamma_R(s) = pi^(-s/2) Gamma(s/2)."""
    return np.exp(log_gamma_R(s))


def _log_G0(s):
    return log_gamma_R(s) - log_gamma_R(1.0 - s)


def _log_G1(s):
    return log_gamma_R(s + 1.0) - log_gamma_R(2.0 - s)


def G0(s: ComplexLike) -> ComplexLike:
    """Gamma_R(s)/Gamma_R(1-s) = 2(2 pi)^(-s) Gamma(s) cos(pi s/2)."""
    return np.exp(_log_G0(s))


def G1(s: ComplexLike) -> ComplexLike:
    """Gamma_R(1+s)/Gamma_R(2-s) = 2(2 pi)^(-s) Gamma(s) sin(pi s/2)."""
    return np.exp(_log_G1(s))


def _sign_value(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ParameterError(f"sign must be + or -, got {sign!r}")


def log_g_plusminus(s: ComplexLike, sign) -> ComplexLike:
    sg = _sign_value(sign)
    s = np.asarray(s, dtype=complex)
    if np.any(_nonpositive_integer_distance(np.atleast_1d(s)) < G_PM_POLE_TOL):
        raise PoleError("G^pm has a pole at s = -l")
    out = -s * LOG_2PI + log_gamma(s, check_pole=False) + sg * 0.5j * math.pi * s
    return complex(out) if np.ndim(out) == 0 else out


def g_plusminus(s: ComplexLike, sign) -> ComplexLike:
    """G^pm(s) = (2 pi)^(-s) Gamma(s) exp(+-i pi s/2)."""
    return np.exp(log_g_plusminus(s, sign))


def g_plusminus_residue(ell: int, sign) -> complex:
    """Residue of G^pm at s = -ell: (-1)^ell i^(-+ell) (2 pi)^ell / ell!.

    Gamma contributes (-1)^ell/ell!, the exponential contributes e^(-+i pi ell/2).
    """
    sg = _sign_value(sign)
    if ell < 0 or int(ell) != ell:
        raise DomainError("residue index must be a nonnegative integer")
    ell = int(ell)
    return (-1) ** ell * (1j) ** ((-sg * ell) % 4) * (2.0 * math.pi) ** ell / math.factorial(ell)


def _check_mu(mu: Sequence[complex]) -> np.ndarray:
    mu = np.asarray(mu, dtype=complex)
    if mu.shape != (3,):
        raise ParameterError("mu must be a triple")
    if abs(mu.sum()) > 1e-9 * (1.0 + np.abs(mu).max()):
        raise ParameterError("mu must sum to zero")
    if np.any(np.abs(mu.real) >= 0.5):
        raise ParameterError("Re(mu_j) must lie in (-1/2, 1/2)")
    return mu


def self_dual_mu(t_g: float) -> tuple:
    return (2j * t_g, 0j, -2j * t_g)


_EPS_TRIPLES = [(a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)]


def log_script_g_terms(s: ComplexLike, mu: Sequence[complex], sign):
    """Log of the four exponential terms whose sum is script G_mu^pm(s).

    script G^pm(s) = (2 pi)^(-3s) prod Gamma(s+mu_j) * sum_{prod eps = pm1}
    exp(i pi/2 * sum eps_j (s + mu_j)).  Returns an array with a trailing
    axis of length 4.
    """
    sg = _sign_value(sign)
    mu = _check_mu(mu)
    s = np.asarray(s, dtype=complex)
    z = s[..., None] + mu
    if np.any(_nonpositive_integer_distance(np.atleast_1d(z).ravel()) < POLE_TOL):
        raise PoleError("script G has a pole at s = -mu_j - l")
    base = -3.0 * s * LOG_2PI + log_gamma(z, check_pole=False).sum(axis=-1)
    terms = []
    for eps in _EPS_TRIPLES:
        if eps[0] * eps[1] * eps[2] != sg:
            continue
        e = np.asarray(eps, dtype=float)
        terms.append(base + 0.5j * math.pi * (z * e).sum(axis=-1))
    return np.stack(terms, axis=-1)


def logsumexp_complex(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """log(sum(exp(a))) for complex a, stable when real parts are large."""
    m = np.max(a.real, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    ssum = np.exp(a - m).sum(axis=axis)
    with np.errstate(divide="ignore"):
        return np.log(ssum) + np.squeeze(m, axis=axis)


def log_script_g(s: ComplexLike, mu: Sequence[complex], sign) -> ComplexLike:
    out = logsumexp_complex(log_script_g_terms(s, mu, sign))
    return complex(out) if np.ndim(out) == 0 else out


def script_g(s: ComplexLike, mu: Sequence[complex], sign) -> ComplexLike:
    """script G_mu^pm(s) = 1/2 prod G0(s+mu_j) +- 1/(2i) prod G1(s+mu_j)."""
    return np.exp(log_script_g(s, mu, sign))


def script_g_from_parts(s: complex, mu: Sequence[complex], sign) -> complex:
    """Direct composition from G0 and G1; overflows for large |Im|, used as a check."""
    sg = _sign_value(sign)
    mu = _check_mu(mu)
    z = complex(s) + mu
    p0 = np.prod([complex(G0(x)) for x in z])
    p1 = np.prod([complex(G1(x)) for x in z])
    return 0.5 * p0 + sg * p1 / 2j


# ---------------------------------------------------------------- zeta

def _bernoulli_even(n_terms: int) -> list:
    B = [Fraction(1)]
    for m in range(1, 2 * n_terms + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * B[k]
        B.append(-acc / (m + 1))
    return [float(B[2 * k]) for k in range(1, n_terms + 1)]


_B2K = _bernoulli_even(12)


def _fsum_complex(values) -> complex:
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


def _hurwitz_em(s: complex, a: float) -> complex:
    n_shift = max(15, int(math.ceil(abs(s.imag))))
    n = np.arange(n_shift, dtype=float) + a
    head = _fsum_complex(np.exp(-s * np.log(n)))
    x = n_shift + a
    logx = math.log(x)
    tail = [cmath.exp((1.0 - s) * logx) / (s - 1.0), 0.5 * cmath.exp(-s * logx)]
    # B_{2k}/(2k)! * s(s+1)...(s+2k-2) * x^(-s-2k+1)
    poch = s
    fact = 2.0
    for k, b in enumerate(_B2K, start=1):
        tail.append(b / fact * poch * cmath.exp((-s - 2 * k + 1) * logx))
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return head + _fsum_complex(tail)


_RATIONAL_DEN_MAX = 1000


def _as_fraction(a) -> Fraction | None:
    if isinstance(a, Fraction):
        return a
    if isinstance(a, int):
        return Fraction(a)
    f = Fraction(float(a)).limit_denominator(_RATIONAL_DEN_MAX)
    return f if abs(float(f) - float(a)) <= 1e-15 * max(1.0, abs(float(a))) else None


def hurwitz_zeta(s: complex, a) -> complex:
    """Hurwitz zeta(s, a) for a in (0, 1].

    Euler-Maclaurin summation with shift N = max(15, |Im s|) and 12 Bernoulli
    terms.  For Re s < 0 the direct sum cancels badly, so rational a = b/c
    (denominator up to 1000, which covers a = 1) goes through Hurwitz's
    finite formula; other a stay on Euler-Maclaurin, whose absolute error
    is then about 1e-16 * N^(1 - Re s).
    """
    s = complex(s)
    frac = _as_fraction(a)
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise DomainError("Hurwitz parameter a must lie in (0, 1]")
    if abs(s - 1.0) < POLE_TOL:
        raise PoleError("zeta has a pole at s = 1")
    if s.real >= 0.0 or frac is None:
        return _hurwitz_em(s, a)
    w = 1.0 - s
    c, b = frac.denominator, frac.numerator
    # zeta(1-w, b/c) = 2 Gamma(w) (2 pi c)^(-w) sum_j cos(pi w/2 - 2 pi j b/c) zeta(w, j/c)
    log_pref = math.log(2.0) + log_gamma(w) - w * math.log(2.0 * math.pi * c)
    acc = []
    for j in range(1, c + 1):
        phase = 0.5 * math.pi * w - 2.0 * math.pi * ((j * b) % c) / c
        # cos(phase) * Gamma(w) split into two exponentials to stay in range
        cos_g = 0.5 * (cmath.exp(log_pref + 1j * phase) + cmath.exp(log_pref - 1j * phase))
        acc.append(cos_g * _hurwitz_em(w, j / c))
    return _fsum_complex(acc)


def zeta(s: complex) -> complex:
    """Riemann zeta(s)."""
    return hurwitz_zeta(s, 1)


def hurwitz_zeta_direct(s: complex, a: float, n_terms: int) -> complex:
    """Plain truncated sum, for Re s > 1 only; used as a check."""
    n = np.arange(n_terms, dtype=float) + a
    return _fsum_complex(np.exp(-complex(s) * np.log(n)))


# ---------------------------------------------------------------- AFE gamma factor

def _eps_value(eps) -> int:
    if eps in (1, "+", "+1"):
        return 1
    if eps in (-1, "-", "-1"):
        return -1
    raise ParameterError("eps must be +1 or -1")


def log_afe_gamma_factor(s: ComplexLike, t: float, eps, t_g: float) -> ComplexLike:
    """log G(s, t, eps), the product of six Gamma_R factors."""
    e = _eps_value(eps)
    s = np.asarray(s, dtype=complex)
    base = s + 0.5 - 0.5 * e
    total = 0.0
    for pm in (1, -1):
        for shift in (2j * t_g, 0.0, -2j * t_g):
            total = total + log_gamma_R(base + pm * 1j * t + shift)
    return complex(total) if np.ndim(total) == 0 else total


def afe_gamma_factor(s: ComplexLike, t: float, eps, t_g: float) -> ComplexLike:
    return np.exp(log_afe_gamma_factor(s, t, eps, t_g))


def afe_gamma_ratio(s: ComplexLike, t: float, eps, t_g: float) -> ComplexLike:
    """G(1/2 + s, t, eps) / G(1/2, t, eps), formed in log space."""
    s = np.asarray(s, dtype=complex)
    out = np.exp(log_afe_gamma_factor(0.5 + s, t, eps, t_g)
                 - log_afe_gamma_factor(0.5, t, eps, t_g))
    return complex(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------- helpers

def log_cosh(x: ComplexLike) -> ComplexLike:
    """log cosh(x) for real or complex x with |Re x| large."""
    x = np.asarray(x, dtype=complex)
    flip = x.real < 0
    y = np.where(flip, -x, x)
    out = y - math.log(2.0) + np.log1p(np.exp(-2.0 * y))
    return complex(out) if np.ndim(out) == 0 else out


def log_sinh(x: ComplexLike) -> ComplexLike:
    """log sinh(x) for Re x > 0 (principal branch near the positive axis)."""
    x = np.asarray(x, dtype=complex)
    out = x - math.log(2.0) + np.log1p(-np.exp(-2.0 * x))
    return complex(out) if np.ndim(out) == 0 else out


def log_cos_pi_half(s: ComplexLike) -> ComplexLike:
    """log cos(pi s/2), stable for large |Im s|."""
    s = np.asarray(s, dtype=complex)
    upper = s.imag >= 0
    w = np.where(upper, s, np.conj(s))
    # cos(pi w/2) = e^{-i pi w/2}(1 + e^{i pi w})/2, |e^{i pi w}| <= 1 for Im w >= 0
    val = -0.5j * math.pi * w + np.log1p(np.exp(1j * math.pi * w)) - math.log(2.0)
    out = np.where(upper, val, np.conj(val))
    return complex(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def harmonic(n: int) -> float:
    return math.fsum(1.0 / k for k in range(1, n + 1))
