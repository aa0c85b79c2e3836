"""Exact arithmetic: Kloosterman and Ramanujan sums, GL(3) coefficients, Voronoi series.

The two identity checks compare, coefficient by coefficient, a double sum
of Voronoi series (written out through their absolutely convergent Kloosterman
expansions) with its collapsed right-hand side.  Everything except the final
complex powers is exact integer arithmetic plus cosines of rationals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .complexfn import (ContourSpec, g_plusminus, hurwitz_zeta, _sign_value)
from .errors import DomainError, ParameterError, PoleError
from .mellin import MellinValue
from .quad import adaptive_gl

TWO_PI = 2.0 * math.pi


# ------------------------------------------------------------------ elementary

@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple:
    if n < 1:
        raise ParameterError("factorize needs n >= 1")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return tuple(sorted(ds))


def num_divisors(n: int) -> int:
    return len(divisors(n))


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def units(c: int) -> list:
    return [d for d in range(c) if math.gcd(d, c) == 1] if c > 1 else [0]


def e_frac(num: int, den: int) -> complex:
    """e(num/den) with the fraction reduced mod 1 first (exact argument)."""
    k = num % den
    return cmath.exp(2j * math.pi * k / den)


# ------------------------------------------------------------------ sums

@lru_cache(maxsize=200_000)
def _kloosterman_reduced(m: int, n: int, c: int) -> float:
    if c == 1:
        return 1.0
    terms = []
    for d in units(c):
        dbar = pow(d, -1, c)
        terms.append(math.cos(2.0 * math.pi * ((m * d + n * dbar) % c) / c))
    return math.fsum(terms)


def kloosterman(m: int, n: int, c: int) -> float:
    """S(m, n; c) = sum over d in (Z/c)^x of e((m d + n dbar)/c); real by d <-> -d."""
    c = int(c)
    if c < 1:
        raise ParameterError("Kloosterman modulus must be >= 1")
    return _kloosterman_reduced(int(m) % c, int(n) % c, c)


def kloosterman_table(m_max: int, n_max: int, c: int) -> np.ndarray:
    """S(m, n; c) for 1 <= m <= m_max, 1 <= n <= n_max as an array indexed [m-1, n-1]."""
    c = int(c)
    if c < 1:
        raise ParameterError("Kloosterman modulus must be >= 1")
    if c == 1:
        return np.ones((m_max, n_max))
    d = np.array(units(c))
    dbar = np.array([pow(int(x), -1, c) for x in d])
    m = np.arange(1, m_max + 1)[:, None]
    n = np.arange(1, n_max + 1)[:, None]
    em = np.exp(2j * np.pi * ((m * d[None, :]) % c) / c)
    en = np.exp(2j * np.pi * ((n * dbar[None, :]) % c) / c)
    return (em @ en.T).real


def kloosterman_direct(m: int, n: int, c: int) -> complex:
    """Complex exponential sum, no symmetry used (test oracle)."""
    if c == 1:
        return 1.0 + 0j
    return sum(e_frac(m * d + n * pow(d, -1, c), c) for d in units(c))


def weil_bound(m: int, n: int, c: int) -> float:
    return num_divisors(c) * math.sqrt(math.gcd(math.gcd(m, n), c)) * math.sqrt(c)


def ramanujan_sum(c: int, n: int) -> int:
    """c_c(n) = sum_{d | (c, n)} d mu(c/d), exact."""
    if c < 1:
        raise ParameterError("Ramanujan sum modulus must be >= 1")
    g = math.gcd(c, n) if n != 0 else c
    return sum(d * mobius(c // d) for d in divisors(g))


def ramanujan_direct(c: int, n: int) -> float:
    """sum over d in (Z/c)^x of e(dn/c), as a float."""
    return math.fsum(math.cos(2.0 * math.pi * ((d * n) % c) / c) for d in units(c))


def divisor_eigenvalue(n: int, t: float) -> float:
    """lambda(n, t) = sum_{ab = n} a^{it} b^{-it} (real)."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    return math.fsum(math.cos(t * math.log(a / (n // a))) for a in divisors(n))


# ------------------------------------------------------------------ GL(3) data

@dataclass
class GL3Coefficients:
    """Finite table A(m, n), 1 <= m <= m_max, 1 <= n <= n_max, plus spectral parameters."""
    A: np.ndarray
    mu: tuple = (0j, 0j, 0j)
    self_dual: bool = False
    t_g: Optional[float] = None

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=complex)
        if self.A.ndim != 2 or self.A.shape[0] < 2 or self.A.shape[1] < 2:
            raise ParameterError("A must be a 2-d table indexed from 1")
        self.mu = tuple(complex(m) for m in self.mu)
        if abs(sum(self.mu)) > 1e-12:
            raise ParameterError("spectral parameters must sum to zero")
        if self.self_dual and self.t_g is not None:
            want = (2j * self.t_g, 0j, -2j * self.t_g)
            if max(abs(a - b) for a, b in zip(self.mu, want)) > 1e-12:
                raise ParameterError("self-dual parameters must be (2it_g, 0, -2it_g)")

    @property
    def m_max(self) -> int:
        return self.A.shape[0] - 1

    @property
    def n_max(self) -> int:
        return self.A.shape[1] - 1

    def __call__(self, m: int, n: int) -> complex:
        if not (1 <= m <= self.m_max and 1 <= n <= self.n_max):
            raise DomainError(f"A({m},{n}) outside the stored table")
        return complex(self.A[m, n])

    def max_abs(self) -> float:
        return float(np.abs(self.A[1:, 1:]).max())


def random_coefficients(m_max: int, n_max: int, seed: int, mu=(0, 0, 0)) -> GL3Coefficients:
    """Arbitrary coefficients, uniform in the complex unit disc."""
    rng = np.random.default_rng(seed)
    rad = np.sqrt(rng.random((m_max + 1, n_max + 1)))
    ang = rng.random((m_max + 1, n_max + 1)) * 2.0 * math.pi
    A = rad * np.exp(1j * ang)
    A[0, :] = 0
    A[:, 0] = 0
    return GL3Coefficients(A, mu)


def gl3_from_rank1(a1n: Sequence[complex], an1: Sequence[complex], mu=(0, 0, 0),
                   self_dual: bool = False, t_g: Optional[float] = None) -> GL3Coefficients:
    """A(l, n) = sum_{d | (l, n)} mu(d) A(l/d, 1) A(1, n/d).

    a1n[i] and an1[i] hold A(1, i+1) and A(i+1, 1); both start with 1.
    """
    a1n = [complex(v) for v in a1n]
    an1 = [complex(v) for v in an1]
    if abs(a1n[0] - 1) > 0 or abs(an1[0] - 1) > 0:
        raise ParameterError("A(1,1) must equal 1")
    L, N = len(an1), len(a1n)
    A = np.zeros((L + 1, N + 1), dtype=complex)
    for l in range(1, L + 1):
        for n in range(1, N + 1):
            A[l, n] = sum(mobius(d) * an1[l // d - 1] * a1n[n // d - 1]
                          for d in divisors(math.gcd(l, n)))
    return GL3Coefficients(A, mu, self_dual, t_g)


def hecke_relation_deviation(coeffs: GL3Coefficients) -> float:
    A = coeffs.A
    dev = 0.0
    for l in range(1, coeffs.m_max + 1):
        for n in range(1, coeffs.n_max + 1):
            rhs = sum(mobius(d) * A[l // d, 1] * A[1, n // d] for d in divisors(math.gcd(l, n)))
            dev = max(dev, abs(A[l, n] - rhs))
    return dev


# ------------------------------------------------------------------ Voronoi series

@dataclass(frozen=True)
class VoronoiTruncation:
    n2_max: int
    tail_bound: float = 0.0


def xi_f_coefficient(c: int, d: int, sign, ell: int, n1: int, n2: int, w: complex) -> complex:
    """Coefficient of A(n2, n1) in Xi_F(c, +-d, ell; -w):

        c S(d ell, +-n2; c ell/n1) (n2 n1^2/(c^3 ell))^w / (n2 n1),   n1 | c ell.
    """
    sg = _sign_value(sign)
    q = c * ell
    if q % n1:
        return 0j
    S = kloosterman(d * ell, sg * n2, q // n1)
    return c * S * cmath.exp(w * math.log(n2 * n1 * n1 / (c ** 3 * ell))) / (n2 * n1)


def phi_hurwitz(c: int, d: int, w: complex) -> complex:
    """Phi(c, d; w) = sum_m e(dm/c) m^{-w} = c^{-w} sum_{b=1}^{c} e(db/c) zeta(w, b/c)."""
    if c == 1 and abs(w - 1) < 1e-8:
        raise PoleError("Phi(1, d; w) has a pole at w = 1")
    acc = 0j
    for b in range(1, c + 1):
        acc += e_frac(d * b, c) * hurwitz_zeta(w, b / c if b < c else 1.0)
    return cmath.exp(-w * math.log(c)) * acc


def _check_region(kind: str, w: complex, continuation: bool):
    u = w.real
    if kind in ("Phi", "Phi_F") and u <= 1 and not (continuation and kind == "Phi"):
        raise DomainError(f"{kind} series diverges for Re w <= 1")
    if kind in ("Xi", "Xi_F") and u >= 0 and not (continuation and kind == "Xi"):
        raise DomainError(f"{kind} series diverges for Re w >= 0")


def voronoi_series(kind: str, w, trunc: Optional[VoronoiTruncation] = None, *,
                   c: int = 1, d: int = 0, ell: int = 1, sign=1,
                   coeffs: Optional[GL3Coefficients] = None, method: str = "auto",
                   continuation: bool = False) -> MellinValue:
    """Evaluate Phi_F(c,d,ell;w), Xi_F(c,+-d,ell;-w), Phi(c,d;w) or Xi(c,+-d;-w).

    Phi and Xi go through Hurwitz zeta values (exact up to rounding; with
    continuation=True also outside the half plane of absolute convergence);
    method="direct" sums Phi term by term.  The GL(3) kinds are truncated at
    trunc.n2_max with a tail bound from the Weil bound and max |A|.
    """
    w = complex(w)
    sg = _sign_value(sign)
    if kind not in ("Phi", "Xi", "Phi_F", "Xi_F"):
        raise ParameterError(f"unknown Voronoi kind {kind!r}")
    _check_region(kind, w, continuation)
    if c > 1 and math.gcd(d, c) != 1:
        raise ParameterError("d must be a unit mod c")

    if kind == "Phi":
        if method == "direct":
            if trunc is None:
                raise ParameterError("direct summation needs a truncation")
            N = trunc.n2_max
            terms = [e_frac(d * m, c) * cmath.exp(-w * math.log(m)) for m in range(1, N + 1)]
            val = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
            u = w.real
            tail = N ** (1 - u) / (u - 1)
            return MellinValue(val, tail)
        val = phi_hurwitz(c, d, w)
        return MellinValue(val, 1e-12 * max(1.0, abs(val)))

    if kind == "Xi":
        acc = 0j
        for b in range(c):
            acc += e_frac(sg * b * d, c) * phi_hurwitz(c, b, 1 - w)
        val = cmath.exp(-w * math.log(c)) * acc
        return MellinValue(val, 1e-12 * c * max(1.0, abs(val)))

    if coeffs is None or trunc is None:
        raise ParameterError("GL(3) Voronoi series need coefficients and a truncation")
    N = min(trunc.n2_max, coeffs.n_max if kind == "Phi_F" else coeffs.m_max)
    amax = coeffs.max_abs()
    u = w.real
    if kind == "Phi_F":
        if ell > coeffs.m_max:
            raise DomainError("ell outside the coefficient table")
        acc = 0j
        for n in range(1, N + 1):
            acc += coeffs.A[ell, n] * cmath.exp(-w * math.log(n)) * e_frac(n * pow(d, -1, c) if c > 1 else 0, c)
        tail = amax * N ** (1 - u) / (u - 1)
        return MellinValue(acc, tail)

    # Xi_F
    q = c * ell
    acc = 0j
    tail = 0.0
    for n1 in divisors(q):
        if n1 > coeffs.n_max:
            raise DomainError("n1 outside the coefficient table")
        mod = q // n1
        for n2 in range(1, N + 1):
            acc += coeffs.A[n2, n1] * xi_f_coefficient(c, d, sg, ell, n1, n2, w)
        # |S| <= tau(q) sqrt(q) sqrt(gcd) <= tau(q) q ; sum_{n2 > N} n2^{u-1} <= N^u / |u|
        tail += (c * amax / n1 * num_divisors(mod) * mod
                 * (n1 * n1 / (c ** 3 * ell)) ** u * N ** u / abs(u))
    return MellinValue(acc, tail)


def voronoi_functional_equation_gap(c: int, d: int, w: complex) -> float:
    """|Phi(c,d;w) - sum_{+-} G^{-+}(1-w) Xi(c,+-d;-w)| (GL(1) Voronoi)."""
    w = complex(w)
    lhs = voronoi_series("Phi", w, c=c, d=d, continuation=True).value
    rhs = 0j
    for sg in (1, -1):
        xi = voronoi_series("Xi", w, c=c, d=d, sign=sg, continuation=True).value
        rhs += g_plusminus(1 - w, -sg) * xi
    return abs(lhs - rhs)


# ------------------------------------------------------------------ identity checks

@lru_cache(maxsize=256)
def _sum_xif_kernel(ell: int, sg: int, n2_max: int):
    """For each c | ell: sum_d e(d/c) S(d ell/c, sg n2; ell/n1) as array [n1 index, n2]."""
    n1s = divisors(ell)
    out = {}
    for c in divisors(ell):
        arr = np.zeros((len(n1s), n2_max + 1), dtype=complex)
        for i, n1 in enumerate(n1s):
            mod = ell // n1
            for n2 in range(1, n2_max + 1):
                arr[i, n2] = sum(e_frac(d, c) * kloosterman(d * (ell // c), sg * n2, mod)
                                 for d in units(c))
        out[c] = arr
    return n1s, out


def check_sumXiF(ell: int, w, sign, coeffs: GL3Coefficients, *, n2_max: Optional[int] = None,
                 statement: str = "corrected") -> dict:
    """Coefficientwise check of the twisted sum of Xi_F over c | ell.

    Left: sum_{c | ell} c^{2w-1} sum_{d (c)^x} e(d/c) Xi_F(c, +-d, ell/c; -w), expanded in
    A(n2, n1).  Right ("corrected"): ell^{1-w} [n1 = 1] n2^{w-1} e(-+n2/ell);
    "printed" drops the ell^{-w}.
    """
    w = complex(w)
    sg = _sign_value(sign)
    if statement not in ("corrected", "printed"):
        raise ParameterError("statement must be 'corrected' or 'printed'")
    N = n2_max or min(coeffs.m_max, 12)
    n1s, ker = _sum_xif_kernel(ell, sg, N)
    if max(n1s) > coeffs.n_max or N > coeffs.m_max:
        raise DomainError("coefficient table too small for this check")
    n2 = np.arange(1, N + 1)
    lhs = np.zeros((len(n1s), N), dtype=complex)
    for c in divisors(ell):
        lc = ell // c
        for i, n1 in enumerate(n1s):
            # c^{2w-1} * c * (n2 n1^2/(c^3 (ell/c)))^w / (n2 n1)
            pw = np.exp(w * np.log(n2 * n1 * n1 / (c ** 3 * lc)))
            lhs[i] += (cmath.exp((2 * w - 1) * math.log(c)) * c * pw / (n2 * n1)) * ker[c][i, 1:]
    rhs = np.zeros_like(lhs)
    pref = cmath.exp((1 - w) * math.log(ell)) if statement == "corrected" else ell
    rhs[0] = pref * np.exp((w - 1) * np.log(n2)) * np.exp(-2j * math.pi * sg * (n2 % ell) / ell)
    A = np.array([[coeffs.A[m, n1] for m in n2] for n1 in n1s])
    dl, dr = lhs * A, rhs * A
    dev = np.abs(dl - dr)
    scale = max(float(np.abs(dr).max()), 1e-300)
    return {
        "ell": ell, "w": w, "sign": sg, "statement": statement, "n2_max": N,
        "max_abs_deviation": float(dev.max()),
        "max_rel_deviation": float(dev.max()) / scale,
        "series_deviation": abs(dl.sum() - dr.sum()) / max(abs(dr.sum()), 1e-300),
        "max_coeff_n1_gt1": float(np.abs(lhs[1:]).max()) if len(n1s) > 1 else 0.0,
        "n_checked": int(dev.size),
    }


@lru_cache(maxsize=256)
def _sum_xixif_kernel(ell: int, s1: int, s2: int, n2_max: int):
    """B[c][m_old mod c, n1 index, n2] = sum_d sum_b e(s1 b d/c) e(b m/c) S(d ell/c, s2 n2; ell/n1)."""
    n1s = divisors(ell)
    out = {}
    for c in divisors(ell):
        S = np.zeros((c, len(n1s), n2_max + 1))
        for d in units(c):
            for i, n1 in enumerate(n1s):
                for n2 in range(1, n2_max + 1):
                    S_val = kloosterman(d * (ell // c), s2 * n2, ell // n1)
                    S[d % c, i, n2] = S_val
        B = np.zeros((c, len(n1s), n2_max + 1), dtype=complex)
        for m in range(c):
            for d in units(c):
                bsum = sum(e_frac(s1 * b * d + b * m, c) for b in range(c))
                B[m] += bsum * S[d % c]
        out[c] = B
    return n1s, out


def check_sumXiXiF(ell: int, w1, w2, signs, coeffs: GL3Coefficients, *,
                   m_max: Optional[int] = None, n2_max: Optional[int] = None,
                   grouping: str = "frequency") -> dict:
    """Coefficientwise check of the double Voronoi sum against Kloosterman sums.

    Left: sum_{c | ell} c^{2w2-1} sum_d Xi(c, +-1 d; -w1) Xi_F(c, +-2 d, ell/c; -w2),
    with Xi(c, +-d; -w1) = c^{-w1} sum_b e(+-bd/c) sum_m e(bm/c) m^{w1-1}.
    Right: ell^{1-w1-w2} A(n2,n1) m^{w1-1} n2^{w2-1} n1^{2w2-1} S(m, -+1 +-2 n2; ell/n1).

    The c-th left term in its Dirichlet variable m' is a series in the common
    frequency m = m' ell/c (since c^{-w1} m'^{w1-1} = ell^{1-w1} m^{w1-1}/c);
    grouping="frequency" compares at that m, grouping="raw" at m = m'.
    """
    w1, w2 = complex(w1), complex(w2)
    s1, s2 = (_sign_value(x) for x in signs)
    M = m_max or 12
    N = n2_max or min(coeffs.m_max, 10)
    n1s, ker = _sum_xixif_kernel(ell, s1, s2, N)
    if max(n1s) > coeffs.n_max or N > coeffs.m_max:
        raise DomainError("coefficient table too small for this check")
    n2 = np.arange(1, N + 1)
    lhs = np.zeros((M + 1, len(n1s), N), dtype=complex)
    for c in divisors(ell):
        lc = ell // c
        pre_c = cmath.exp((2 * w2 - 1) * math.log(c) - w1 * math.log(c)) * c
        m_old_max = M * c // ell if grouping == "frequency" else M
        for mo in range(1, m_old_max + 1):
            m = mo * lc if grouping == "frequency" else mo
            if m > M:
                continue
            for i, n1 in enumerate(n1s):
                pw = np.exp(w2 * np.log(n2 * n1 * n1 / (c ** 3 * lc)))
                lhs[m, i] += (pre_c * cmath.exp((w1 - 1) * math.log(mo))
                              * pw / (n2 * n1) * ker[c][mo % c, i, 1:])
    rhs = np.zeros_like(lhs)
    pre = cmath.exp((1 - w1 - w2) * math.log(ell))
    ks = -s1 * s2
    for m in range(1, M + 1):
        for i, n1 in enumerate(n1s):
            Sv = np.array([kloosterman(m, ks * v, ell // n1) for v in n2])
            rhs[m, i] = (pre * cmath.exp((w1 - 1) * math.log(m)) * np.exp((w2 - 1) * np.log(n2))
                         * cmath.exp((2 * w2 - 1) * math.log(n1)) * Sv)
    A = np.array([[coeffs.A[v, n1] for v in n2] for n1 in n1s])[None, :, :]
    dl, dr = lhs[1:] * A, rhs[1:] * A
    dev = np.abs(dl - dr)
    scale = max(float(np.abs(dr).max()), 1e-300)
    return {
        "ell": ell, "w1": w1, "w2": w2, "signs": (s1, s2), "grouping": grouping,
        "m_max": M, "n2_max": N,
        "max_abs_deviation": float(dev.max()),
        "max_rel_deviation": float(dev.max()) / scale,
        "mismatches": int((dev > 1e-9 * scale).sum()),
        "n_checked": int(dev.size),
    }


# ------------------------------------------------------------------ analytic reciprocity

def analytic_reciprocity(y: float, sign, contour: Optional[ContourSpec] = None) -> MellinValue:
    """(1/2 pi i) int over the bent contour of G^{-+}(z) y^{-z} dz, which equals e(-+y).

    The contour runs up Re z = x0 for |Im z| >= 1 and detours through Re z = delta
    for |Im z| <= 1.  The error estimate adds the tail |Im z| > height, bounded
    with Stirling's |Gamma(x0 + i tau)| <= sqrt(2 pi) |tau|^{x0 - 1/2} e^{-pi|tau|/2} (|tau| >= 1).
    """
    contour = contour or ContourSpec(x0=-3.5, height=4000.0)
    if not contour.x0 < -0.5:
        raise ParameterError("the bent contour needs x0 < -1/2")
    if abs(contour.x0 - round(contour.x0)) < 1e-6:
        raise PoleError("x0 sits on a pole of G")
    sg = _sign_value(sign)
    ly = math.log(y)

    def integrand(z):
        return g_plusminus(z, -sg) * np.exp(-z * ly)

    x0, dl, H = contour.x0, contour.delta, contour.height
    pieces = [
        (lambda t: integrand(x0 + 1j * t) * 1j, -H, -1.0),
        (lambda t: integrand(t - 1j) * 1.0, x0, dl),
        (lambda t: integrand(dl + 1j * t) * 1j, -1.0, 1.0),
        (lambda t: -integrand(t + 1j) * 1.0, x0, dl),
        (lambda t: integrand(x0 + 1j * t) * 1j, 1.0, H),
    ]
    total = 0j
    err = 0.0
    for f, a, b in pieces:
        freq = abs(math.log(max(H, 2.0) / (2 * math.pi)) - ly) + 1.0
        panels = max(4, int(abs(b - a) * freq / 4.0))
        v, e = adaptive_gl(f, a, b, tol=1e-12, initial_panels=panels)
        total += v
        err += e
    # tail: |G(x0+it)| y^{-x0} <= (2 pi)^{-x0} sqrt(2 pi) t^{x0-1/2} (the e^{+-pi t/2} cancels)
    tail = 2 * (2 * math.pi) ** (-x0) * math.sqrt(2 * math.pi) * H ** (x0 + 0.5) / abs(x0 + 0.5) * y ** (-x0)
    return MellinValue(total / (2j * math.pi), (err + tail) / (2 * math.pi))
