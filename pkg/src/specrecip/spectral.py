"""Spectral datasets and the two sides of the Kuznetsov formula.

A dataset is a CSV with header ``t_f,eps_f,l1_adf,lambda_1,...,lambda_N``,
optionally followed by named L-value columns (see EXTRA_COLUMNS).  Hecke
eigenvalues must be normalised so that 1/L(1, ad f) is the harmonic weight;
that contract cannot be checked here.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .arith import divisor_eigenvalue, kloosterman, num_divisors
from .complexfn import zeta
from .errors import ParameterError
from .quad import panel_nodes
from .reciprocity import big_h
from .transforms import (LOG_FLOOR, k_transform, make_triple, spectral_measure_integral,
                         TRIPLE_ALIASES, TRIPLE_KINDS)

BASE_COLUMNS = ("t_f", "eps_f", "l1_adf")
# optional per-form central values, needed by the moment weights
EXTRA_COLUMNS = ("l_half_f", "l_half_F_f", "l_half_adg_f")


class DatasetError(ParameterError):
    """Malformed or incomplete spectral data; the message names the record."""


@dataclass(frozen=True)
class SpectralRecord:
    t_f: float
    eps_f: int
    l1_adf: float
    lambdas: tuple
    extras: dict = field(default_factory=dict)

    def lam(self, n: int) -> float:
        if not 1 <= n <= len(self.lambdas):
            raise DatasetError(f"record t_f={self.t_f!r} has no lambda_{n}")
        return self.lambdas[n - 1]


@dataclass(frozen=True)
class SpectralDataset:
    records: tuple
    synthetic: bool = False
    source: str = ""

    def __post_init__(self):
        prev = 0.0
        for i, rec in enumerate(self.records):
            where = f"record {i + 1} (t_f={rec.t_f!r})"
            if not rec.t_f > prev:
                raise DatasetError(f"{where}: t_f must be positive and strictly increasing")
            if rec.eps_f not in (1, -1):
                raise DatasetError(f"{where}: eps_f must be +1 or -1")
            if not rec.l1_adf > 0:
                raise DatasetError(f"{where}: l1_adf must be positive")
            if not rec.lambdas or abs(rec.lambdas[0] - 1.0) > 1e-12:
                raise DatasetError(f"{where}: lambda_1 must equal 1")
            prev = rec.t_f

    @property
    def n_lambda(self) -> int:
        return min((len(r.lambdas) for r in self.records), default=0)

    def require(self, columns) -> None:
        """Raise DatasetError naming the first record that lacks one of the columns."""
        for i, rec in enumerate(self.records):
            for c in columns:
                if c not in rec.extras:
                    raise DatasetError(f"record {i + 1} (t_f={rec.t_f!r}) lacks {c}")


def _float(value: str, row: int, col: str) -> float:
    try:
        v = float(value)
    except ValueError:
        raise DatasetError(f"row {row}: column {col} is not a number: {value!r}") from None
    if not math.isfinite(v):
        raise DatasetError(f"row {row}: column {col} is not finite")
    return v


def load_dataset(path: str) -> SpectralDataset:
    with open(path, newline="") as fh:
        return parse_dataset(fh, source=path)


def parse_dataset(lines, source: str = "<text>") -> SpectralDataset:
    """Records from CSV text (a string or any iterable of lines)."""
    if isinstance(lines, str):
        lines = io.StringIO(lines)
    reader = csv.reader(lines)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DatasetError(f"{source}: empty file") from None
    if tuple(header[:3]) != BASE_COLUMNS:
        raise DatasetError(f"{source}: header must start with {','.join(BASE_COLUMNS)}")
    n_lam = 0
    while 3 + n_lam < len(header) and header[3 + n_lam] == f"lambda_{n_lam + 1}":
        n_lam += 1
    extras = header[3 + n_lam:]
    for e in extras:
        if e not in EXTRA_COLUMNS:
            raise DatasetError(f"{source}: unknown column {e!r}")
    records = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DatasetError(f"row {row_no}: expected {len(header)} fields, got {len(row)}")
        t_f = _float(row[0], row_no, "t_f")
        eps = _float(row[1], row_no, "eps_f")
        if eps not in (1.0, -1.0):
            raise DatasetError(f"row {row_no}: eps_f must be +1 or -1")
        lam = tuple(_float(v, row_no, f"lambda_{j + 1}") for j, v in enumerate(row[3:3 + n_lam]))
        ex = {name: _float(v, row_no, name) for name, v in zip(extras, row[3 + n_lam:])}
        records.append(SpectralRecord(t_f, int(eps), _float(row[2], row_no, "l1_adf"), lam, ex))
    return SpectralDataset(tuple(records), source=source)


def write_dataset(ds: SpectralDataset, path: str) -> None:
    n = ds.n_lambda
    extras = [c for c in EXTRA_COLUMNS if ds.records and all(c in r.extras for r in ds.records)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(BASE_COLUMNS) + [f"lambda_{j}" for j in range(1, n + 1)] + extras)
        for r in ds.records:
            w.writerow([repr(r.t_f), r.eps_f, repr(r.l1_adf)]
                       + [repr(x) for x in r.lambdas[:n]] + [repr(r.extras[c]) for c in extras])


def _hecke_from_angles(n_max: int, angles: dict) -> list:
    """lambda(n) from Satake angles: lambda(p^k) = U_k(cos theta_p), multiplicative."""
    lam = [0.0] * (n_max + 1)
    lam[1] = 1.0
    prime_power = {}
    for p, th in angles.items():
        a, b, k, q = 1.0, 2.0 * math.cos(th), 1, p
        while q <= n_max:
            prime_power[q] = b
            a, b = b, 2.0 * math.cos(th) * b - a
            k += 1
            q *= p
    for n in range(2, n_max + 1):
        m, val = n, 1.0
        for p in angles:
            if m % p == 0:
                q = 1
                while m % p == 0:
                    m //= p
                    q *= p
                val *= prime_power[q]
            if m == 1:
                break
        lam[n] = val
    return lam[1:]


def synthetic_dataset(n_records: int = 8, n_lambda: int = 12, seed: int = 0,
                      with_lvalues: bool = False) -> SpectralDataset:
    """Random but internally consistent records; NOT eigendata of any actual form.

    Eigenvalues come from random Satake angles (so they are Hecke-multiplicative
    and satisfy the Ramanujan bound), t_f is increasing, eps_f random.
    """
    if n_records < 0 or n_lambda < 1:
        raise ParameterError("need n_records >= 0 and n_lambda >= 1")
    rng = np.random.default_rng(seed)
    primes = [p for p in range(2, n_lambda + 1) if all(p % q for q in range(2, int(p ** 0.5) + 1))]
    t = 9.0
    records = []
    for _ in range(n_records):
        t += float(rng.uniform(0.5, 3.0))
        angles = {p: float(rng.uniform(0.0, math.pi)) for p in primes}
        lam = tuple(_hecke_from_angles(n_lambda, angles))
        extras = {}
        if with_lvalues:
            extras = {c: float(rng.uniform(0.1, 3.0)) for c in EXTRA_COLUMNS}
        records.append(SpectralRecord(t, int(rng.choice([-1, 1])), float(rng.uniform(0.3, 3.0)),
                                      lam, extras))
    return SpectralDataset(tuple(records), synthetic=True, source=f"synthetic(seed={seed})")


# ------------------------------------------------------------------ weights

@dataclass(frozen=True)
class WeightSpec:
    """Which spectral weight to evaluate.

    kind "kuznetsov": h^sign with m, n; family "gaussian" is exp(-t^2/T^2),
    otherwise the nonzero part (h^- if present, else h^+) of a test-function triple.
    kind "first"/"second": the two reciprocity moments (h^+ + h^- of a triple).
    kind "big_h": the L^4-norm expansion weight H(t) at t_g.
    """

    kind: str = "kuznetsov"
    sign: int = 1
    family: str = "gaussian"
    T: float = 5.0
    M: int = 4
    U: Optional[float] = None
    m: int = 1
    n: int = 1
    t_g: float = 10.0
    l1_adg: float = 1.0

    def __post_init__(self):
        if self.kind not in ("kuznetsov", "first", "second", "big_h"):
            raise ParameterError(f"unknown weight kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ParameterError("sign must be +1 or -1")
        if self.family != "gaussian" and self.family not in TRIPLE_KINDS + tuple(TRIPLE_ALIASES):
            raise ParameterError(f"unknown family {self.family!r}")
        if self.m < 1 or self.n < 1:
            raise ParameterError("m and n must be positive")
        if not (self.T > 0 and self.t_g > 0 and self.l1_adg > 0):
            raise ParameterError("T, t_g and l1_adg must be positive")
        if self.kind in ("first", "second") and self.family == "gaussian":
            raise ParameterError("moment weights need a test-function triple family")

    def required_columns(self) -> tuple:
        return {"kuznetsov": (), "first": ("l_half_F_f",), "second": ("l_half_f", "l_half_F_f"),
                "big_h": ("l_half_f", "l_half_adg_f")}[self.kind]

    def triple(self):
        return make_triple(self.family, self.M, self.T, self.U)

    def h_and_support(self) -> tuple[Callable, tuple]:
        """The even test function in t and an interval of |t| outside which it is negligible."""
        if self.kind == "big_h":
            return (lambda t: big_h(t, self.t_g)), (0.0, 2.0 * self.t_g + LOG_FLOOR / math.pi)
        if self.family == "gaussian":
            T = self.T
            return (lambda t: np.exp(-(np.asarray(t, dtype=float) / T) ** 2)), \
                (0.0, T * math.sqrt(LOG_FLOOR))
        tr = self.triple()
        if self.kind == "kuznetsov":
            # any even h holomorphic in the strip serves either sign; take the part the family has
            if tr.has_minus:
                return tr.h_minus, tr.minus_support()
            return tr.h_plus, (0.0, tr.plus_support())

        def h(t):
            out = np.zeros(np.shape(t))
            if tr.has_plus:
                out = out + tr.h_plus(t)
            if tr.has_minus:
                out = out + tr.h_minus(t)
            return out
        hi = max(tr.plus_support() if tr.has_plus else 0.0,
                 tr.minus_support()[1] if tr.has_minus else 0.0)
        return h, (0.0, hi)


def parse_weight(text: str) -> WeightSpec:
    """'kind[:key=value,...]', e.g. 'kuznetsov:sign=-1,family=gaussian,T=5,m=1,n=2'."""
    kind, _, rest = text.partition(":")
    kw = {}
    types = {"sign": int, "M": int, "m": int, "n": int, "T": float, "U": float,
             "t_g": float, "l1_adg": float, "family": str}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq or key not in types:
            raise ParameterError(f"bad weight parameter {item!r}")
        try:
            kw[key] = types[key](val.strip())
        except ValueError:
            raise ParameterError(f"bad value for {key}: {val!r}") from None
    return WeightSpec(kind=kind.strip(), **kw)


# ------------------------------------------------------------------ the two sides

@dataclass(frozen=True)
class SideValue:
    cusp: float
    continuous: Optional[float]
    total: Optional[float]
    error_estimate: float
    notes: tuple = ()


def _panels(lo: float, hi: float, width: float):
    n = max(1, int(math.ceil((hi - lo) / width)))
    return panel_nodes(np.linspace(lo, hi, n + 1), 20), panel_nodes(np.linspace(lo, hi, n + 1), 10)


def continuous_part(h: Callable, m: int, n: int, t_max: float, width: float = 0.5) -> tuple[float, float]:
    """(1/2 pi) int_R lambda(m,t) lambda(n,t) h(t) / |zeta(1+2it)|^2 dt for even h.

    The integrand vanishes like t^2 at t = 0 (pole of zeta at 1), so GL
    nodes never meet the singular point.
    """
    vals = []
    for t, w in _panels(0.0, t_max, width):
        f = np.array([divisor_eigenvalue(m, x) * divisor_eigenvalue(n, x) / abs(zeta(1 + 2j * x)) ** 2
                      for x in t]) * np.asarray(h(t), dtype=float)
        vals.append(float(f @ w) / math.pi)
    return vals[0], abs(vals[0] - vals[1]) + 1e-15 * abs(vals[0])


def spectral_side(ds: SpectralDataset, weight: WeightSpec, *, width: float = 0.5) -> SideValue:
    """Sum over the records of weight(t_f) x (eigenvalue or L-value products) / L(1, ad f),
    plus the continuous spectrum where the dataset alone determines it."""
    ds.require(weight.required_columns())
    h, (_, t_max) = weight.h_and_support()
    notes = []
    terms = []
    for rec in ds.records:
        if weight.kind == "kuznetsov":
            eps = rec.eps_f if weight.sign == -1 else 1
            terms.append(eps * rec.lam(weight.m) * rec.lam(weight.n) / rec.l1_adf
                         * float(h(np.array([rec.t_f]))[0]))
        elif weight.kind == "first":
            terms.append(rec.extras["l_half_F_f"] / rec.l1_adf * float(h(np.array([rec.t_f]))[0]))
        elif weight.kind == "second":
            terms.append(rec.extras["l_half_f"] * rec.extras["l_half_F_f"] / rec.l1_adf
                         * float(h(np.array([rec.t_f]))[0]))
        else:
            terms.append(rec.extras["l_half_f"] * rec.extras["l_half_adg_f"]
                         / (rec.l1_adf * weight.l1_adg ** 2) * float(h(np.array([rec.t_f]))[0]))
    cusp = math.fsum(terms)
    if ds.records and ds.records[-1].t_f < t_max:
        tail = _weyl_tail(h, ds.records[-1].t_f, t_max)
        if tail > 1e-12 * max(abs(cusp), 1.0):
            notes.append(f"weight not negligible beyond the last record; Weyl-law tail ~ {tail:.3e}")
    else:
        tail = 0.0
    if weight.kind != "kuznetsov":
        notes.append("continuous spectrum needs L-values off the data; omitted")
        return SideValue(cusp, None, None, tail, tuple(notes))
    cont, err = continuous_part(h, weight.m, weight.n, t_max, width)
    return SideValue(cusp, cont, cusp + cont, err + tail, tuple(notes))


def _weyl_tail(h: Callable, t_last: float, t_max: float) -> float:
    """int_{t_last}^{t_max} |h(t)| (t/6) dt: Weyl-law mass of the forms past the data
    (eigenvalue products and 1/L(1, ad f) taken as O(1))."""
    (t, w), _ = _panels(t_last, max(t_max, t_last + 1.0), 0.5)
    return float(np.abs(np.asarray(h(t), dtype=float)) * t / 6.0 @ w)


def geometric_side(weight: WeightSpec, c_max: int = 200, *, width: float = 1.0) -> SideValue:
    """delta_{m, +-n} N h + sum_{c <= c_max} S(m, +-n; c)/c (K h)(sqrt(mn)/c), with a
    truncation estimate from a power-law fit of |K h| at the smallest x."""
    if weight.kind != "kuznetsov":
        raise ParameterError("the geometric side is implemented for the Kuznetsov weight only")
    if c_max < 4:
        raise ParameterError("c_max must be at least 4")
    h, support = weight.h_and_support()
    kind = "plus" if weight.sign == 1 else "minus"
    m, n, sg = weight.m, weight.n, weight.sign
    delta = 0.0
    if sg == 1 and m == n:
        delta = spectral_measure_integral(h, support).value
    c = np.arange(1, c_max + 1)
    x = math.sqrt(m * n) / c
    kh = k_transform(h, kind, x, support=support, width=width)
    s = np.array([kloosterman(m, sg * n, int(ci)) for ci in c])
    kl = math.fsum(s * kh / c)
    # |K h(x)| ~ B x^p at small x; fit on the last half decade of c
    sel = c >= c_max // 3
    ax = np.abs(kh[sel])
    trunc = 0.0
    notes = []
    if np.all(ax > 0):
        p, logb = np.polyfit(np.log(x[sel]), np.log(ax), 1)
        B = math.exp(logb) * 2.0  # head-room over the fitted line
        cc = np.arange(c_max + 1, 20 * c_max + 1)
        weil = np.array([num_divisors(int(k)) for k in cc]) * np.sqrt(cc) \
            * np.sqrt(np.gcd(np.gcd(cc, m), n))
        trunc = float(np.sum(weil / cc * B * (math.sqrt(m * n) / cc) ** p))
        # beyond 20 c_max: tau(c) <= 2 sqrt(c) crudely, integral of c^{-p}
        if p > 1.0:
            trunc += 2.0 * B * (m * n) ** (p / 2) * (20 * c_max) ** (1.0 - p) / (p - 1.0)
        else:
            notes.append(f"small-x decay exponent {p:.2f} <= 1; truncation estimate unreliable")
            trunc = float("inf")
        notes.append(f"|K h(x)| ~ {math.exp(logb):.3e} x^{p:.3f} at small x")
    return SideValue(kl, None, delta + kl, trunc, tuple(notes))


@dataclass(frozen=True)
class KuznetsovCheck:
    spectral: SideValue
    geometric: SideValue
    discrepancy: float
    budget: float
    passed: bool


def kuznetsov_check(ds: SpectralDataset, weight: WeightSpec, c_max: int = 200) -> KuznetsovCheck:
    """Both sides of the Kuznetsov formula; passes when the discrepancy is within the
    truncation and quadrature estimates."""
    spec = spectral_side(ds, weight)
    geo = geometric_side(weight, c_max)
    disc = abs(spec.total - geo.total)
    budget = spec.error_estimate + geo.error_estimate
    # an infinite budget means the tail is uncertified, which never passes
    return KuznetsovCheck(spec, geo, disc, budget, math.isfinite(budget) and disc <= budget)
