"""Verification suites: each runs a family of checks and returns a SuiteReport.

Every suite takes a config dict (defaults below, overridable key by key), a
seed for the randomised draws and an optional tolerance override for its
primary deviation test.  Suites never raise on a failed tolerance; they
record it in the report.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from .arith import (check_sumXiF, check_sumXiXiF, kloosterman_direct, kloosterman_table,
                    random_coefficients, ramanujan_direct, ramanujan_sum, weil_bound)
from .besselkern import KernelOrder
from .errors import ParameterError
from .mellin import (kernel_mellin_numeric, mellin_kernel, mellin_kernel_pole,
                     mellin_kernel_residue)
from .oscillatory import afe_decay_envelope, afe_weight, stat_integral
from .reciprocity import (ReciprocityParams, big_h_asymptotic_check, hcal_transform,
                          mellin_grid, tilde_transform, transition_parameters)
from .transforms import (l_hol_hplus_closed, l_plus_hplus_closed, l_transform_hplus, make_triple,
                         sears_titchmarsh_reconstruction)


@dataclass
class CaseResult:
    name: str
    deviation: float
    tol: float
    passed: bool
    detail: dict = field(default_factory=dict)
    metric: str = "deviation"  # or "ratio" (bounded quantity) or "count"

    def to_dict(self) -> dict:
        return {"name": self.name, "metric": self.metric, "value": self.deviation, "tol": self.tol,
                "pass": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    cases: list
    fitted_constants: dict
    config: dict
    seed: int
    elapsed: float = 0.0
    version: str = __version__

    @property
    def max_deviation(self) -> float:
        devs = [c.deviation for c in self.cases
                if c.metric == "deviation" and math.isfinite(c.deviation)]
        return max(devs) if devs else 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def failing(self) -> list:
        return [c for c in self.cases if not c.passed]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "cases": [c.to_dict() for c in self.cases],
                "max_deviation": self.max_deviation, "fitted_constants": self.fitted_constants,
                "pass": self.passed, "config": self.config, "seed": self.seed,
                "version": self.version, "elapsed_seconds": self.elapsed}


def _le(name: str, value: float, tol: float, **detail) -> CaseResult:
    value = float(value)
    return CaseResult(name, value, tol, bool(value <= tol), detail)


def _ratio(name: str, value: float, tol: float, **detail) -> CaseResult:
    value = float(value)
    return CaseResult(name, value, tol, bool(value <= tol), detail, metric="ratio")


def _spread(values) -> float:
    v = np.abs(np.asarray(values, dtype=float))
    return float(v.max() / v.min())


# ------------------------------------------------------------------ arithmetic

def suite_arith_exact(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    tol = tol if tol is not None else 1e-10
    rng = np.random.default_rng(seed)
    cases = []

    def draw_w():
        return complex(rng.uniform(-1.0, 2.0), rng.uniform(-5.0, 5.0))

    worst = 0.0
    for ell in range(1, cfg["xif_ell_max"] + 1):
        for _ in range(cfg["draws"]):
            co = random_coefficients(12, 24, seed=int(rng.integers(1 << 30)))
            r = check_sumXiF(ell, draw_w(), int(rng.choice([1, -1])), co)
            worst = max(worst, r["max_rel_deviation"])
    cases.append(_le("twisted Xi_F sum over c | l", worst, tol, ell_max=cfg["xif_ell_max"]))

    worst = 0.0
    for ell in range(1, cfg["xixif_ell_max"] + 1):
        for _ in range(cfg["draws"]):
            co = random_coefficients(10, 16, seed=int(rng.integers(1 << 30)))
            signs = (int(rng.choice([1, -1])), int(rng.choice([1, -1])))
            r = check_sumXiXiF(ell, draw_w(), draw_w(), signs, co)
            worst = max(worst, r["max_rel_deviation"])
    cases.append(_le("double Voronoi sum vs Kloosterman", worst, tol,
                     ell_max=cfg["xixif_ell_max"]))

    nmax = cfg["ramanujan_max"]
    worst = 0.0
    for c in range(1, nmax + 1):
        for n in range(1, nmax + 1):
            worst = max(worst, abs(ramanujan_sum(c, n) - ramanujan_direct(c, n)))
    cases.append(_le("Ramanujan sum: divisor formula vs direct", worst, 1e-9, c_n_max=nmax))

    worst = 0.0
    mn = cfg["weil_mn_max"]
    for c in range(1, cfg["weil_c_max"] + 1):
        S = kloosterman_table(mn, mn, c)
        for m in range(1, mn + 1):
            for n in range(1, mn + 1):
                worst = max(worst, abs(S[m - 1, n - 1]) / weil_bound(m, n, c))
    cases.append(_ratio("Weil bound |S|/bound", worst, 1.0 + 1e-9, c_max=cfg["weil_c_max"]))

    worst_sym = worst_mult = 0.0
    cm = cfg["twisted_c_max"]
    pairs = [(3, 5), (1, 7), (2, 9), (6, 4)]
    for c1 in range(1, cm + 1):
        for c2 in range(1, cm + 1):
            if math.gcd(c1, c2) != 1:
                continue
            i1, i2 = pow(c2, -1, c1) if c1 > 1 else 0, pow(c1, -1, c2) if c2 > 1 else 0
            for m, n in pairs:
                full = kloosterman_direct(m, n, c1 * c2)
                s1 = kloosterman_direct(m * i1, n * i1, c1)
                s2 = kloosterman_direct(m * i2, n * i2, c2)
                worst_mult = max(worst_mult, abs(full - s1 * s2))
                worst_sym = max(worst_sym, abs(full - kloosterman_direct(n, m, c1 * c2)))
    cases.append(_le("Kloosterman symmetry S(m,n;c) = S(n,m;c)", worst_sym, 1e-9, c_max=cm))
    cases.append(_le("Kloosterman twisted multiplicativity", worst_mult, 1e-9, c_max=cm))
    return cases, {}


# ------------------------------------------------------------------ Mellin closed forms

def _contour_residue(order: KernelOrder, s0: complex, radius: float = 0.05, n: int = 64) -> complex:
    """(1/2 pi i) of the closed form around s0, trapezoid on a circle."""
    th = 2 * math.pi * np.arange(n) / n
    pts = s0 + radius * np.exp(1j * th)
    vals = np.array([mellin_kernel(order, p).value for p in pts])
    return complex(np.mean(vals * radius * np.exp(1j * th)))


def suite_mellin_closed_forms(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    tol = tol if tol is not None else 1e-6
    cases = []
    ss = [sig + 1j * tau for sig in cfg["sigmas"] for tau in cfg["taus"]]
    orders = ([KernelOrder("plus", r) for r in cfg["r"]] + [KernelOrder("minus", r) for r in cfg["r"]]
              + [KernelOrder.hol(k) for k in cfg["k"]])
    for o in orders:
        num = kernel_mellin_numeric(o, ss)
        dev = 0.0
        for nv, s in zip(num, ss):
            ref = mellin_kernel(o, s).value
            dev = max(dev, abs(nv.value - ref) / abs(ref))
        label = f"{o.kind} r={o.r:g}" if o.kind != "hol" else f"hol k={o.k}"
        cases.append(_le(f"kernel Mellin closed form vs quadrature, {label}", dev, tol))
    # residues of the hol transform: formula against a contour integral of the closed form
    dev = 0.0
    for k in cfg["k"]:
        o = KernelOrder.hol(k)
        for ell in range(4):
            res = mellin_kernel_residue(o, ell)
            num = _contour_residue(o, mellin_kernel_pole(o, ell))
            dev = max(dev, abs(num - res) / abs(res))
    cases.append(_le("hol residues: formula vs contour integral", dev, 1e-10))
    # closed forms for the L transforms of H^+
    fitted = {}
    for M in cfg["lemma_M"]:
        for T in cfg["lemma_T"]:
            tr = make_triple("triple2", M, T)
            dh = max(abs(l_transform_hplus(tr, "hol", k).value - _scalar(l_hol_hplus_closed(k, M, T)))
                     / abs(_scalar(l_hol_hplus_closed(k, M, T))) for k in range(2, cfg["lemma_k_max"] + 1, 2))
            dp = max(abs(l_transform_hplus(tr, "plus", r).value - _scalar(l_plus_hplus_closed(r, M, T)))
                     / abs(_scalar(l_plus_hplus_closed(r, M, T))) for r in cfg["lemma_r"])
            cases.append(_le(f"L^hol H^+ closed form vs quadrature, M={M} T={T:g}", dh, tol))
            cases.append(_le(f"L^+ H^+ closed form vs quadrature, M={M} T={T:g}", dp, tol))
            ks = np.arange(M + 1 + (M % 2 == 0), int(4 * T) + 1, 2)
            ks = ks[ks % 2 == 0]
            signed = np.real(np.array([(1j ** int(k)) * _scalar(l_hol_hplus_closed(int(k), M, T))
                                       for k in ks]))
            neg = int(np.count_nonzero(signed <= 0))
            cases.append(CaseResult(f"i^k L^hol H^+ > 0 on (M, 4T], M={M} T={T:g}", float(neg), 0.0,
                                    neg == 0, {"k_min": int(ks[0]), "k_max": int(ks[-1])},
                                    metric="count"))
            band = signed[(ks >= T) & (ks <= 2 * T)]
            spread = _spread(band)
            fitted[f"hol_band_level_M{M}_T{T:g}"] = float(np.median(band))
            cases.append(_ratio(f"i^k L^hol H^+ on [T, 2T] max/min, M={M} T={T:g}", spread, 20.0))
    return cases, fitted


def _scalar(v) -> complex:
    return complex(np.asarray(v).ravel()[0])


# ------------------------------------------------------------------ Sears-Titchmarsh

def suite_sears_titchmarsh(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    tol = tol if tol is not None else 1e-3
    tr = make_triple("triple2", cfg["M"], cfg["T"])
    rep = sears_titchmarsh_reconstruction(tr, floor=cfg["floor"], n_x=cfg["n_x"])
    case = _le(f"K^+ L^+ H^+ + K^hol L^hol H^+ = H^+ (M={cfg['M']}, T={cfg['T']:g})",
               rep.max_rel_deviation, tol, n_points=int(rep.x.size), floor=cfg["floor"])
    return [case], {}


# ------------------------------------------------------------------ envelopes

def suite_hcal_envelope(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    """sup |H(t)| t_g/T^2 over |t| <= t_g^2/T^2, its drift, and suppression at 4 t_g^2/T^2."""
    cases, fitted = [], {}
    consts = []
    for tg in cfg["t_g"]:
        for th in cfg["theta"]:
            T = tg ** th
            p = ReciprocityParams(tg)
            tr = make_triple("triple1", cfg["M"], T)
            grid = mellin_grid(tr, p)
            edge = tg * tg / (T * T)
            ts = np.linspace(0.0, edge, cfg["n_points"])
            vals = np.array([abs(v.value) for v in hcal_transform(tr, ts, p, grid)])
            far = abs(hcal_transform(tr, [cfg["far_factor"] * edge], p, grid)[0].value)
            peak = float(vals.max())
            C = peak * tg / (T * T)
            consts.append(C)
            key = f"t_g={tg:g},theta={th:g}"
            fitted[key] = C
            cases.append(_ratio(f"suppression at {cfg['far_factor']:g} t_g^2/T^2, {key}", far / peak,
                             cfg["suppression"], peak=peak, far=far, T=T))
    cases.append(_ratio("fitted constant drift max/min", _spread(consts), cfg["drift"]))
    return cases, fitted


def suite_tilde_dyadic(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    """sup |h~^-(t)| over |t| <= t_g/T against T^2 log t_g / t_g (triple1)."""
    cases, fitted = [], {}
    consts = []
    for tg in cfg["t_g"]:
        for th in cfg["theta"]:
            T = tg ** th
            p = ReciprocityParams(tg)
            tr = make_triple("triple1", cfg["M"], T)
            grid = mellin_grid(tr, p)
            ts = np.linspace(0.0, tg / T, cfg["n_points"])
            vals = np.array([abs(v.value) for v in tilde_transform(tr, "minus", ts, p, grid)])
            C = float(vals.max()) / (T * T * math.log(tg) / tg)
            consts.append(C)
            fitted[f"t_g={tg:g},theta={th:g}"] = C
    cases.append(_ratio("fitted constant drift max/min", _spread(consts), cfg["drift"],
                     constants=consts))
    return cases, fitted


def suite_tilde_transition(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    """triple4 with T = 2t_g - t_g^0.6, U = t_g - T/2 + 1: h~^+ beyond 3 (T/U)^{1/2}
    against its |t| <= T^eps plateau, and the h~^- plateau against U^{1+eps}."""
    cases, fitted = [], {}
    eps = cfg["eps"]
    for tg in cfg["t_g"]:
        T, U = transition_parameters(tg)
        p = ReciprocityParams(tg)
        tr = make_triple("triple4", cfg["M"], T, U)
        grid = mellin_grid(tr, p)
        a = math.sqrt(T / U)
        plateau_t = np.linspace(0.0, T ** eps, 5)
        far_t = np.linspace(3 * a, 6 * a, 7)
        plat = max(abs(v.value) for v in tilde_transform(tr, "plus", plateau_t, p, grid))
        far = max(abs(v.value) for v in tilde_transform(tr, "plus", far_t, p, grid))
        key = f"t_g={tg:g}"
        cases.append(_ratio(f"h~^+ beyond 3 (T/U)^(1/2) over plateau, {key}", far / plat,
                         cfg["suppression"], T=T, U=U, scale=a))
        mplat = max(abs(v.value) for v in tilde_transform(tr, "minus", plateau_t, p, grid))
        fitted[f"h~+ plateau, {key}"] = plat
        fitted[f"h~- plateau / U^(1+eps), {key}"] = mplat / U ** (1 + eps)
    return cases, fitted


def suite_weight_asymptotic(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    cases, fitted = [], {}
    for tg in cfg["t_g"]:
        r = big_h_asymptotic_check(tg, cfg["n_points"])
        cases.append(_ratio(f"|H/H_main - 1| / error sum, t_g={tg:g}", r["max_ratio"], cfg["budget"],
                         argmax_t=r["argmax_t"]))
        k = r["exponent_coefficient"]
        off = max(k, 1.0 / k) if k > 0 else math.inf
        cases.append(_ratio(f"exponential rate beyond 2 t_g (factor off pi), t_g={tg:g}", off,
                         cfg["rate_factor"], coefficient=k))
        fitted[f"rate t_g={tg:g}"] = k
    return cases, fitted


def suite_cubic_phase(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    cases, fitted = [], {}
    c = cfg["c"]
    for e in cfg["u_exponents"]:
        vals = {}
        for tg in cfg["t_g"]:
            for mult in (1.0, 4.0):
                g = tg * mult
                U = g ** e
                r = stat_integral(2.0 * g, g, U, c, eps=cfg["eps"])
                vals[g] = r.value
                if mult == 1.0:
                    ratio = r.value / r.bound
                    fitted[f"t_g={g:g},U=t_g^{e:g}"] = ratio
                    cases.append(_ratio(f"value / (t_g^(-1/2+eps) U^(-1/2)), t_g={g:g}, U=t_g^{e:g}",
                                     ratio, cfg["bound_constant"], integral=r.value))
            q = vals[4.0 * tg] / vals[tg]
            cases.append(_le(f"t_g -> 4 t_g halves the value, t_g={tg:g}, U=t_g^{e:g}",
                             abs(q / 0.5 - 1.0), cfg["halving_tolerance"], ratio=q))
    return cases, fitted


def suite_afe_weights(cfg: dict, seed: int, tol: Optional[float]) -> tuple:
    cases, fitted = [], {}
    tg, U, X = cfg["t_g"], cfg["U"], cfg["X"]
    t = 2 * tg + U
    for sign in (1, -1):
        N = X ** sign * U * tg * tg
        lab = "V+" if sign == 1 else "V-"
        small = N * np.logspace(-6, -3, 7)
        v = afe_weight(small, t, 1, tg, X, sign=sign, sigma=1.0)
        dev = max(abs(w.value - 1.0) for w in v)
        cases.append(_le(f"{lab} plateau |V - 1| for x <= 1e-3 X U t_g^2", dev, 0.2))
        large = N * np.logspace(0, 3, 13)
        for sig in cfg["sigmas"]:
            w = afe_weight(large, t, 1, tg, X, sign=sign, sigma=sig)
            ratio = np.array([abs(a.value) for a in w]) / afe_decay_envelope(large, X, U, tg, sig, sign)
            head, tail = ratio[:5].max(), ratio[5:].max()
            fitted[f"{lab} decay constant sigma={sig:g}"] = float(ratio.max())
            cases.append(_ratio(f"{lab} decay: far/near envelope ratio, sigma={sig:g}", tail / head,
                             cfg["drift"], constant=float(ratio.max())))
        xs = N * np.logspace(-3, 2, 11)
        w1 = afe_weight(xs, t, 1, tg, X, sign=sign, sigma=1.0)
        w2 = afe_weight(xs, t, 1, tg, X, sign=sign, sigma=0.5)
        dev = max(abs(a.value - b.value) for a, b in zip(w1, w2))
        cases.append(_le(f"{lab} contour shift sigma 1 -> 1/2", dev, tol if tol is not None else 1e-8))
        wm = afe_weight(xs, t, -1, tg, X, sign=sign, sigma=1.0)
        d = max(abs(a.value - b.value) for a, b in zip(w1, wm))
        fitted[f"{lab} eps=+1 vs -1 difference times U^2"] = float(d * U * U)
    return cases, fitted


# ------------------------------------------------------------------ registry

@dataclass(frozen=True)
class Suite:
    name: str
    alias: str
    description: str
    run: Callable
    defaults: dict


SUITES = {s.name: s for s in [
    Suite("arith-exact", "arithmetic-identities",
          "Voronoi/Kloosterman identities, Ramanujan sums, Weil bound, Kloosterman symmetries",
          suite_arith_exact,
          {"xif_ell_max": 24, "xixif_ell_max": 16, "draws": 20, "ramanujan_max": 200,
           "weil_mn_max": 20, "weil_c_max": 500, "twisted_c_max": 50}),
    Suite("mellin-closed-forms", "kernel-mellin",
          "kernel Mellin transforms, their residues, and the closed-form L transforms of H^+",
          suite_mellin_closed_forms,
          {"r": [0.0, 1.0, 5.0, 10.0], "k": [2, 4, 10], "sigmas": [0.3, 0.5, 1.2],
           "taus": [-20.0, -10.0, -3.0, 0.0, 3.0, 10.0, 20.0], "lemma_M": [1, 2, 4, 6],
           "lemma_T": [20.0, 50.0], "lemma_k_max": 40, "lemma_r": [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0]}),
    Suite("sears-titchmarsh", "inversion",
          "rebuild H^+ from its L transforms through the K transforms",
          suite_sears_titchmarsh, {"M": 8, "T": 50.0, "floor": 1e-6, "n_x": 40}),
    Suite("envelopes-5.2", "hcal-envelope",
          "size and decay of the GL3 x GL2 dual transform for the Gaussian family",
          suite_hcal_envelope,
          {"t_g": [100.0, 200.0, 400.0], "theta": [0.5, 0.6, 0.7], "M": 8, "n_points": 17,
           "far_factor": 4.0, "suppression": 1e-3, "drift": 3.0}),
    Suite("envelopes-5.4", "tilde-dyadic-envelope",
          "plateau of the GL4 x GL2 dual transform for the Gaussian family",
          suite_tilde_dyadic,
          {"t_g": [100.0, 200.0, 400.0], "theta": [0.5, 0.6, 0.7], "M": 8, "n_points": 13,
           "drift": 3.0}),
    Suite("envelopes-7.3", "tilde-transition-envelope",
          "localisation of the GL4 x GL2 dual transform in the transition range",
          suite_tilde_transition,
          {"t_g": [100.0, 200.0], "M": 8, "eps": 0.05, "suppression": 1e-3}),
    Suite("h-asymptotic", "weight-asymptotic",
          "the L^4-norm expansion weight H(t) against its asymptotic",
          suite_weight_asymptotic,
          {"t_g": [100.0, 200.0, 400.0], "n_points": 50, "budget": 5.0, "rate_factor": 3.0}),
    Suite("stat-phase", "cubic-phase",
          "the cubic-phase double integral: size bound and t_g scaling",
          suite_cubic_phase,
          {"t_g": [1e3, 1e4], "u_exponents": [0.25, 0.3], "c": 10, "eps": 0.05,
           "bound_constant": 10.0, "halving_tolerance": 0.3}),
    Suite("afe-weights", "afe-weights",
          "approximate functional equation weights: plateau, decay, contour independence",
          suite_afe_weights,
          {"t_g": 100.0, "U": 10.0, "X": 2.0, "sigmas": [1.0, 3.0], "drift": 3.0}),
]}

ALIASES = {s.alias: s.name for s in SUITES.values()}


def resolve_suite(name: str) -> Suite:
    key = ALIASES.get(name, name)
    if key not in SUITES:
        raise ParameterError(f"unknown suite {name!r}; known: "
                             + ", ".join(sorted(set(SUITES) | set(ALIASES))))
    return SUITES[key]


def run_suite(name: str, config: Optional[dict] = None, seed: int = 0,
              tol: Optional[float] = None) -> SuiteReport:
    suite = resolve_suite(name)
    cfg = dict(suite.defaults)
    for k, v in (config or {}).items():
        if k not in cfg:
            raise ParameterError(f"suite {suite.name} has no option {k!r}")
        cfg[k] = v
    if tol is not None and not tol > 0:
        raise ParameterError("tol must be positive")
    t0 = time.perf_counter()
    cases, fitted = suite.run(cfg, seed, tol)
    return SuiteReport(suite.name, cases, fitted, cfg, seed, time.perf_counter() - t0)
