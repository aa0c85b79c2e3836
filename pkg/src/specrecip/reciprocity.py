"""Reciprocity transforms, the weight H(t) and the envelope bookkeeping.

Everything here is a Mellin-Barnes integral on Re s = sigma in (0, 1):

    Hcal(t) = (1/2 pi i) int sum_{a,b} Hhat^a(s) scriptG^b((1-s)/2) G^{-ab}(s/2 + it) ds
    htilde^e(t) = (1/2 pi i) int sum_{a,b} Hhat^a(s) Jhat^e_t(s) G^b((1-s)/2)
                      scriptG^{e a b}((1-s)/2) ds
    htilde^hol(k) = the same with Jhat^hol_k and scriptG^{ab}

with a, b, e in {+1, -1}, scriptG taken at the self-dual parameters
(2i t_g, 0, -2i t_g).  All gamma products are assembled in log space, so
factors like cosh(2 pi t_g) never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .complexfn import (_B2K, LOG_2PI, log_cos_pi_half, log_cosh, log_g_plusminus, log_gamma,
                        log_script_g, self_dual_mu, logsumexp_complex)
from .errors import DomainError, NonConvergenceError, ParameterError, PoleError
from .quad import panel_nodes
from .transforms import (TestFunctionTriple, mellin_h_minus, mellin_h_minus_cosine,
                         triple_n_values)

ZETA2 = math.pi ** 2 / 6.0
POLE_GUARD = 1e-6


# ------------------------------------------------------------------ the weight H(t)

def omega(t, t_g: float):
    """0 for |t| <= 2 t_g, |t| - 2 t_g beyond."""
    return np.maximum(np.abs(np.asarray(t, dtype=float)) - 2.0 * t_g, 0.0)


def log_big_h(t, t_g: float):
    """log H(t), H = (pi^2/24) prod Gamma(1/4 +- it/2)^2 prod Gamma(1/4 +- it/2 +- it_g)
    / (prod Gamma(1/2 +- it) prod Gamma(1/2 +- it_g)^2).

    Each product over +- pairs is a modulus squared, so H is real and positive.
    """
    t = np.asarray(t, dtype=float)
    q = 0.25 + 0.5j * t
    val = 4.0 * log_gamma(q).real
    val = val + 2.0 * log_gamma(q + 1j * t_g).real + 2.0 * log_gamma(q - 1j * t_g).real
    val = val - 2.0 * log_gamma(0.5 + 1j * t).real - 4.0 * float(log_gamma(complex(0.5, t_g)).real)
    return math.log(math.pi ** 2 / 24.0) + val


def big_h(t, t_g: float):
    return np.exp(log_big_h(t, t_g))


def log_big_h_asymptotic(t, t_g: float):
    """log of the main term of H(t) and the relative error scale.

    main = (pi^3/3) e^{-pi Omega} / ((1+|t|)(1+|2t_g+t|)^{1/2}(1+|2t_g-t|)^{1/2}),
    err  = 1/(1+|t|) + 1/(1+|2t_g+t|) + 1/(1+|2t_g-t|).
    """
    t = np.asarray(t, dtype=float)
    a, b, c = 1 + np.abs(t), 1 + np.abs(2 * t_g + t), 1 + np.abs(2 * t_g - t)
    log_main = math.log(math.pi ** 3 / 3.0) - math.pi * omega(t, t_g) - np.log(a) \
        - 0.5 * np.log(b * c)
    return log_main, 1.0 / a + 1.0 / b + 1.0 / c


def big_h_asymptotic(t, t_g: float):
    """(main, err) as in log_big_h_asymptotic; main underflows once pi Omega > 700."""
    log_main, err = log_big_h_asymptotic(t, t_g)
    return np.exp(log_main), err


def big_h_asymptotic_check(t_g: float, n: int = 50) -> dict:
    """Compare H with its main term on n points of [0, 3 t_g].

    Returns the worst |H/main - 1| / err and the fitted coefficient k in
    H ~ e^{-k pi Omega} beyond 2 t_g (k = 1 is the prediction), both in log space.
    """
    t = np.linspace(0.0, 3.0 * t_g, n)
    lh = log_big_h(t, t_g)
    lm, err = log_big_h_asymptotic(t, t_g)
    ratio = np.abs(np.expm1(lh - lm)) / err
    beyond = t > 2.0 * t_g + 1.0
    k = float("nan")
    if np.count_nonzero(beyond) >= 2:
        om = omega(t[beyond], t_g)
        algebraic = lm[beyond] + math.pi * om  # main term without the exponential
        k = -float(np.polyfit(om, lh[beyond] - algebraic, 1)[0]) / math.pi
    return {"t_g": t_g, "max_ratio": float(ratio.max()), "argmax_t": float(t[ratio.argmax()]),
            "exponent_coefficient": k}


# ------------------------------------------------------------------ parameters and grids

@dataclass(frozen=True)
class ReciprocityParams:
    t_g: float
    sigma: float = 0.5
    width: float = 1.0
    floor: float = 1e-14  # rounding noise of the Mellin transforms sits near 1e-15
    auto_perturb: bool = True

    def __post_init__(self):
        if not self.t_g > 0:
            raise ParameterError("t_g must be positive")
        if not 0.0 < self.sigma < 1.0:
            raise DomainError("the contour must satisfy 0 < sigma < 1")
        if not self.width > 0:
            raise ParameterError("panel width must be positive")

    @property
    def contour_sigma(self) -> float:
        """sigma after the pole guard.

        The integrands have poles on Re s = 0 (gamma factors of G) and Re s = 1
        (s = 1 and s = 1 +- 4 i t_g from the script-G factor); a line within
        POLE_GUARD of either is moved 0.05 inwards, or rejected when
        auto_perturb is off.
        """
        gap = min(self.sigma, 1.0 - self.sigma)
        if gap >= POLE_GUARD:
            return self.sigma
        if not self.auto_perturb:
            raise PoleError(f"contour Re s = {self.sigma} passes within {gap:.1e} of a pole")
        return self.sigma + 0.05 if self.sigma < 0.5 else self.sigma - 0.05

    @property
    def mu(self):
        return self_dual_mu(self.t_g)


@dataclass
class MellinGrid:
    """Contour nodes on Re s = sigma with the Mellin transforms of H^+ and H^- on them.

    Fine (GL-20) and coarse (GL-10) nodes share panels; the coarse rule only
    feeds error estimates.  log_hp / log_hm are -inf where a part vanishes.
    """

    sigma: float
    s: np.ndarray
    w: np.ndarray
    s_c: np.ndarray
    w_c: np.ndarray
    log_hp: np.ndarray
    log_hm: np.ndarray
    log_hp_c: np.ndarray
    log_hm_c: np.ndarray
    tau_max: float


def _log_mellin_parts(triple: TestFunctionTriple, s: np.ndarray, route: str = "spectral"):
    if triple.has_plus:
        lp = np.log(triple.mellin_H_plus(s))
    else:
        lp = np.full(s.shape, -np.inf + 0j)
    if triple.has_minus:
        with np.errstate(divide="ignore"):
            if route == "spectral":
                lm = np.log(mellin_h_minus(triple, s))
            elif route == "cosine":
                lm = np.log(mellin_h_minus_cosine(triple, s))
            else:
                raise ParameterError(f"unknown route {route!r}")
    else:
        lm = np.full(s.shape, -np.inf + 0j)
    return lp, lm


def mellin_grid(triple: TestFunctionTriple, params: ReciprocityParams, *,
                chunk: float = 10.0, route: str = "spectral") -> MellinGrid:
    """March outward from tau = 0 until |Hhat| falls below floor times its peak.

    The march also stops once |Hhat| is below 1e-10 of its peak and has
    stopped decreasing over three chunks (the rounding plateau).  route
    "cosine" takes the Mellin transform of H^- from the cosine representation
    instead of the spectral one (an independent check, slower).
    """
    sig, width = params.contour_sigma, params.width
    parts = []
    peak = -np.inf
    log_floor = math.log(params.floor)
    for direction in (1.0, -1.0):
        start = 0.0
        history = []
        while True:
            edges = np.arange(start, start + chunk + 1e-12, width) * direction
            if direction < 0:
                edges = edges[::-1]
            xf, wf = panel_nodes(edges)
            xc, wc = panel_nodes(edges, 10)
            sf, sc = sig + 1j * xf, sig + 1j * xc
            lpf, lmf = _log_mellin_parts(triple, sf, route)
            lpc, lmc = _log_mellin_parts(triple, sc, route)
            mag = np.maximum(lpf.real, lmf.real).max()
            peak = max(peak, mag)
            parts.append((sf, wf, sc, wc, lpf, lmf, lpc, lmc))
            start += chunk
            history.append(mag)
            if mag < peak + log_floor:
                break
            if (len(history) > 3 and mag < peak - 10 * math.log(10.0)
                    and min(history[-3:]) > history[-4] - math.log(10.0)):
                break
            if start > 4000:
                raise NonConvergenceError("Mellin transform of H does not decay on the contour")
    cat = [np.concatenate([p[i] for p in parts]) for i in range(8)]
    return MellinGrid(sig, cat[0], cat[1], cat[2], cat[3], cat[4], cat[5], cat[6], cat[7],
                      float(np.abs(cat[0].imag).max()))


# ------------------------------------------------------------------ log factors

def _log_jhat(kind: str, arg, s: np.ndarray) -> np.ndarray:
    """log of the kernel Mellin transform, vectorised over s (no pole checks: 0 < sigma)."""
    if kind == "hol":
        k = int(arg)
        return (math.log(math.pi) - 0.5j * math.pi * k - s * LOG_2PI
                + log_gamma((s + k - 1) / 2, check_pole=False)
                - log_gamma((1 - s + k) / 2, check_pole=False))
    r = float(arg)
    base = (-s * LOG_2PI + log_gamma(s / 2 + 1j * r, check_pole=False)
            + log_gamma(s / 2 - 1j * r, check_pole=False))
    if kind == "plus":
        return base + log_cos_pi_half(s)
    if kind == "minus":
        return base + log_cosh(math.pi * r)
    raise ParameterError(f"unknown kernel kind {kind!r}")


def _integrate(log_terms: np.ndarray, w: np.ndarray) -> complex:
    """(1/2 pi) sum_nodes w exp(log_terms) with the peak factored out."""
    finite = np.isfinite(log_terms.real)
    if not finite.any():
        return 0j
    m = log_terms.real[finite].max()
    vals = np.where(finite, np.exp(log_terms - m), 0.0)
    return complex(vals @ w) * math.exp(m) / (2.0 * math.pi)


@dataclass(frozen=True)
class ContourValue:
    value: complex
    error_estimate: float
    tail_ratio: float  # integrand at the truncation ends over its peak


def _finish(lt_f: np.ndarray, grid: MellinGrid, lt_c: np.ndarray) -> ContourValue:
    vf = _integrate(lt_f, grid.w)
    vc = _integrate(lt_c, grid.w_c)
    ends = np.abs(grid.s.imag) > grid.tau_max - 1.0
    lr = lt_f.real
    fin = np.isfinite(lr)
    if fin.any() and (ends & fin).any():
        tail = math.exp(min(0.0, lr[ends & fin].max() - lr[fin].max()))
    else:
        tail = 0.0
    return ContourValue(vf, abs(vf - vc) + 1e-15 * abs(vf), tail)


def _hcal_log_integrand(s: np.ndarray, lp: np.ndarray, lm: np.ndarray, t: float,
                        mu) -> np.ndarray:
    w = (1 - s) / 2
    z = s / 2 + 1j * t
    terms = []
    for b in (1, -1):
        lg = log_script_g(w, mu, b)
        # Hhat^+ pairs with G^{-b}, Hhat^- with G^{+b}
        terms.append(lp + lg + log_g_plusminus(z, -b))
        terms.append(lm + lg + log_g_plusminus(z, b))
    return logsumexp_complex(np.stack(terms, axis=-1))


def hcal_transform(triple: TestFunctionTriple, t, params: ReciprocityParams,
                   grid: Optional[MellinGrid] = None) -> list:
    """Hcal(t) for each t; the Mellin grid is shared across t."""
    grid = grid or mellin_grid(triple, params)
    out = []
    for tv in np.atleast_1d(np.asarray(t, dtype=float)):
        lf = _hcal_log_integrand(grid.s, grid.log_hp, grid.log_hm, float(tv), params.mu)
        lc = _hcal_log_integrand(grid.s_c, grid.log_hp_c, grid.log_hm_c, float(tv), params.mu)
        out.append(_finish(lf, grid, lc))
    return out


def _tilde_log_integrand(kind: str, arg, s, lp, lm, mu) -> np.ndarray:
    w = (1 - s) / 2
    lj = _log_jhat(kind, arg, s)
    e = 1 if kind == "plus" else (-1 if kind == "minus" else None)
    terms = []
    for a, lh in ((1, lp), (-1, lm)):
        for b in (1, -1):
            sg = a * b if e is None else e * a * b
            terms.append(lh + lj + log_g_plusminus(w, b) + log_script_g(w, mu, sg))
    return logsumexp_complex(np.stack(terms, axis=-1))


def tilde_transform(triple: TestFunctionTriple, kind: str, args, params: ReciprocityParams,
                    grid: Optional[MellinGrid] = None) -> list:
    """htilde^plus(t), htilde^minus(t) or htilde^hol(k) for each argument."""
    if kind not in ("plus", "minus", "hol"):
        raise ParameterError(f"unknown transform kind {kind!r}")
    grid = grid or mellin_grid(triple, params)
    out = []
    for a in np.atleast_1d(np.asarray(args)):
        if kind == "hol" and (int(a) != a or a < 2 or int(a) % 2):
            raise DomainError("holomorphic weights are even integers >= 2")
        lf = _tilde_log_integrand(kind, a, grid.s, grid.log_hp, grid.log_hm, params.mu)
        lc = _tilde_log_integrand(kind, a, grid.s_c, grid.log_hp_c, grid.log_hm_c, params.mu)
        out.append(_finish(lf, grid, lc))
    return out


# ------------------------------------------------------------------ identities

def gtoj_identity_gap(s, t_g: float) -> float:
    """Relative gap in sum_pm G^-+((1-s)/2) scriptG^pm((1-s)/2)
    = 4 Jhat^+_0(1-s) Jhat^-_{2t_g}(1-s) + 4 Jhat^-_0(1-s) Jhat^+_{2t_g}(1-s)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    w = (1 - s) / 2
    mu = self_dual_mu(t_g)
    lhs = logsumexp_complex(np.stack([log_g_plusminus(w, -b) + log_script_g(w, mu, b)
                                      for b in (1, -1)], axis=-1))
    u = 1 - s
    rhs = logsumexp_complex(np.stack([
        math.log(4.0) + _log_jhat("plus", 0.0, u) + _log_jhat("minus", 2 * t_g, u),
        math.log(4.0) + _log_jhat("minus", 0.0, u) + _log_jhat("plus", 2 * t_g, u)], axis=-1))
    return float(np.max(np.abs(np.expm1(lhs - rhs))))


def _log_jhat_minus_leading(s, t_g: float):
    """log of (1/2)(t_g/pi)^{s-1}."""
    return math.log(0.5) + (np.asarray(s, dtype=complex) - 1) * math.log(t_g / math.pi)


def _gbinom(a: int, n: int) -> float:
    """Binomial coefficient a choose n for any integer a."""
    return math.prod(a - i for i in range(n)) / math.factorial(n)


def stirling_correction(s, t_g: float, order: int):
    """Sum of the terms of log(Jhat^-_{2t_g}(s) / ((1/2)(t_g/pi)^{s-1})) up to r^{-order}, r = 2t_g.

    With w = s/2 the exact log-ratio is
        (w - 1/2) log(1 + w^2/r^2) + 2r atan(w/r) - 2w
        + sum_m B_2m/(2m(2m-1)) [(w + ir)^{1-2m} + (w - ir)^{1-2m}] + log(1 + e^{-2 pi r}),
    and every piece but the last (exponentially small) is a power series in 1/r.
    """
    if order < 0:
        raise ParameterError("order must be non-negative")
    w = np.asarray(s, dtype=complex) / 2.0
    r = 2.0 * t_g
    total = np.zeros(w.shape, dtype=complex)
    for k in range(1, order // 2 + 1):
        total += (w - 0.5) * (-1) ** (k + 1) * w ** (2 * k) / (k * r ** (2 * k))
        total += 2.0 * (-1) ** k * w ** (2 * k + 1) / ((2 * k + 1) * r ** (2 * k))
    # Bernoulli terms: binom(1-2m, n) w^n [(ir)^p + (-ir)^p], p = 1-2m-n, of order r^{p}
    for m in range(1, order // 2 + 1):
        coef = _B2K[m - 1] / (2 * m * (2 * m - 1))
        for n in range(1, order - 2 * m + 2, 2):  # p even only
            p = 1 - 2 * m - n
            total += coef * _gbinom(1 - 2 * m, n) * w ** n * 2.0 * (1j ** p).real * r ** p
    return total


def stirling_expansion_check(s, t_g: float, M_terms: int = 0) -> dict:
    """|Jhat^-_{2t_g}(s) 2 (pi/t_g)^{s-1} exp(-corrections) - 1| with corrections through t_g^{-M_terms}.

    For M_terms = 0 this is the deviation from the leading term, of size |s|^3/t_g^2.
    """
    s = complex(s)
    lj = _log_jhat("minus", 2.0 * t_g, np.array([s]))[0]
    lead = _log_jhat_minus_leading(s, t_g)
    corr = complex(stirling_correction(np.array([s]), t_g, M_terms)[0])
    dev = abs(np.expm1(lj - lead - corr))
    scale = max(abs(s), 1.0) ** 3 / t_g ** 2
    return {"s": s, "t_g": t_g, "M_terms": M_terms, "deviation": float(dev), "scale": scale,
            "ratio": float(dev / scale)}


# ------------------------------------------------------------------ envelopes

def hcal_envelope(t, t_g: float, T: float, M: int):
    """T^2/t_g for |t| <= t_g^2/T^2, (T/|t|^{1/2}) (T^2|t|/t_g^2)^{-M/2} beyond."""
    t = np.abs(np.asarray(t, dtype=float))
    edge = t_g ** 2 / T ** 2
    far = T / np.sqrt(np.maximum(t, 1e-300)) * (T * T * np.maximum(t, edge) / t_g ** 2) ** (-M / 2.0)
    return np.where(t <= edge, T * T / t_g, far)


def tilde_plus_envelope(t, t_g: float, T: float, M: int):
    """(T^2 log t_g / t_g)(1+|t|)^{-(M+1)/2}."""
    t = np.abs(np.asarray(t, dtype=float))
    return T * T * math.log(t_g) / t_g * (1.0 + t) ** (-(M + 1) / 2.0)


def tilde_minus_envelope(t, t_g: float, T: float, M: int):
    """T^2 log t_g / t_g for |t| <= t_g/T, (T/|t|)(T|t|/t_g)^{-M/4} beyond."""
    t = np.abs(np.asarray(t, dtype=float))
    edge = t_g / T
    tt = np.maximum(t, edge)
    return np.where(t <= edge, T * T * math.log(t_g) / t_g, T / tt * (T * tt / t_g) ** (-M / 4.0))


def transition_parameters(t_g: float) -> tuple[float, float]:
    """T = 2t_g - t_g^{0.6}, U = t_g - T/2 + 1 for the transition-range family."""
    T = 2.0 * t_g - t_g ** 0.6
    return T, t_g - T / 2.0 + 1.0


@dataclass
class EnvelopeReport:
    quantity: str
    abscissae: np.ndarray
    values: np.ndarray
    envelope: np.ndarray
    ratios: np.ndarray
    fitted_constant: float
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"quantity": self.quantity, "abscissae": self.abscissae.tolist(),
                "values": self.values.tolist(), "envelope": self.envelope.tolist(),
                "ratios": self.ratios.tolist(), "fitted_constant": self.fitted_constant,
                "params": self.params}


def envelope_report(quantity: str, abscissae, values, envelope, **params) -> EnvelopeReport:
    a = np.asarray(abscissae, dtype=float)
    v = np.abs(np.asarray(values))
    e = np.asarray(envelope, dtype=float)
    ratios = v / e
    return EnvelopeReport(quantity, a, v, e, ratios, float(ratios.max()), params)


# ------------------------------------------------------------------ main terms

def main_term_bracket(triple: TestFunctionTriple) -> float:
    """sum_pm N^pm h^pm + sum_{k = 0 mod 4} (k-1)/pi^2 h^hol(k)."""
    n = triple_n_values(triple)
    total = n["plus"].value.real + n["minus"].value.real
    if triple.has_plus:
        k = np.arange(4, triple.hol_cutoff() + 1, 4, dtype=float)
        total += math.fsum((k - 1) / math.pi ** 2 * triple.h_hol(k))
    return float(total)


def main_terms(triple: TestFunctionTriple, which: str, l1f: float, zeta2: float = ZETA2) -> float:
    """Main term of the first moment ("first": L(1,F) times the bracket) or the
    twisted second moment ("second": L(1,F)^2/zeta(2) times the bracket).

    L(1,F) is never computed here; the caller supplies it.
    """
    if not (l1f > 0 and zeta2 > 0):
        raise ParameterError("L(1,F) and zeta(2) must be positive")
    b = main_term_bracket(triple)
    if which == "first":
        return l1f * b
    if which == "second":
        return l1f ** 2 / zeta2 * b
    raise ParameterError("which must be 'first' or 'second'")
