"""Quadrature building blocks: Gauss-Legendre panels, Wynn epsilon, trapezoid on R."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NonConvergenceError

GL_ORDER = 20


@lru_cache(maxsize=None)
def gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@dataclass
class PanelResult:
    value: np.ndarray
    error: np.ndarray


def panel_nodes(edges: np.ndarray, n: int = GL_ORDER):
    """Nodes and weights for GL-n on every panel [edges[i], edges[i+1]].

    Returns (x, w) flattened with shape (n_panels * n,).
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gl_rule(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def _quadpack_error(fine: np.ndarray, coarse: np.ndarray, scale: np.ndarray) -> np.ndarray:
    diff = np.abs(fine - coarse)
    scale = np.maximum(scale, 1e-300)
    est = scale * np.minimum(1.0, (200.0 * diff / scale) ** 1.5)
    return np.maximum(est, 200.0 * np.finfo(float).eps * scale)


def integrate_panels(values_fine, weights_fine, values_coarse, weights_coarse,
                     n_panels: int) -> PanelResult:
    """Sum panel rules; the coarse rule only feeds the error estimate.

    values_* have shape (..., n_panels * n); the trailing axis is integrated.
    """
    vf = np.asarray(values_fine)
    vc = np.asarray(values_coarse)
    lead = vf.shape[:-1]
    pf = (vf * weights_fine).reshape(lead + (n_panels, -1)).sum(axis=-1)
    pc = (vc * weights_coarse).reshape(lead + (n_panels, -1)).sum(axis=-1)
    scale = (np.abs(vf) * np.abs(weights_fine)).reshape(lead + (n_panels, -1)).sum(axis=-1)
    err = _quadpack_error(pf, pc, scale)
    return PanelResult(pf.sum(axis=-1), err.sum(axis=-1))


def gl_panels(f: Callable[[np.ndarray], np.ndarray], edges: Sequence[float],
              n: int = GL_ORDER) -> PanelResult:
    """Integrate a vectorised f over consecutive panels with GL-n (value) and GL-n/2 (check)."""
    edges = np.asarray(edges, dtype=float)
    xf, wf = panel_nodes(edges, n)
    xc, wc = panel_nodes(edges, n // 2)
    x = np.concatenate([xf, xc])
    fx = np.asarray(f(x))
    nf = xf.size
    return integrate_panels(fx[..., :nf], wf, fx[..., nf:], wc, len(edges) - 1)


def adaptive_gl(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, *,
                tol: float = 1e-12, n: int = GL_ORDER, initial_panels: int = 4,
                max_panels: int = 20000, edges: Optional[Sequence[float]] = None
                ) -> tuple[complex, float]:
    """Globally adaptive GL panel integration of a scalar-valued vectorised f.

    The starting partition is initial_panels equal panels, or the given edges.
    """
    if edges is None:
        edges = list(np.linspace(a, b, initial_panels + 1))
    panels = [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]
    done_val = 0.0
    done_err = 0.0
    done_scale = 0.0
    while panels:
        # panels may be non-contiguous; evaluate each separately but vectorised
        xf_list, wf_list, xc_list, wc_list = [], [], [], []
        for lo, hi in panels:
            xf, wf = panel_nodes(np.array([lo, hi]), n)
            xc, wc = panel_nodes(np.array([lo, hi]), n // 2)
            xf_list.append(xf); wf_list.append(wf); xc_list.append(xc); wc_list.append(wc)
        xf = np.concatenate(xf_list); wf = np.concatenate(wf_list)
        xc = np.concatenate(xc_list); wc = np.concatenate(wc_list)
        fx = np.asarray(f(np.concatenate([xf, xc])))
        vf = (fx[:xf.size] * wf).reshape(len(panels), -1).sum(axis=1)
        vc = (fx[xf.size:] * wc).reshape(len(panels), -1).sum(axis=1)
        sc = (np.abs(fx[:xf.size]) * np.abs(wf)).reshape(len(panels), -1).sum(axis=1)
        err = _quadpack_error(vf, vc, sc)
        total_scale = done_scale + sc.sum() + 1e-300
        budget = tol * total_scale
        new_panels = []
        width_total = abs(b - a)
        for (lo, hi), v, er, s_ in zip(panels, vf, err, sc):
            # a panel already at its rounding floor cannot improve by splitting
            at_floor = er <= 1.01 * 200.0 * np.finfo(float).eps * s_
            if er <= budget * abs(hi - lo) / width_total or at_floor or abs(hi - lo) < 1e-13 * width_total:
                done_val += v
                done_err += er
                done_scale += s_
            else:
                mid = 0.5 * (lo + hi)
                new_panels.extend([(lo, mid), (mid, hi)])
        if len(new_panels) > max_panels:
            raise NonConvergenceError("adaptive_gl exceeded its panel budget")
        panels = new_panels
    return done_val, float(done_err)


def wynn_epsilon(partial_sums: Sequence[complex]) -> tuple[complex, float]:
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the best estimate and the difference between the last two
    even-column estimates as an error proxy.
    """
    s = [complex(v) for v in partial_sums]
    n = len(s)
    if n < 3:
        return s[-1], abs(s[-1] - s[-2]) if n > 1 else float("inf")
    e_prev = [0j] * (n + 1)
    e_cur = s[:]
    estimates = [s[-1]]
    for k in range(1, n):
        e_next = []
        for i in range(len(e_cur) - 1):
            d = e_cur[i + 1] - e_cur[i]
            if d == 0:
                e_next.append(complex(1e300))
            else:
                e_next.append(e_prev[i + 1] + 1.0 / d)
        e_prev, e_cur = e_cur, e_next
        if k % 2 == 0 and e_cur:
            estimates.append(e_cur[-1])
        if len(e_cur) < 2:
            break
    finite = [v for v in estimates if math.isfinite(abs(v)) and abs(v) < 1e250]
    if len(finite) < 2:
        return finite[-1], float("inf")
    return finite[-1], abs(finite[-1] - finite[-2])


def trapezoid_line(f: Callable[[np.ndarray], np.ndarray], h: float, *,
                   rel_floor: float = 1e-18, max_nodes: int = 2_000_000,
                   chunk: int = 256) -> complex:
    """Trapezoid rule on (-inf, inf) for an integrand decaying at both ends.

    The grid is grown outward in chunks until the integrand drops below
    rel_floor times its running maximum on both sides.
    """
    center = np.asarray(f(np.array([0.0])))[..., 0]
    total = center * 1.0
    peak = np.max(np.abs(center)) if np.ndim(center) else abs(center)
    for direction in (1.0, -1.0):
        k0 = 1
        while True:
            u = direction * h * np.arange(k0, k0 + chunk)
            v = np.asarray(f(u))
            total = total + v.sum(axis=-1)
            mags = np.abs(v).reshape(-1, chunk).max(axis=0) if v.ndim > 1 else np.abs(v)
            peak = max(peak, float(mags.max()))
            if mags[-chunk // 4:].max() <= rel_floor * peak:
                break
            k0 += chunk
            if k0 > max_nodes:
                raise NonConvergenceError("trapezoid_line failed to reach its decay floor")
    return total * h
