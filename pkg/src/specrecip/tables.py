"""Pointwise evaluation tables: `table <op> key=value ...`.

Every argument may be a comma-separated list; the table is the product of
all lists, one row per combination, in the order the arguments were given.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .arith import divisor_eigenvalue, kloosterman, ramanujan_sum, weil_bound
from .besselkern import KernelOrder, kernel
from .complexfn import hurwitz_zeta, zeta
from .errors import ParameterError
from .mellin import mellin_kernel
from .oscillatory import afe_weight, stat_integral
from .reciprocity import big_h, big_h_asymptotic
from .transforms import l_hol_hplus_closed, l_plus_hplus_closed


def _order(kind: str, r: float, k: int) -> KernelOrder:
    if kind == "hol":
        return KernelOrder.hol(k)
    if kind not in ("plus", "minus"):
        raise ParameterError("kind must be plus, minus or hol")
    return KernelOrder(kind, r)


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _kernel(kind, r, k, x):
    return {"value": float(kernel(_order(kind, r, k), x))}


def _mellin(kind, r, k, sigma, tau):
    v = mellin_kernel(_order(kind, r, k), complex(sigma, tau))
    return {**_cplx(v.value), "error_estimate": v.error_estimate}


def _kloosterman(m, n, c):
    return {"value": float(kloosterman(m, n, c)), "weil_bound": weil_bound(m, n, c)}


def _afe(x, t, eps, t_g, X, sign, sigma):
    w = afe_weight([x], t, eps, t_g, X, sign=sign, sigma=sigma)[0]
    return {"value": w.value, "error_estimate": w.error_estimate}


def _stat(t, t_g, U, c):
    r = stat_integral(t, t_g, U, c)
    return {"value": r.value, "error_estimate": r.error_estimate, "bound": r.bound}


def _l_hplus(kind, arg, M, T):
    if kind not in ("plus", "hol"):
        raise ParameterError("kind must be plus or hol")
    f = l_plus_hplus_closed if kind == "plus" else l_hol_hplus_closed
    a = int(arg) if kind == "hol" else arg
    if kind == "hol" and a != arg:
        raise ParameterError("holomorphic weights are integers")
    return _cplx(np.asarray(f(a, M, T)).ravel()[0])


@dataclass(frozen=True)
class TableOp:
    func: Callable
    params: dict  # name -> (type, default or None when required)
    doc: str


OPS = {
    "big-h": TableOp(lambda t, t_g: {"value": float(big_h(t, t_g)),
                                     "asymptotic": float(big_h_asymptotic(t, t_g)[0])},
                     {"t": (float, None), "t_g": (float, None)},
                     "the L^4 expansion weight H(t) and its asymptotic main term"),
    "kernel": TableOp(_kernel, {"kind": (str, None), "r": (float, 0.0), "k": (int, 2),
                                "x": (float, None)},
                      "Bessel kernels J^+_r, J^-_r, J^hol_k at x"),
    "mellin-kernel": TableOp(_mellin, {"kind": (str, None), "r": (float, 0.0), "k": (int, 2),
                                       "sigma": (float, None), "tau": (float, 0.0)},
                             "closed-form Mellin transform of a kernel"),
    "kloosterman": TableOp(_kloosterman, {"m": (int, None), "n": (int, None), "c": (int, None)},
                           "S(m, n; c) and its Weil bound"),
    "ramanujan": TableOp(lambda c, n: {"value": float(ramanujan_sum(c, n))},
                         {"c": (int, None), "n": (int, None)}, "Ramanujan sum c_c(n)"),
    "divisor-eigenvalue": TableOp(lambda n, t: {"value": float(divisor_eigenvalue(n, t))},
                                  {"n": (int, None), "t": (float, None)},
                                  "Eisenstein Hecke eigenvalue sum_{ab=n} (a/b)^{it}"),
    "zeta": TableOp(lambda sigma, tau: _cplx(zeta(complex(sigma, tau))),
                    {"sigma": (float, None), "tau": (float, 0.0)}, "Riemann zeta"),
    "hurwitz-zeta": TableOp(lambda sigma, tau, a: _cplx(hurwitz_zeta(complex(sigma, tau), a)),
                            {"sigma": (float, None), "tau": (float, 0.0), "a": (float, None)},
                            "Hurwitz zeta"),
    "afe-weight": TableOp(_afe, {"x": (float, None), "t": (float, None), "eps": (int, 1),
                                 "t_g": (float, None), "X": (float, 1.0), "sign": (int, 1),
                                 "sigma": (float, 1.0)},
                          "approximate functional equation weight V^pm"),
    "stat-integral": TableOp(_stat, {"t": (float, None), "t_g": (float, None), "U": (float, None),
                                     "c": (float, 10.0)},
                             "cubic-phase double integral and its size bound"),
    "l-hplus": TableOp(_l_hplus, {"kind": (str, None), "arg": (float, None), "M": (int, None),
                                  "T": (float, None)},
                       "closed-form L^+ / L^hol transform of H^+"),
}


def parse_args(op: str, items) -> dict:
    """['x=1,2', 't=3'] -> {'x': [1.0, 2.0], 't': [3.0]} with defaults filled in."""
    if op not in OPS:
        raise ParameterError(f"unknown table op {op!r}; known: {', '.join(sorted(OPS))}")
    spec = OPS[op].params
    out = {}
    for item in items:
        key, eq, val = item.partition("=")
        if not eq or key not in spec:
            raise ParameterError(f"bad argument {item!r} for {op}; expected one of {', '.join(spec)}")
        typ = spec[key][0]
        try:
            out[key] = [typ(v) for v in val.split(",") if v != ""]
        except ValueError:
            raise ParameterError(f"bad value for {key}: {val!r}") from None
        if not out[key]:
            raise ParameterError(f"empty value for {key}")
    for key, (_, default) in spec.items():
        if key not in out:
            if default is None:
                raise ParameterError(f"{op} needs {key}=...")
            out[key] = [default]
    return out


def run_table(op: str, args: dict) -> list:
    """Rows of inputs and outputs; args maps each parameter to a list of values."""
    if op not in OPS:
        raise ParameterError(f"unknown table op {op!r}")
    keys = list(args)
    rows = []
    for combo in itertools.product(*(args[k] for k in keys)):
        kw = dict(zip(keys, combo))
        rows.append({**kw, **OPS[op].func(**kw)})
    return rows
