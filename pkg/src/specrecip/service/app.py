"""FastAPI application wrapping the verification suites, sweeps, spectral sides and tables."""

import math
from dataclasses import asdict

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import NonConvergenceError, SpecRecipError
from ..spectral import kuznetsov_check, parse_dataset, parse_weight, spectral_side, synthetic_dataset
from ..suites import SUITES, run_suite
from ..sweep import SweepConfig, run_sweep
from ..tables import OPS, parse_args, run_table
from . import schemas

app = FastAPI(title="specrecip", version=__version__)


def plain(obj):
    """numpy scalars and arrays to builtins; non-finite floats to None (JSON has no inf)."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": plain(obj.real), "im": plain(obj.imag)}
    return obj


@app.exception_handler(NonConvergenceError)
def _nonconvergence(request: Request, exc: NonConvergenceError):
    return JSONResponse(status_code=500, content={"detail": f"did not converge: {exc}"})


@app.exception_handler(SpecRecipError)
def _bad_input(request: Request, exc: SpecRecipError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health", response_model=schemas.Health)
def health():
    return {"status": "ok", "version": __version__}


@app.get("/suites", response_model=list[schemas.SuiteInfo])
def suites():
    return [{"name": s.name, "alias": s.alias, "description": s.description,
             "defaults": s.defaults} for s in SUITES.values()]


@app.post("/verify", response_model=schemas.SuiteReport, response_model_by_alias=True)
def verify(req: schemas.VerifyRequest):
    rep = run_suite(req.suite, req.config, seed=req.seed, tol=req.tol)
    return plain(rep.to_dict())


@app.post("/sweep", response_model=schemas.SweepResponse, response_model_by_alias=True)
def sweep(cfg: schemas.SweepConfig):
    res = run_sweep(SweepConfig.from_dict(cfg.model_dump()))
    fitted = [{"t_g": r.params["t_g"], "theta": r.params["theta"], "T": r.params["T"],
               "constant": r.fitted_constant} for r in res.reports]
    return plain({"csv": res.csv_text(), "fitted_constants": fitted, "drift": res.drift,
                  "pass": res.passed, "config": res.config.to_dict(), "seed": res.config.seed,
                  "version": __version__})


@app.post("/spectral-side", response_model=schemas.SpectralSideResponse,
          response_model_by_alias=True)
def spectral(req: schemas.SpectralSideRequest):
    if (req.data_csv is None) == (req.synthetic is None):
        raise HTTPException(422, "give exactly one of data_csv and synthetic")
    if req.synthetic is not None:
        ds = synthetic_dataset(**req.synthetic.model_dump())
    else:
        ds = parse_dataset(req.data_csv, source=req.source)
    weight = parse_weight(req.weight)
    info = {"source": ds.source, "records": len(ds.records), "synthetic": ds.synthetic,
            "n_lambda": ds.n_lambda if ds.records else 0}
    out = {"dataset": info, "weight": asdict(weight), "version": __version__}
    if weight.kind == "kuznetsov":
        chk = kuznetsov_check(ds, weight, req.c_max)
        out.update(spectral=asdict(chk.spectral), geometric=asdict(chk.geometric),
                   discrepancy=chk.discrepancy, budget=chk.budget)
        out["pass"] = chk.passed
    else:
        out["spectral"] = asdict(spectral_side(ds, weight))
    return plain(out)


@app.get("/table-ops", response_model=list[schemas.TableOpInfo])
def table_ops():
    return [{"op": name, "doc": op.doc, "params": {k: d for k, (_, d) in op.params.items()}}
            for name, op in OPS.items()]


@app.post("/table", response_model=schemas.TableResponse)
def table(req: schemas.TableRequest):
    rows = run_table(req.op, parse_args(req.op, req.args))
    cols = list(rows[0]) if rows else []
    return plain({"op": req.op, "columns": cols, "rows": rows, "version": __version__})
