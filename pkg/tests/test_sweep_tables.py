import csv
import io

import mpmath
import pytest

from specrecip.errors import ParameterError
from specrecip.sweep import CSV_COLUMNS, SweepConfig, run_sweep
from specrecip.tables import OPS, parse_args, run_table

SMALL = {"quantity": "hcal", "t_g": [100.0], "theta": [0.5], "n_points": 3, "M": 4}


@pytest.fixture(scope="module")
def small_sweep():
    return run_sweep(SweepConfig.from_dict(SMALL))


def test_sweep_is_deterministic_and_order_independent(small_sweep):
    again = run_sweep(SweepConfig.from_dict({**SMALL, "workers": 1}))
    assert small_sweep.csv_text() == again.csv_text()


def test_sweep_csv_shape(small_sweep):
    rows = list(csv.reader(io.StringIO(small_sweep.csv_text())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + SMALL["n_points"]
    body = [dict(zip(rows[0], r)) for r in rows[1:]]
    assert {r["quantity"] for r in body} == {"hcal"}
    assert [float(r["t"]) for r in body] == [0.0, 100.0, 200.0]
    for r in body:
        # the CSV carries 17 significant digits, so it reproduces the ratio exactly
        assert float(r["value"]) / float(r["envelope"]) == pytest.approx(float(r["ratio"]), rel=1e-15)
    assert small_sweep.drift == 1.0 and small_sweep.passed


def test_sweep_drift_over_two_blocks():
    res = run_sweep(SweepConfig.from_dict({**SMALL, "theta": [0.5, 0.6]}))
    consts = [r.fitted_constant for r in res.reports]
    assert [r.params["theta"] for r in res.reports] == [0.5, 0.6]
    assert res.drift == pytest.approx(max(consts) / min(consts))


@pytest.mark.parametrize("bad", [
    {"quantity": "nope"}, {"triple": "triple2"}, {"theta": [1.0]}, {"theta": []},
    {"t_g": [1.0]}, {"M": 0}, {"n_points": 1}, {"drift": 0.5}, {"workers": 0}, {"colour": 1},
])
def test_sweep_config_validation(bad):
    with pytest.raises(ParameterError):
        SweepConfig.from_dict(bad)


def test_sweep_config_round_trip():
    cfg = SweepConfig.from_dict(SMALL)
    assert SweepConfig.from_dict(cfg.to_dict()) == cfg


def test_parse_args_product_and_defaults():
    args = parse_args("kloosterman", ["m=1,2", "n=3", "c=5,7"])
    rows = run_table("kloosterman", args)
    assert len(rows) == 4
    assert [(r["m"], r["c"]) for r in rows] == [(1, 5), (1, 7), (2, 5), (2, 7)]
    for r in rows:
        assert abs(r["value"]) <= r["weil_bound"] + 1e-9
    assert parse_args("zeta", ["sigma=2"])["tau"] == [0.0]


@pytest.mark.parametrize("op,items", [
    ("nope", []), ("zeta", []), ("zeta", ["sigma"]), ("zeta", ["sigma=abc"]),
    ("zeta", ["sigma=,"]), ("zeta", ["sigma=2", "rho=1"]),
])
def test_parse_args_errors(op, items):
    with pytest.raises(ParameterError):
        parse_args(op, items)


def test_table_values_against_mpmath():
    z = run_table("zeta", parse_args("zeta", ["sigma=0.5", "tau=14,20"]))
    for r in z:
        ref = mpmath.zeta(mpmath.mpc(r["sigma"], r["tau"]))
        assert abs(complex(r["re"], r["im"]) - complex(ref)) < 1e-10
    k = run_table("kernel", parse_args("kernel", ["kind=minus", "r=2", "x=0.3"]))[0]
    ref = 4 * mpmath.cosh(2 * mpmath.pi) * mpmath.besselk(4j, 4 * mpmath.pi * 0.3)
    assert k["value"] == pytest.approx(float(mpmath.re(ref)), rel=1e-10)
    rs = run_table("ramanujan", parse_args("ramanujan", ["c=6", "n=1,2,3,6"]))
    assert [r["value"] for r in rs] == [1.0, -1.0, -2.0, 2.0]


def test_every_op_runs_on_sample_arguments():
    samples = {
        "big-h": ["t=5", "t_g=10"],
        "kernel": ["kind=hol", "k=4", "x=0.5"],
        "mellin-kernel": ["kind=plus", "r=1", "sigma=0.5", "tau=2"],
        "kloosterman": ["m=1", "n=1", "c=7"],
        "ramanujan": ["c=5", "n=5"],
        "divisor-eigenvalue": ["n=6", "t=1.5"],
        "zeta": ["sigma=2"],
        "hurwitz-zeta": ["sigma=2", "a=0.5"],
        "afe-weight": ["x=1", "t=20", "t_g=20"],
        "stat-integral": ["t=200", "t_g=100", "U=4"],
        "l-hplus": ["kind=hol", "arg=4", "M=1", "T=5"],
    }
    assert set(samples) == set(OPS)
    for op, items in samples.items():
        rows = run_table(op, parse_args(op, items))
        assert len(rows) == 1


def test_table_domain_errors():
    with pytest.raises(ParameterError):
        run_table("kernel", parse_args("kernel", ["kind=sideways", "x=1"]))
    with pytest.raises(ParameterError):
        run_table("l-hplus", parse_args("l-hplus", ["kind=hol", "arg=2.5", "M=1", "T=5"]))
    with pytest.raises(ParameterError):
        run_table("nope", {})
