import json
import math
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from specrecip import __version__
from specrecip.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, dumps17, main
from specrecip.service import app
from specrecip.spectral import synthetic_dataset, write_dataset
from specrecip.suites import ALIASES, SUITES, resolve_suite

REPORT_KEYS = {"suite", "cases", "max_deviation", "fitted_constants", "pass", "config", "seed",
               "version"}
BELOW_GAP = "kuznetsov:sign=-1,family=triple1,M=2,T=1.5"


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health_and_listings(client):
    assert client.get("/health").json() == {"status": "ok", "version": __version__}
    suites = client.get("/suites").json()
    assert {s["name"] for s in suites} == set(SUITES)
    assert {s["alias"] for s in suites} <= set(ALIASES)
    ops = {o["op"] for o in client.get("/table-ops").json()}
    assert {"kloosterman", "zeta", "big-h"} <= ops


def test_verify_endpoint_report_shape(client):
    r = client.post("/verify", json={"suite": "afe-weights", "seed": 3})
    assert r.status_code == 200
    rep = r.json()
    assert REPORT_KEYS <= set(rep)
    assert rep["suite"] == "afe-weights" and rep["seed"] == 3 and rep["version"] == __version__
    assert rep["pass"] is True
    assert all({"name", "metric", "value", "tol", "pass"} <= set(c) for c in rep["cases"])


def test_every_alias_resolves_to_its_suite():
    for name, suite in SUITES.items():
        assert resolve_suite(name) is suite
        assert resolve_suite(suite.alias) is suite
    assert len(ALIASES) == len(SUITES)


def test_verify_config_override(client):
    rep = client.post("/verify", json={"suite": "afe-weights", "config": {"X": 3.0}}).json()
    assert rep["config"]["X"] == 3.0


@pytest.mark.parametrize("payload", [
    {"suite": "no-such-suite"},
    {"suite": "afe-weights", "config": {"bogus": 1}},
    {"suite": "afe-weights", "tol": 0},
    {"suite": "afe-weights", "extra": 1},
])
def test_verify_bad_requests_are_4xx(client, payload):
    assert 400 <= client.post("/verify", json=payload).status_code < 500


def test_spectral_side_endpoint(client):
    r = client.post("/spectral-side", json={"synthetic": {"n_records": 0}, "weight": BELOW_GAP,
                                            "c_max": 150})
    assert r.status_code == 200
    body = r.json()
    assert body["pass"] is True and body["discrepancy"] < 1e-6
    r = client.post("/spectral-side", json={"weight": BELOW_GAP})
    assert r.status_code == 422
    r = client.post("/spectral-side", json={"synthetic": {}, "weight": "second:family=triple1"})
    assert r.status_code == 422  # synthetic data without L-values lacks the columns


def test_table_endpoint(client):
    body = client.post("/table", json={"op": "ramanujan", "args": ["c=4", "n=1,2"]}).json()
    assert body["columns"] == ["c", "n", "value"]
    assert [row["value"] for row in body["rows"]] == [0.0, -2.0]
    assert client.post("/table", json={"op": "zeta", "args": []}).status_code == 422


def test_dumps17_round_trips_doubles():
    x = 0.1 + 0.2
    text = dumps17({"a": [x, 1, "s", None, True], "b": {}, "c": [], "d": math.inf})
    back = json.loads(text)
    assert back["a"][0] == x and "0.30000000000000004" in text
    assert back["d"] is None and back["b"] == {} and back["c"] == []


def test_cli_verify_pass_and_out(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["verify", "afe-weights", "--seed", "1", "--out", str(out)]) == EXIT_PASS
    rep = json.loads(out.read_text())
    assert REPORT_KEYS <= set(rep) and rep["seed"] == 1


def test_cli_verify_tolerance_failure(capsys):
    assert main(["verify", "afe-weights", "--tol", "1e-30"]) == EXIT_FAIL
    assert "FAIL" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["verify", "no-such-suite"],
    ["verify", "afe-weights", "--tol", "-1"],
    ["verify", "afe-weights", "--config", "/nonexistent.json"],
    ["table", "zeta"],
    ["table", "nope"],
    ["spectral-side", "--data", "/nonexistent.csv", "--weight", BELOW_GAP],
    ["spectral-side", "--data", "synthetic", "--weight", "kuznetsov:sign=7"],
])
def test_cli_usage_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["sweep"], ["verify"]])
def test_cli_argparse_errors_exit_2(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == EXIT_USAGE


def test_cli_bad_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("[1, 2]")
    assert main(["sweep", "--config", str(cfg)]) == EXIT_USAGE
    cfg.write_text("{not json")
    assert main(["sweep", "--config", str(cfg)]) == EXIT_USAGE
    cfg.write_text(json.dumps({"theta": [1.5]}))
    assert main(["sweep", "--config", str(cfg)]) == EXIT_USAGE


def test_cli_sweep_is_byte_identical(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"t_g": [100], "theta": [0.5], "n_points": 3, "M": 4}))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(a)]) == EXIT_PASS
    assert main(["sweep", "--config", str(cfg), "--out", str(b), "--seed", "9"]) == EXIT_PASS
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("quantity,t_g,theta,T,M,t,value,envelope,ratio,fitted_constant\n")


def test_cli_spectral_side_from_file(tmp_path):
    path = tmp_path / "d.csv"
    write_dataset(synthetic_dataset(0, 3), str(path))
    out = tmp_path / "s.json"
    argv = ["spectral-side", "--data", str(path), "--weight", BELOW_GAP, "--c-max", "150",
            "--out", str(out)]
    assert main(argv) == EXIT_PASS
    assert json.loads(out.read_text())["pass"] is True
    # a Gaussian weight has no certified truncation bound
    assert main(["spectral-side", "--data", "synthetic:2", "--weight",
                 "kuznetsov:family=gaussian,T=1.5", "--c-max", "20"]) == EXIT_FAIL


def test_cli_table_csv(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["table", "kloosterman", "--args", "m=1", "n=1", "c=3,5", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m,n,c,value,weil_bound" and len(lines) == 3
