"""Command-line client for the specrecip service.

Runs the app in-process unless --url points at a running server.
Exit codes: 0 pass, 1 tolerance failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def dumps17(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps17(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + dumps17(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    return json.dumps(obj)


def _client(url: Optional[str]):
    if url:
        import httpx
        return httpx.Client(base_url=url, timeout=None)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient
    from .service import app
    return TestClient(app)


def _call(client, path: str, payload: dict) -> dict:
    r = client.post(path, json=payload)
    if 400 <= r.status_code < 500:
        detail = r.json().get("detail", r.text) if r.headers.get("content-type", "").startswith(
            "application/json") else r.text
        raise UsageError(detail if isinstance(detail, str) else json.dumps(detail))
    r.raise_for_status()
    return r.json()


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return data


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(columns, rows) -> str:
    import csv
    import io
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v
                    for v in (row.get(c) for c in columns)])
    return buf.getvalue()


def cmd_verify(args, client) -> int:
    payload = {"suite": args.suite, "seed": args.seed, "tol": args.tol,
               "config": _read_json(args.config) if args.config else {}}
    rep = _call(client, "/verify", payload)
    _emit(dumps17(rep) + "\n", args.out)
    for c in rep["cases"]:
        if not c["pass"]:
            print(f"FAIL {c['name']}: {c['value']} > {c['tol']}", file=sys.stderr)
    return EXIT_PASS if rep["pass"] else EXIT_FAIL


def cmd_sweep(args, client) -> int:
    cfg = _read_json(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.tol is not None:
        cfg["drift"] = args.tol
    res = _call(client, "/sweep", cfg)
    _emit(res["csv"], args.out)
    summary = {k: res[k] for k in ("fitted_constants", "drift", "pass", "config", "seed", "version")}
    print(dumps17(summary), file=sys.stderr)
    return EXIT_PASS if res["pass"] else EXIT_FAIL


def cmd_spectral_side(args, client) -> int:
    payload = {"weight": args.weight, "c_max": args.c_max}
    if args.data.startswith("synthetic"):
        _, _, seed = args.data.partition(":")
        payload["synthetic"] = {"seed": int(seed) if seed else (args.seed or 0),
                                "with_lvalues": True}
    else:
        try:
            with open(args.data, newline="") as fh:
                payload["data_csv"] = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.data}: {e.strerror}") from None
        payload["source"] = args.data
    res = _call(client, "/spectral-side", payload)
    _emit(dumps17(res) + "\n", args.out)
    if res.get("pass") is False:
        print(f"FAIL discrepancy {res['discrepancy']} exceeds budget {res['budget']}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


def cmd_table(args, client) -> int:
    res = _call(client, "/table", {"op": args.op, "args": args.args or []})
    _emit(_csv(res["columns"], res["rows"]), args.out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    from .suites import ALIASES, SUITES
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for randomised draws")
    common.add_argument("--tol", type=float, default=None, help="override the primary tolerance")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--url", default=None, help="base URL of a running service")

    p = argparse.ArgumentParser(prog="specrecip", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    names = sorted(set(SUITES) | set(ALIASES))
    v.add_argument("suite", help="one of: " + ", ".join(names))
    v.add_argument("--config", help="JSON file of suite option overrides")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="envelope sweep to CSV")
    s.add_argument("--config", required=True, help="JSON sweep config")
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("spectral-side", parents=[common], help="spectral side of a moment")
    d.add_argument("--data", required=True, help="eigendata CSV, or synthetic[:seed]")
    d.add_argument("--weight", required=True, help="e.g. kuznetsov:sign=-1,family=triple1,T=2")
    d.add_argument("--c-max", type=int, default=200, help="Kloosterman moduli summed")
    d.set_defaults(func=cmd_spectral_side)

    t = sub.add_parser("table", parents=[common], help="tabulate a function on a grid")
    t.add_argument("op", help="table op (see /table-ops)")
    t.add_argument("--args", nargs="*", metavar="KEY=V1,V2", help="argument lists")
    t.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    if args.command == "verify" and args.seed is None:
        args.seed = 0
    try:
        with _client(args.url) as client:
            return args.func(args, client)
    except UsageError as e:
        print(f"specrecip: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # server-side failures are not tolerance verdicts
        import httpx
        if isinstance(e, httpx.HTTPError):
            print(f"specrecip: service error: {e}", file=sys.stderr)
            return EXIT_FAIL
        raise


if __name__ == "__main__":
    sys.exit(main())
