"""Command-line scenario runner.

``qmeas run <scenario>`` computes one scenario and writes its table as JSON
or CSV; ``qmeas list`` describes the scenarios; ``qmeas verify`` runs every
scenario with its defaults and checks all expected values.

Exit codes: 0 when every expected value holds, 1 on a numeric failure, 2 on
a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from .errors import QMeasError
from .scenarios import SCENARIOS, get_scenario, list_scenarios, run_scenario, verify_seeds

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 0
DEFAULT_FORMAT = "json"
CONFIG_KEYS = {"seed", "format", "out", "params"}


class UsageError(Exception):
    pass


def _seed(text) -> int:
    try:
        seed = int(text)
    except (TypeError, ValueError):
        raise UsageError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2**64:
        raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}; allowed: {sorted(CONFIG_KEYS)}")
    if not isinstance(cfg.get("params", {}), dict):
        raise UsageError("config 'params' must be an object")
    return cfg


def _parse_params(scenario_name: str, pairs: Sequence[str], config_params: dict) -> dict:
    """Config-file params overridden by ``--param k=v`` flags, typed by the scenario schema."""
    scenario = get_scenario(scenario_name)
    params = {}
    for key, value in config_params.items():
        params[key] = scenario.param(key).coerce(value)
    for pair in pairs:
        key, sep, text = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        params[key.strip()] = scenario.param(key.strip()).parse(text.strip())
    return params


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def render_csv(values: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "value"])
    for name, value in values.items():
        writer.writerow([name, repr(value)])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    if args.scenario not in SCENARIOS:
        raise UsageError(f"unknown scenario {args.scenario!r}; choose from {', '.join(SCENARIOS)}")
    seed = _seed(args.seed if args.seed is not None else cfg.get("seed", DEFAULT_SEED))
    fmt = args.format or cfg.get("format", DEFAULT_FORMAT)
    if fmt not in ("json", "csv"):
        raise UsageError(f"format must be 'json' or 'csv', got {fmt!r}")
    out = args.out if args.out is not None else cfg.get("out")
    try:
        params = _parse_params(args.scenario, args.param or [], cfg.get("params", {}))
    except QMeasError as exc:
        raise UsageError(str(exc)) from None

    try:
        result = run_scenario(args.scenario, params, seed)
    except QMeasError as exc:
        print(f"error: scenario {args.scenario!r} failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = render_json(result.as_dict(include_curves=not args.no_curves)) if fmt == "json" else render_csv(result.values)
    _emit(text, out)
    for line in result.failures():
        print(f"FAIL {line}", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_list(args) -> int:
    table = list_scenarios()
    if args.format == "json":
        _emit(render_json(table), None)
        return EXIT_OK
    lines = []
    for s in table:
        params = ", ".join(f"{p['name']}:{p['type']}={p['default']}" for p in s["params"]) or "(none)"
        lines.append(f"{s['name']}: {s['description']}")
        lines.append(f"  params: {params}")
        for anchor in s["anchors"]:
            lines.append(f"  anchor: {anchor}")
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = _seed(args.seed)
    seeds = verify_seeds(seed)
    results = []
    for name in SCENARIOS:
        try:
            results.append((name, run_scenario(name, seed=seeds[name]), None))
        except QMeasError as exc:
            results.append((name, None, str(exc)))
    if args.format == "json":
        payload = [
            r.as_dict(include_curves=False) if r is not None else {"scenario": n, "error": e, "pass": False}
            for n, r, e in results
        ]
        _emit(render_json(payload), args.out)
    else:
        lines = []
        for name, res, err in results:
            ok = res is not None and res.passed
            lines.append(f"{'PASS' if ok else 'FAIL'} {name}")
            if err is not None:
                lines.append(f"  error: {err}")
            elif not ok:
                lines.extend(f"  {line}" for line in res.failures())
        n_pass = sum(1 for _, r, _ in results if r is not None and r.passed)
        lines.append(f"{n_pass}/{len(results)} scenarios passed")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r is not None and r.passed for _, r, _ in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmeas", description="Quantum measurement scenario runner")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("scenario", help=f"one of: {', '.join(SCENARIOS)}")
    run.add_argument("--param", action="append", metavar="KEY=VALUE", help="override a scenario parameter")
    run.add_argument("--seed", default=None, help=f"64-bit seed (default {DEFAULT_SEED})")
    run.add_argument("--format", choices=("json", "csv"), default=None, help="output format (default json)")
    run.add_argument("--out", default=None, help="write to this path instead of standard output")
    run.add_argument("--config", default=None, help="JSON file with seed, format, out, params")
    run.add_argument("--no-curves", action="store_true", help="omit (x, y) curves from JSON output")
    run.set_defaults(func=cmd_run)

    lst = sub.add_parser("list", help="describe the scenarios")
    lst.add_argument("--format", choices=("text", "json"), default="text")
    lst.set_defaults(func=cmd_list)

    ver = sub.add_parser("verify", help="run every scenario with defaults and check expected values")
    ver.add_argument("--seed", default=DEFAULT_SEED, help=f"root seed (default {DEFAULT_SEED})")
    ver.add_argument("--format", choices=("text", "json"), default="text")
    ver.add_argument("--out", default=None)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qmeas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
