from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
import time

import pytest

from qmeas.cli import main
from qmeas.scenarios import PROVENANCES, SCENARIOS, run_scenario, verify_seeds

EXPECTED_NAMES = {
    "coin", "disease", "decay", "duality", "eraser", "helstrom", "usd",
    "usd-multi", "ifm", "zeno", "hardy", "three-box", "weak-pointer", "naimark",
}


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_text_and_json(capsys):
    code, out, _ = run_cli(capsys, "list", "--format", "json")
    assert code == 0
    table = json.loads(out)
    assert {s["name"] for s in table} == EXPECTED_NAMES
    assert len(table) == 14
    for s in table:
        assert s["anchors"] and all(isinstance(a, str) and a for a in s["anchors"])
        for p in s["params"]:
            assert set(p) == {"name", "type", "default", "help"}
    code, out, _ = run_cli(capsys, "list")
    assert code == 0
    assert all(name + ":" in out for name in EXPECTED_NAMES)


def test_run_schema_and_examples(capsys):
    code, out, _ = run_cli(capsys, "run", "hardy")
    assert code == 0
    doc = json.loads(out)
    assert list(doc)[:6] == ["scenario", "params", "seed", "values", "expected", "pass"]
    assert doc["pass"] is True
    assert doc["values"]["p_joint_dark"] == pytest.approx(0.0625, abs=1e-12)
    for exp in doc["expected"].values():
        assert set(exp) == {"value", "tolerance", "provenance", "anchor"}
        assert exp["provenance"] in PROVENANCES

    code, out, _ = run_cli(capsys, "run", "three-box")
    vals = json.loads(out)["values"]
    assert code == 0
    assert [vals["weak_A'"], vals["weak_B"], vals["weak_C'"]] == pytest.approx([1, 1, -1], abs=1e-12)

    code, out, _ = run_cli(capsys, "run", "coin", "--param", "H=0", "--param", "N=0")
    assert code == 0
    assert json.loads(out)["values"]["mean_flat"] == 0.5


@pytest.mark.parametrize("name", sorted(EXPECTED_NAMES))
def test_every_scenario_passes_with_defaults(name):
    res = run_scenario(name, seed=verify_seeds(0)[name])
    assert res.passed, res.failures()
    assert res.expected
    assert set(res.expected) <= set(res.values)


def test_byte_identical_output(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"]
    for path, seed in zip(paths, ("11", "11", "12")):
        assert main(["run", "usd", "--seed", seed, "--out", str(path)]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_bytes() != paths[2].read_bytes()
    for fmt in ("json", "csv"):
        outs = [run_cli(capsys, "run", "ifm", "--seed", "3", "--format", fmt, "--param", "trials=2000")[1] for _ in range(2)]
        assert outs[0] == outs[1]


def test_csv_is_the_values_table(capsys):
    _, out_json, _ = run_cli(capsys, "run", "zeno", "--seed", "1")
    _, out_csv, _ = run_cli(capsys, "run", "zeno", "--seed", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out_csv)))
    assert rows[0] == ["name", "value"]
    values = json.loads(out_json)["values"]
    assert [r[0] for r in rows[1:]] == list(values)
    assert [float(r[1]) for r in rows[1:]] == list(values.values())


def test_curves_are_xy_pairs(capsys):
    _, out, _ = run_cli(capsys, "run", "eraser")
    curves = json.loads(out)["curves"]
    assert set(curves) == {"pattern_d1", "pattern_d2", "unconditioned"}
    for c in curves.values():
        assert set(c) == {"x", "y"} and len(c["x"]) == len(c["y"]) == 256
    _, out, _ = run_cli(capsys, "run", "eraser", "--no-curves")
    assert "curves" not in json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "nope"],
        ["run", "coin", "--param", "X=1"],
        ["run", "coin", "--param", "N=ten"],
        ["run", "coin", "--param", "N"],
        ["run", "coin", "--param", "N=-1"],
        ["run", "coin", "--seed", "-1"],
        ["run", "coin", "--seed", str(2**64)],
        ["run", "coin", "--format", "xml"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    # argparse itself exits with status 2 for malformed command lines
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert capsys.readouterr().err


def test_numeric_failure_exit_1(capsys):
    code, out, err = run_cli(capsys, "run", "weak-pointer", "--param", "coupling=1.5")
    assert code == 1
    assert json.loads(out)["pass"] is False
    assert "FAIL weak-pointer." in err and "tolerance" in err
    code, _, err = run_cli(capsys, "run", "helstrom", "--param", "overlap=1.5")
    assert code == 1 and "overlap" in err


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 7, "format": "json", "params": {"samples": 2000, "overlap": 0.5}}))
    _, out, _ = run_cli(capsys, "run", "usd", "--config", str(cfg))
    doc = json.loads(out)
    assert doc["seed"] == 7 and doc["params"] == {"overlap": 0.5, "samples": 2000}
    _, out, _ = run_cli(capsys, "run", "usd", "--config", str(cfg), "--param", "samples=3000", "--seed", "8")
    doc = json.loads(out)
    assert doc["seed"] == 8 and doc["params"] == {"overlap": 0.5, "samples": 3000}
    _, out, _ = run_cli(capsys, "run", "usd", "--config", str(cfg), "--format", "csv")
    assert out.startswith("name,value\n")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"sead": 1}))
    assert run_cli(capsys, "run", "usd", "--config", str(bad))[0] == 2
    bad.write_text(json.dumps({"params": {"bogus": 1}}))
    assert run_cli(capsys, "run", "usd", "--config", str(bad))[0] == 2


def test_list_params_typed(capsys):
    code, out, _ = run_cli(capsys, "run", "duality", "--param", "overlaps=0,0.6", "--no-curves")
    doc = json.loads(out)
    assert code == 0 and doc["params"]["overlaps"] == [0.0, 0.6]
    assert doc["values"]["visibility_1"] == pytest.approx(0.6, abs=1e-9)


def test_verify_all_pass_quickly(capsys):
    start = time.perf_counter()
    code, out, _ = run_cli(capsys, "verify")
    elapsed = time.perf_counter() - start
    assert code == 0
    assert out.strip().splitlines()[-1] == "14/14 scenarios passed"
    assert elapsed < 60
    code, out, _ = run_cli(capsys, "verify", "--format", "json", "--seed", "5")
    assert code == 0 and all(r["pass"] for r in json.loads(out))


def test_verify_seeds_are_split_deterministically():
    a, b = verify_seeds(0), verify_seeds(0)
    assert a == b and list(a) == list(SCENARIOS)
    assert len(set(a.values())) == len(a)
    assert verify_seeds(1) != a


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmeas", "list", "--format", "json"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)) == 14
