"""CLI contract: config parsing, determinism, exit codes, file interfaces."""

import json
import os

import numpy as np
import pytest

from kwlab.cli import build_parser, emit_plotdata, main
from kwlab.config import SuiteConfig, build_config, parse_config_text
from kwlab.report import CheckReport, checks_to_json, make_check, write_checks_json


# ---------------------------------------------------------------------------
# report records
# ---------------------------------------------------------------------------

def test_make_check_pass_fail_logic():
    ok = make_check("calibrate", "x", computed=1.0, expected=1.0, tolerance=0.0)
    assert ok.status == "pass" and ok.gates
    bad = make_check("calibrate", "x", computed=1.1, expected=1.0,
                     tolerance=0.05)
    assert bad.status == "fail"
    info = make_check("calibrate", "x", computed=-1.0, info=True)
    assert info.status == "info" and not info.gates and info.passed
    with pytest.raises(ValueError):
        make_check("calibrate", "x", computed=1.0)  # no expected, no ok flag
    with pytest.raises(ValueError):
        CheckReport("a", "b", 0.0, None, 0.0, "meh", "derived")


def test_checks_json_deterministic_and_versioned():
    checks = [make_check("calibrate", "x", computed=1.0, expected=1.0,
                         tolerance=0.0)]
    a = checks_to_json(checks, {"seed": 1})
    b = checks_to_json(checks, {"seed": 1})
    assert a == b
    payload = json.loads(a)
    assert payload["schema_version"] == 1
    assert set(payload["checks"][0]) == {
        "check_id", "detail", "computed", "expected", "tolerance", "status",
        "provenance", "extra"}


def test_atomic_write_and_readback(tmp_path):
    path = tmp_path / "sub" / "report.json"
    checks = [make_check("ricci", "x", computed=2.0, expected=2.0,
                         tolerance=0.0)]
    write_checks_json(str(path), checks, {})
    data = json.loads(path.read_text())
    assert data["checks"][0]["check_id"] == "ricci"
    assert not [p for p in os.listdir(tmp_path / "sub")
                if p.startswith(".tmp-")]


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def test_config_parsing_and_precedence(tmp_path):
    text = """
    # acceptance-style configuration
    suite = decomposition
    seed = 7
    n = 123
    tol.calibrate = 1e-9
    """
    vals = parse_config_text(text)
    assert vals["suite"] == "decomposition" and vals["n"] == 123
    cfg = build_config(vals, {"seed": 99, "tol_overrides": {"ricci": 1e-3}})
    assert cfg.seed == 99           # CLI wins
    assert cfg.n == 123             # file preserved
    assert cfg.tol("calibrate", 1.0) == 1e-9
    assert cfg.tol("ricci", 1.0) == 1e-3
    assert cfg.tol("charge-model", 0.5) == 0.5


def test_config_rejects_unknown_keys_and_ids():
    with pytest.raises(ValueError, match="unknown config key"):
        parse_config_text("bogus = 3")
    with pytest.raises(ValueError, match="unknown check id"):
        SuiteConfig(tol_overrides={"no-such-check": 1e-3})
    with pytest.raises(ValueError, match="must be positive"):
        SuiteConfig(tol_overrides={"calibrate": 0.0})
    with pytest.raises(ValueError, match="unknown suite"):
        SuiteConfig(suite="everything")


# ---------------------------------------------------------------------------
# suites through the entry point
# ---------------------------------------------------------------------------

def test_verify_exit_codes_and_determinism(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    base = ["verify", "--suite", "decomposition", "--seed", "42",
            "--n", "300"]
    assert main(base + ["--out", str(out1)]) == 0
    assert main(base + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_verify_negative_control(tmp_path):
    out = tmp_path / "flip.json"
    code = main(["verify", "--suite", "models", "--flip-star-sign",
                 "--out", str(out)])
    assert code == 1
    data = json.loads(out.read_text())
    by_id = {c["check_id"]: c for c in data["checks"]}
    assert by_id["calibrate"]["status"] == "fail"


def test_usage_errors_exit_two(capsys):
    assert main(["verify", "--suite", "not-a-suite"]) == 2
    assert main(["verify", "--tol", "no-such-check=1e-3"]) == 2
    assert main(["verify", "--tol", "malformed"]) == 2


def test_io_error_exit_three(tmp_path):
    # parent of the output path is a regular file: creation must fail
    blocker = tmp_path / "blocker.txt"
    blocker.write_text("x")
    code = main(["verify", "--suite", "algebra",
                 "--out", str(blocker / "r.json")])
    assert code == 3


def test_parser_covers_documented_commands():
    ap = build_parser()
    sub = next(a for a in ap._actions
               if isinstance(a, type(ap._subparsers._group_actions[0])))
    assert set(sub.choices) >= {"verify", "energy", "solve", "residual",
                                "plotdata"}


def test_residual_command(tmp_path):
    out = tmp_path / "res.csv"
    code = main(["residual", "--model", "nahm-singular", "--n", "25",
                 "--seed", "3", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,y,res_eq1,res_eq2"
    assert len(lines) == 26
    worst = max(float(l.split(",")[4]) for l in lines[1:])
    assert worst < 1e-10


def test_plotdata_targets(tmp_path):
    cfg = SuiteConfig(suite="energy", n_pert=1)
    emit_plotdata("profiles", cfg, str(tmp_path))
    rows = (tmp_path / "profiles.csv").read_text().splitlines()
    assert rows[0] == "y,a,b"
    y0, a0, b0 = (float(x) for x in rows[1].split(","))
    assert abs(b0 * y0 - 1.0) < 5e-6  # pole normalisation at the small end

    emit_plotdata("eps-sweep", cfg, str(tmp_path))
    rows = (tmp_path / "eps-sweep.csv").read_text().splitlines()
    assert rows[0] == "eps,two_phi_bulk,mixed_boundary,combination"
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    # each summand grows like 1/eps (three decades => ratio ~ 1000) while
    # the combination stabilises toward the small-eps end
    assert data[0, 1] / data[-1, 1] > 500
    assert data[0, 2] / data[-1, 2] > 500
    combos = data[:5, 3]  # eps <= 6.3e-4: linear-in-eps drift only
    assert np.max(np.abs(combos - combos[0])) < 1e-3 * abs(combos[0])

    emit_plotdata("integrands", cfg, str(tmp_path))
    header = (tmp_path / "integrands.csv").read_text().splitlines()[0]
    assert header == "y,F_sq,nabla_bar_sq,S_sq,phi_sq"


def test_solve_command(tmp_path):
    prof = tmp_path / "profile.csv"
    log = tmp_path / "log.json"
    code = main(["solve", "--y0", "0.1", "--out-profile", str(prof),
                 "--out-log", str(log)])
    assert code == 0
    lines = prof.read_text().splitlines()
    assert lines[0] == "y,a,b"
    payload = json.loads(log.read_text())
    assert abs(payload["parameter"] + 2.0 / 3.0) < 1e-4
    assert payload["trace"][0]["outcome"] in ("blow", "decayed")


def test_energy_command(tmp_path):
    out = tmp_path / "energy-report.json"
    code = main(["energy", "--model", "he", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    names = {e["name"] for e in data["entries"]}
    assert {"curvature_l2_sq", "c_limit", "bound_constant",
            "topological_charge", "c_model"} <= names
    sweep = (tmp_path / "identity-sweep.csv").read_text().splitlines()
    assert sweep[0] == "eps,lhs,rhs,gap"
    for row in sweep[1:]:
        eps, lhs, rhs, gap = (float(x) for x in row.split(","))
        assert abs(gap) <= 1e-6 * abs(rhs)
