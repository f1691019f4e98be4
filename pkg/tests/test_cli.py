"""Command-line behavior: formats, determinism, exit codes, schema validity."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "src" / "gridfourier" / "schemas" / "report.schema.json"
SCHEMA = json.loads(SCHEMA_PATH.read_text())


def check_schema(doc) -> None:
    jsonschema.validate(doc, SCHEMA)


def spec(specs_dir, name):
    return str(specs_dir / name)


# ---------------------------------------------------------------- validate


def test_validate_text(run_cli, specs_dir):
    code, out, err = run_cli(["validate", spec(specs_dir, "carpet.json")])
    assert code == 0
    assert out.startswith("OK: 3x3 grid, 8 kept cells")
    assert err == ""


def test_validate_json_schema(run_cli, specs_dir):
    code, out, _ = run_cli(["validate", spec(specs_dir, "carpet.json"), "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    check_schema(doc)
    assert doc["cellCount"] == 8 and doc["full"] is False and doc["uniform"] is True


def test_validate_rejects_malformed(run_cli, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": 1, "cols": 2, "cells": [[1, 1]], "weights": [["1/2", "1/3"]]}')
    code, out, err = run_cli(["validate", str(bad)])
    assert code == 1
    assert out == ""
    assert "error:" in err


def test_missing_spec_file(run_cli):
    code, _, err = run_cli(["validate", "/no/such/file.json"])
    assert code == 1 and "error:" in err


def test_unknown_command(run_cli):
    code, _, err = run_cli(["frobnicate"])
    assert code == 1 and "error:" in err


def test_unsupported_format(run_cli, specs_dir):
    code, _, err = run_cli(["stats", spec(specs_dir, "carpet.json"), "--format", "pgm"])
    assert code == 1 and "not supported" in err


# -------------------------------------------------------------- stats / dim


def test_stats_json(run_cli, specs_dir):
    code, out, _ = run_cli(["stats", spec(specs_dir, "carpet.json"), "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    check_schema(doc)
    assert doc["gamma1"] == "3/8" and doc["gamma2"] == "3/8"
    assert doc["rowCounts"] == [3, 2, 3]
    # every row's kept weights are equal (all cells carry 1/8)
    assert doc["b"] == 3


def test_stats_text_mentions_quantities(run_cli, specs_dir):
    code, out, _ = run_cli(["stats", spec(specs_dir, "fullgrid4.json")])
    assert code == 0
    assert "gamma1" in out and "betaMax" in out and "xi1" in out


def test_dim_known_value(run_cli, specs_dir):
    code, out, _ = run_cli(["dim", spec(specs_dir, "triangle.json")])
    assert code == 0
    assert out == "1.584962500721156\n"


def test_dim_json(run_cli, specs_dir):
    code, out, _ = run_cli(["dim", spec(specs_dir, "carpet.json"), "--format", "json"])
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0 and doc["dimension"] == pytest.approx(1.892789260714372, abs=1e-15)


def test_cli_runs_as_module(specs_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "gridfourier.cli", "dim", spec(specs_dir, "triangle.json")],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout == "1.584962500721156\n"


# ---------------------------------------------------------------- classify


def test_classify_text_verdict(run_cli, specs_dir):
    code, out, _ = run_cli(["classify", spec(specs_dir, "carpet.json")])
    assert code == 0
    assert "verdict: Type (2)" in out
    assert "sliceDirection: both" in out


def test_classify_json_schema_all_shipped_specs(run_cli, specs_dir):
    for path in sorted(specs_dir.glob("*.json")):
        code, out, _ = run_cli(["classify", str(path), "--format", "json"])
        assert code == 0, path.name
        doc = json.loads(out)
        check_schema(doc)
        assert doc["kind"] == "classify"


def test_classify_deterministic(run_cli, specs_dir):
    a = run_cli(["classify", spec(specs_dir, "triangle_weighted.json"), "--format", "json"])
    b = run_cli(["classify", spec(specs_dir, "triangle_weighted.json"), "--format", "json"])
    assert a == b


# ------------------------------------------------------- kakutani / frostman


def test_kakutani_csv(run_cli, specs_dir):
    code, out, _ = run_cli(["kakutani", spec(specs_dir, "carpet.json"), "--N", "5"])
    lines = out.strip().split("\n")
    assert code == 0
    assert lines[0] == "term,value"
    assert len(lines) == 6


def test_kakutani_json_affinity(run_cli, specs_dir):
    code, out, _ = run_cli(["kakutani", spec(specs_dir, "carpet.json"), "--format", "json", "--N", "10"])
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0
    assert doc["affinity"] == pytest.approx(0.9957819157813604, abs=1e-12)
    assert len(doc["curve"]) == 10


def test_kakutani_rejects_xy(run_cli, specs_dir):
    code, _, err = run_cli(["kakutani", spec(specs_dir, "carpet.json"), "--axis", "xy"])
    assert code == 1 and "one marginal" in err


def test_frostman_json(run_cli, specs_dir):
    code, out, _ = run_cli(
        ["frostman", spec(specs_dir, "carpet.json"), "--trials", "500", "--depth", "6", "--format", "json"]
    )
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0
    assert doc["passed"] is True and doc["violations"] == 0
    assert doc["trials"] == 500


def test_frostman_text_pass(run_cli, specs_dir):
    code, out, _ = run_cli(["frostman", spec(specs_dir, "triangle.json"), "--trials", "200", "--depth", "5"])
    assert code == 0 and out.strip().endswith("PASS")


# ----------------------------------------------------------------- moments


def test_moments_csv_1d(run_cli, specs_dir):
    code, out, _ = run_cli(["moments", spec(specs_dir, "carpet.json"), "--N", "3"])
    lines = out.strip().split("\n")
    assert code == 0
    assert lines[0] == "k,re,im,errorBound"
    assert len(lines) == 1 + 7
    zero_row = lines[1 + 3]
    assert zero_row == "0,1.0,0.0,0.0"


def test_moments_csv_2d_header(run_cli, specs_dir):
    code, out, _ = run_cli(["moments", spec(specs_dir, "carpet.json"), "--axis", "xy", "--N", "1", "--M", "1"])
    lines = out.strip().split("\n")
    assert code == 0
    assert lines[0] == "k,l,re,im,errorBound"
    assert len(lines) == 1 + 9


def test_moments_json_schema(run_cli, specs_dir):
    code, out, _ = run_cli(["moments", spec(specs_dir, "triangle.json"), "--N", "2", "--format", "json"])
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0 and len(doc["values"]) == 5


def test_moments_slice_descriptors(run_cli, specs_dir):
    for descriptor in ("1/3", "0 1", "1 period: 0 1"):
        code, out, _ = run_cli(["moments", spec(specs_dir, "carpet.json"), "--y", descriptor, "--N", "2"])
        assert code == 0, descriptor
        assert out.startswith("k,re,im,errorBound")


def test_moments_bad_slice_descriptor(run_cli, specs_dir):
    code, _, err = run_cli(["moments", spec(specs_dir, "carpet.json"), "--y", "zebra"])
    assert code == 1 and "error:" in err


# ------------------------------------------------------------------ render


def test_render_pgm_to_file(run_cli, specs_dir, tmp_path):
    out_path = tmp_path / "carpet.pgm"
    code, out, _ = run_cli(["render", spec(specs_dir, "carpet.json"), "--iters", "2", "--out", str(out_path)])
    assert code == 0 and out == ""
    data = out_path.read_bytes()
    assert data.startswith(b"P5\n9 9\n255\n")
    assert len(data) == len(b"P5\n9 9\n255\n") + 81
    code2, _, _ = run_cli(["render", spec(specs_dir, "carpet.json"), "--iters", "2", "--out", str(out_path)])
    assert code2 == 0 and out_path.read_bytes() == data
    stray = [p for p in tmp_path.iterdir() if p.name.startswith(".gridfourier-")]
    assert stray == []


def test_render_pgm_requires_out(run_cli, specs_dir):
    code, _, err = run_cli(["render", spec(specs_dir, "carpet.json"), "--iters", "1"])
    assert code == 1 and "--out is required" in err


def test_render_text_format(run_cli, specs_dir):
    code, out, _ = run_cli(["render", spec(specs_dir, "triangle.json"), "--iters", "1", "--format", "text"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "P2" and lines[1] == "2 2" and lines[2] == "255"


def test_render_budget_exit_code(run_cli, specs_dir):
    code, _, err = run_cli(["render", spec(specs_dir, "carpet.json"), "--iters", "12"])
    assert code == 2 and "budget error:" in err


# ------------------------------------------------------------------ sample


def test_sample_csv_deterministic(run_cli, specs_dir):
    a = run_cli(["sample", spec(specs_dir, "carpet.json"), "--N", "50"])
    b = run_cli(["sample", spec(specs_dir, "carpet.json"), "--N", "50"])
    assert a == b
    code, out, _ = a
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "x,y" and len(lines) == 51


def test_sample_seed_changes_points(run_cli, specs_dir):
    _, out0, _ = run_cli(["sample", spec(specs_dir, "carpet.json"), "--N", "20"])
    _, out1, _ = run_cli(["sample", spec(specs_dir, "carpet.json"), "--N", "20", "--seed", "1"])
    assert out0 != out1


def test_sample_json_schema(run_cli, specs_dir):
    code, out, _ = run_cli(["sample", spec(specs_dir, "triangle.json"), "--N", "5", "--format", "json"])
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0 and len(doc["points"]) == 5
    for x, y in doc["points"]:
        assert 0.0 <= x < 1.0 and 0.0 <= y < 1.0


# ------------------------------------------------------------- expansions


def test_expand1d_text_and_echo(run_cli, specs_dir):
    code, out, _ = run_cli(["expand1d", spec(specs_dir, "carpet.json"), "--N", "6", "--depth", "4"])
    assert code == 0
    assert "canonical order: n ascending" in out
    assert "frame bounds: A=1 B=1" in out
    assert "n,re,im" in out and "step,residual" in out


def test_expand1d_csv_echoes_to_stderr(run_cli, specs_dir):
    code, out, err = run_cli(
        ["expand1d", spec(specs_dir, "carpet.json"), "--N", "4", "--depth", "4", "--format", "csv"]
    )
    assert code == 0
    assert out.startswith("n,re,im")
    assert "canonical order" in err and "besselOk" in err


def test_expand1d_json_schema(run_cli, specs_dir):
    code, out, _ = run_cli(
        ["expand1d", spec(specs_dir, "carpet.json"), "--N", "5", "--depth", "4", "--format", "json"]
    )
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0
    assert doc["besselOk"] is True
    assert len(doc["coefficients"]) == 5
    assert len(doc["residuals"]) == 6
    # f defaults to the constant one: expansion terminates immediately
    assert doc["residuals"][-1] <= 1e-9


def test_expand2d_json_schema_type2(run_cli, specs_dir):
    code, out, _ = run_cli(
        ["expand2d", spec(specs_dir, "carpet.json"), "--N", "4", "--M", "4", "--depth", "2", "--format", "json"]
    )
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0
    assert doc["seriesType"] == 2 and doc["outerAxis"] == "x"
    assert doc["innerIndices"] == [0, 1, 2, 3]
    assert len(doc["coefficients"]) == 16


def test_expand2d_json_schema_type3(run_cli, specs_dir):
    code, out, _ = run_cli(
        [
            "expand2d",
            spec(specs_dir, "triangle_weighted.json"),
            "--N", "4", "--M", "3", "--depth", "3",
            "--fn", "e2:1,0",
            "--format", "json",
        ]
    )
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0
    assert doc["seriesType"] == 3
    assert doc["innerIndices"] == [0, 1, -1, 2, -2, 3, -3]


def test_expand2d_csv_headers(run_cli, specs_dir):
    code, out, err = run_cli(
        ["expand2d", spec(specs_dir, "fullgrid4.json"), "--N", "3", "--M", "3", "--depth", "2", "--format", "csv"]
    )
    assert code == 0
    assert out.startswith("n,m,re,im")
    assert "step,residual" in out
    assert "series type: (2)" in err


def test_expand2d_aliasing_range_is_input_error(run_cli, specs_dir):
    # bi-infinite inner indices wider than the depth-3 frequency capacity
    code, _, err = run_cli(["expand2d", spec(specs_dir, "triangle_weighted.json"), "--depth", "3"])
    assert code == 1 and "alias" in err


def test_expand2d_inconclusive_is_input_error(run_cli, specs_dir):
    code, _, err = run_cli(["expand2d", spec(specs_dir, "square_lebesgue.json"), "--N", "3", "--M", "3"])
    assert code == 1 and "Inconclusive" in err


def test_expand_bad_fn(run_cli, specs_dir):
    code, _, err = run_cli(["expand1d", spec(specs_dir, "carpet.json"), "--fn", "sin"])
    assert code == 1 and "error:" in err


# ---------------------------------------------------------------- diagnose


def test_diagnose_given_spec_json(run_cli, specs_dir):
    code, out, _ = run_cli(["diagnose", spec(specs_dir, "carpet.json"), "--format", "json"])
    doc = json.loads(out)
    check_schema(doc)
    assert code == 0
    assert doc["passed"] is True
    assert all(c["passed"] for c in doc["checks"])


def test_diagnose_full_suite(run_cli):
    code, out, _ = run_cli(["diagnose"])
    assert code == 0
    assert "all checks passed" in out
    assert "[FAIL]" not in out


# -------------------------------------------------------------- output file


def test_out_file_atomic_json(run_cli, specs_dir, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(["classify", spec(specs_dir, "carpet.json"), "--format", "json", "--out", str(target)])
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    check_schema(doc)
    assert [p.name for p in tmp_path.iterdir()] == ["report.json"]
