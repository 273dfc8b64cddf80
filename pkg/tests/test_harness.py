"""Instance files, pipelines, the dense oracle, reports, and the CLI."""

import json
import subprocess
import sys

import pytest

from tatesplice.arith import PrimeField, VariableContext, parse_polynomial
from tatesplice.errors import ContainmentError
from tatesplice.freecomplex import BaseRing
from tatesplice.harness import (
    ProblemInstance,
    betti_text,
    dump_output,
    oracle_homology,
    report_text,
    run_build,
    run_verify,
)
from tatesplice.koszul import koszul_complex

F = PrimeField(32003)


def cli(*args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "tatesplice.cli", *args],
        capture_output=True,
        text=True,
        **kw,
    )


def test_instance_roundtrip(inst_t):
    doc = inst_t.instance.to_doc()
    again = ProblemInstance.from_doc(doc)
    assert again == inst_t.instance


def test_instance_rejects_unknown_fields(inst_t):
    doc = inst_t.instance.to_doc()
    doc["strategy"] = "fast"
    with pytest.raises(ValueError, match="unknown instance fields"):
        ProblemInstance.from_doc(doc)


def test_instance_rejects_missing_fields(inst_t):
    doc = inst_t.instance.to_doc()
    del doc["window"]
    with pytest.raises(ValueError, match="missing instance fields"):
        ProblemInstance.from_doc(doc)


def test_run_build_instance_t(build_t):
    ranks = [sum(build_t["betti"][str(i)].values()) for i in range(-4, 6)]
    assert ranks == [4, 3, 2, 1, 1, 2, 3, 4, 5, 6]
    assert all(v.get("passed") for v in build_t["certificates"].values())
    assert build_t["mcm"]["generator_count"] == 1
    assert build_t["mcm"]["matrix"] == [["x", "y"]]


def test_run_build_validation_error():
    inst = ProblemInstance(
        field_char=32003, variables=["x", "y"], f=["x^2", "y^2"], g=["x*y"],
        window=(-2, 3), max_internal_degree=6,
    )
    with pytest.raises(ContainmentError, match="NotInIdeal"):
        run_build(inst)


def test_run_build_deterministic_bytes(inst_t):
    a = dump_output(run_build(inst_t.instance))
    b = dump_output(run_build(inst_t.instance))
    assert a == b


def test_run_build_with_explicit_lift_matrix(inst_t, build_t):
    inst = ProblemInstance.from_doc(
        {**inst_t.instance.to_doc(), "A": [["x", "0"], ["0", "y"]]}
    )
    doc = run_build(inst)
    # same lift as the division-tracked one, so the complex agrees
    assert doc["tate"] == build_t["tate"]


def test_run_build_rejects_invalid_lift_matrix(inst_t):
    from tatesplice.errors import LiftIdentityError

    inst = ProblemInstance.from_doc(
        {**inst_t.instance.to_doc(), "A": [["x", "0"], ["0", "x"]]}
    )
    with pytest.raises(LiftIdentityError):
        run_build(inst)


def test_run_verify_roundtrip(build_t):
    ok, rows = run_verify(build_t)
    assert ok
    assert [name for name, _, _ in rows] == [
        "d_squared_zero",
        "acyclicity",
        "minimality",
        "betti_table",
    ]
    text = report_text(rows)
    assert "PASS" in text and "FAIL" not in text


def test_run_verify_detects_corruption(build_t):
    doc = json.loads(dump_output(build_t))
    # corrupt one differential entry
    pos = sorted(doc["tate"]["diffs"])[0]
    doc["tate"]["diffs"][pos][0][0] = "x^2"
    ok, rows = run_verify(doc)
    assert not ok


def test_run_verify_truncated_window_reports_windowedge(build_t):
    doc = json.loads(dump_output(build_t))
    keep = "1"
    doc["tate"]["window"] = [0, 1]
    doc["tate"]["terms"] = {k: v for k, v in doc["tate"]["terms"].items() if k in ("0", "1")}
    doc["tate"]["diffs"] = {k: v for k, v in doc["tate"]["diffs"].items() if k == keep}
    doc["betti"] = {k: v for k, v in doc["betti"].items() if k in ("0", "1")}
    ok, rows = run_verify(doc)
    acy = [row for row in rows if row[0] == "acyclicity"][0]
    assert not acy[1]
    assert "WindowEdge" in acy[2]


def test_betti_text_alignment(build_t):
    text = betti_text(build_t["betti"])
    assert "total" in text
    assert text.splitlines()[0].lstrip().startswith("deg")


def test_oracle_koszul_acyclic():
    ctx = VariableContext(["x", "y"])
    S = BaseRing(ctx, F)
    K = koszul_complex(
        [parse_polynomial("x", ctx, F), parse_polynomial("y", ctx, F)], S
    )
    for d in range(0, 7):
        assert oracle_homology(K, 1, d) == 0


def test_oracle_h0_of_three_squares():
    ctx = VariableContext(["x", "y", "z"])
    S = BaseRing(ctx, F)
    f = [parse_polynomial(s, ctx, F) for s in ("x^2", "y^2", "z^2")]
    K = koszul_complex(f, S)
    assert oracle_homology(K, 0, 2) == 3  # monomials xy, xz, yz


def test_oracle_accepts_output_document(build_t):
    assert oracle_homology(build_t, 0, 0) == 0


# --- CLI ---------------------------------------------------------------


def test_cli_end_to_end(tmp_path, inst_t):
    ipath = tmp_path / "t.json"
    opath = tmp_path / "t.out.json"
    ipath.write_text(json.dumps(inst_t.instance.to_doc()))
    r = cli("build", str(ipath), "-o", str(opath))
    assert r.returncode == 0, r.stderr
    assert opath.exists()

    r = cli("verify", str(opath))
    assert r.returncode == 0
    assert "PASS" in r.stdout

    r = cli("betti", str(opath))
    assert r.returncode == 0
    assert "total" in r.stdout

    r = cli("mcm", str(opath))
    assert r.returncode == 0
    assert "generators: 1" in r.stdout

    r = cli("count-formula", "--n", "5", "--c", "2")
    assert r.returncode == 0
    assert r.stdout.strip() == "3"


def test_cli_validation_exit_code(tmp_path):
    bad = {
        "field_char": 32003,
        "variables": ["x", "y"],
        "f": ["x^2", "y^2"],
        "g": ["x*y"],
        "window": [-2, 3],
        "max_internal_degree": 6,
    }
    ipath = tmp_path / "bad.json"
    ipath.write_text(json.dumps(bad))
    r = cli("build", str(ipath))
    assert r.returncode == 2
    assert "NotInIdeal" in r.stderr


def test_cli_bad_lift_matrix_exit_code(tmp_path, inst_t):
    doc = {**inst_t.instance.to_doc(), "A": [["x", "0"], ["0", "x"]]}
    ipath = tmp_path / "badA.json"
    ipath.write_text(json.dumps(doc))
    r = cli("build", str(ipath))
    assert r.returncode == 2


def test_cli_parse_error_exit_code(tmp_path):
    bad = {
        "field_char": 32003,
        "variables": ["x", "y"],
        "f": ["x^", "y"],
        "g": ["x^2"],
        "window": [-2, 3],
        "max_internal_degree": 6,
    }
    ipath = tmp_path / "bad.json"
    ipath.write_text(json.dumps(bad))
    r = cli("build", str(ipath))
    assert r.returncode == 4


def test_cli_io_error_exit_code(tmp_path):
    r = cli("build", str(tmp_path / "missing.json"))
    assert r.returncode == 4
    notjson = tmp_path / "x.json"
    notjson.write_text("{ broken")
    r = cli("build", str(notjson))
    assert r.returncode == 4


def test_cli_certificate_exit_code(tmp_path, build_t):
    opath = tmp_path / "t.out.json"
    doc = json.loads(dump_output(build_t))
    pos = sorted(doc["tate"]["diffs"])[0]
    doc["tate"]["diffs"][pos][0][0] = "x^2"
    opath.write_text(json.dumps(doc))
    r = cli("verify", str(opath))
    assert r.returncode == 3
    assert "FAIL" in r.stdout
