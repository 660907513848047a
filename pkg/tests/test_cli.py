"""End-to-end CLI behavior: reports, exit codes, JSON on every path."""

import json

import numpy as np
import pytest

from kreinkit.cli import main
from kreinkit.serialize import matrix_from_json, matrix_to_json


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "frame11.json").write_text(json.dumps({"p": 1, "q": 1}))
    (tmp_path / "frame21.json").write_text(json.dumps({"p": 2, "q": 1}))
    j11 = np.diag([1.0, -1.0])
    (tmp_path / "j11.json").write_text(json.dumps(matrix_to_json(j11)))
    neutral = 0.5 * np.ones((2, 2))
    (tmp_path / "neutral.json").write_text(json.dumps(matrix_to_json(neutral)))
    return tmp_path


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_classify_symmetry(workdir, capsys):
    code, report = run_cli(capsys, [
        "classify", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "j11.json")])
    assert code == 0
    assert report["schema"] == "krein-kit/1"
    flags = report["classification"]
    assert flags["is_j_selfadjoint"] and flags["is_j_unitary"]
    assert not flags["is_projection"]


def test_decompose_neutral_projection(workdir, capsys):
    code, report = run_cli(capsys, [
        "decompose", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "neutral.json")])
    assert code == 0
    e = matrix_from_json(report["E"])
    p = matrix_from_json(report["P"])
    f = matrix_from_json(report["F"])
    assert np.allclose(e, 0.0, atol=1e-12)
    assert np.allclose(p, 0.5 * np.ones((2, 2)), atol=1e-12)
    assert np.allclose(f, 0.0, atol=1e-12)
    assert report["residuals"]["pp_sharp"] <= 1e-12


def test_profile_and_signature(workdir, capsys):
    code, report = run_cli(capsys, [
        "profile", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "neutral.json")])
    assert code == 0
    assert report["profile"] == {"kp": 0, "km": 0, "k0": 1, "ckp": 0, "ckm": 0}

    basis = np.array([[1.0, 0.0], [0.0, 1 / np.sqrt(2)], [0.0, 1 / np.sqrt(2)]])
    (workdir / "s21.json").write_text(json.dumps(matrix_to_json(basis)))
    code, report = run_cli(capsys, [
        "signature", "--frame", str(workdir / "frame21.json"),
        "--in", str(workdir / "s21.json")])
    assert code == 0
    assert report["signature"] == {"kp": 1, "km": 0, "k0": 1, "ckp": 0, "ckm": 0}
    assert not report["is_regular"]
    assert report["is_pseudo_regular"]


def test_gen_is_deterministic_and_certified(workdir, capsys):
    argv = ["gen", "unitary", "--frame", str(workdir / "frame21.json"),
            "--seed", "11", "--spread", "0.4"]
    code1, rep1 = run_cli(capsys, argv)
    code2, rep2 = run_cli(capsys, argv)
    assert code1 == code2 == 0
    assert rep1["unitary"] == rep2["unitary"]
    assert rep1["j_unitarity"] <= 1e-9


def test_gen_section_pipeline(workdir, capsys):
    code, rep = run_cli(capsys, [
        "gen", "projection", "--frame", str(workdir / "frame21.json"),
        "--seed", "3", "--profile", "1,0,1,0,0"])
    assert code == 0
    (workdir / "q0.json").write_text(json.dumps(rep["projection"]))
    code, rep = run_cli(capsys, [
        "gen", "perturb", "--frame", str(workdir / "frame21.json"),
        "--seed", "4", "--q0", str(workdir / "q0.json"), "--fraction", "0.5"])
    assert code == 0
    (workdir / "q.json").write_text(json.dumps(rep["projection"]))
    code, rep = run_cli(capsys, [
        "section", "--frame", str(workdir / "frame21.json"),
        "--q0", str(workdir / "q0.json"), "--q", str(workdir / "q.json")])
    assert code == 0
    assert rep["residuals"]["conjugation"] <= 1e-8
    assert rep["residuals"]["j_unitarity"] <= 1e-8
    code, rep = run_cli(capsys, [
        "connect", "--frame", str(workdir / "frame21.json"),
        "--q0", str(workdir / "q0.json"), "--q", str(workdir / "q.json")])
    assert code == 0
    assert rep["residuals"]["conjugation"] <= 1e-6


def test_curve_and_log(workdir, capsys):
    code, rep = run_cli(capsys, [
        "gen", "unitary", "--frame", str(workdir / "frame11.json"),
        "--seed", "8", "--spread", "0.3"])
    (workdir / "u.json").write_text(json.dumps(rep["unitary"]))
    code, rep = run_cli(capsys, [
        "curve", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "u.json"), "--samples", "7"])
    assert code == 0
    assert len(rep["samples"]) == 7
    assert rep["endpoint_residual"] <= 1e-9
    assert all(s["j_unitarity"] <= 1e-9 for s in rep["samples"])

    # a far-from-identity operator must be refused with exit code 1
    far = np.diag([np.exp(2.5j), np.exp(-2.5j)])
    (workdir / "far.json").write_text(json.dumps(matrix_to_json(far)))
    code, rep = run_cli(capsys, [
        "log", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "far.json")])
    assert code == 1
    assert rep["error"]["type"] == "PreconditionError"


def test_deck_and_covering(workdir, capsys):
    basis = np.array([[1.0, 0.0], [0.0, 1 / np.sqrt(2)], [0.0, 1 / np.sqrt(2)]])
    family = {"frame": {"p": 2, "q": 1}, "s": matrix_to_json(basis)}
    (workdir / "family.json").write_text(json.dumps(family))
    code, rep = run_cli(capsys, [
        "gen", "projection", "--frame", str(workdir / "frame21.json"),
        "--seed", "21", "--profile", "1,0,1,0,0"])
    (workdir / "qf.json").write_text(json.dumps(rep["projection"]))

    code, rep = run_cli(capsys, [
        "deck", "--frame", str(workdir / "frame21.json"),
        "--q", str(workdir / "qf.json")])
    assert code == 0
    assert rep["deck_dim"] == 1 and rep["isotropic_dim"] == 1

    # covering needs the projection to have range S; build one in the family
    code, rep = run_cli(capsys, [
        "gen", "projection", "--frame", str(workdir / "frame21.json"),
        "--seed", "22", "--profile", "1,0,1,0,0"])
    # use the family's own base-deck selection instead: generate via Python
    from kreinkit import FixedRangeFamily, KreinFrame, Subspace
    frame = KreinFrame(2, 1)
    space = Subspace.from_span(frame, basis)
    fam = FixedRangeFamily(space)
    (workdir / "qs.json").write_text(json.dumps(matrix_to_json(fam.base.matrix)))
    code, rep = run_cli(capsys, [
        "covering", "--family", str(workdir / "family.json"),
        "--q", str(workdir / "qs.json")])
    assert code == 0
    assert rep["residuals"]["lift_roundtrip"] <= 1e-8


def test_schema_error_paths(workdir, capsys):
    (workdir / "broken.json").write_text("{oops")
    code, rep = run_cli(capsys, [
        "classify", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "broken.json")])
    assert code == 2
    assert rep["ok"] is False and rep["error"]["type"] == "SchemaError"

    code, rep = run_cli(capsys, ["no-such-command"])
    assert code == 2

    code, rep = run_cli(capsys, [
        "classify", "--in", str(workdir / "j11.json")])  # missing --frame
    assert code == 2


def test_precondition_exit_code(workdir, capsys):
    bad = np.array([[1.0, 1.0], [0.0, 0.0]])  # idempotent but not J-normal
    (workdir / "bad.json").write_text(json.dumps(matrix_to_json(bad)))
    code, rep = run_cli(capsys, [
        "decompose", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "bad.json")])
    assert code == 1
    assert rep["error"]["type"] == "PreconditionError"


def test_selftest_subset(workdir, capsys):
    code, rep = run_cli(capsys, ["selftest", "--criteria", "3,7"])
    assert code == 0
    ids = [c["id"] for c in rep["criteria"]]
    assert ids == ["3", "7"]
    assert rep["all_passed"] is True


def test_out_flag_writes_report(workdir, capsys):
    out = workdir / "report.json"
    code, rep = run_cli(capsys, [
        "classify", "--frame", str(workdir / "frame11.json"),
        "--in", str(workdir / "j11.json"), "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text()) == rep
