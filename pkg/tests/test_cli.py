"""Command-line interface: files, reports, exit codes, determinism."""

import json
from fractions import Fraction

import pytest

from assockv.cli import main


@pytest.fixture(scope="module")
def phi_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "phi5.json"
    assert main(["solve", "--degree", "5", "--out", str(path)]) == 0
    return str(path)


def test_solve_writes_deterministic_files(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["solve", "--degree", "2", "--out", str(a)]) == 0
    assert main(["solve", "--degree", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    assert payload["terms"] == [[[1, 2], "1/24"]]


def test_solve_degree_validation(capsys):
    assert main(["solve", "--degree", "1"]) == 2


def test_gamma_table(phi_file, capsys):
    assert main(["gamma", "--associator", phi_file]) == 0
    out = capsys.readouterr().out
    assert "-1/24" in out and "1/1440" in out and "pass" in out


def test_verify_kv_suite(phi_file, capsys):
    rc = main(["verify", "--suite", "kv", "--associator", phi_file, "--degree", "4", "--seed", "7"])
    report = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert all(c["status"] == "pass" for c in report["checks"])
    ids = [c["id"] for c in report["checks"]]
    assert ids == sorted(ids)


def test_verify_report_schema(phi_file, capsys):
    import importlib.resources as ir

    import jsonschema

    rc = main(["verify", "--suite", "cocycle", "--associator", phi_file, "--degree", "3", "--seed", "1"])
    report = json.loads(capsys.readouterr().out)
    schema = json.loads(ir.files("assockv").joinpath("report_schema.json").read_text())
    jsonschema.validate(report, schema)
    assert rc == 0


def test_verify_seed_determinism(phi_file, capsys):
    main(["verify", "--suite", "cocycle", "--associator", phi_file, "--degree", "3", "--seed", "5"])
    rep1 = json.loads(capsys.readouterr().out)
    main(["verify", "--suite", "cocycle", "--associator", phi_file, "--degree", "3", "--seed", "5"])
    rep2 = json.loads(capsys.readouterr().out)
    rep1.pop("wall_time_s")
    rep2.pop("wall_time_s")
    assert rep1 == rep2


def test_verify_detects_corruption(tmp_path, phi_file, capsys):
    payload = json.loads(open(phi_file).read())
    bad = dict(payload)
    terms = [list(t) for t in payload["terms"]]
    terms[0] = [terms[0][0], "1/23"]  # corrupt the degree-2 coefficient
    bad["terms"] = terms
    bad.pop("zeta", None)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    rc = main(["verify", "--suite", "kv", "--associator", str(path), "--degree", "3", "--seed", "0"])
    report = json.loads(capsys.readouterr().out)
    assert rc == 1
    failed = [c["id"] for c in report["checks"] if c["status"] == "fail"]
    assert failed


def test_verify_cap_exceedance(phi_file, capsys):
    rc = main(["verify", "--suite", "kv", "--associator", phi_file, "--degree", "9"])
    assert rc == 2


def test_verify_missing_file(capsys):
    assert main(["verify", "--suite", "kv", "--associator", "/nonexistent.json"]) == 2


def test_braid_commands(capsys):
    assert main(["braid", "--action", "artin", "--word", "s1 s2 s1", "--strands", "3"]) == 0
    out1 = capsys.readouterr().out
    main(["braid", "--action", "artin", "--word", "s2 s1 s2", "--strands", "3"])
    assert capsys.readouterr().out == out1
    rc = main(["braid", "--action", "ad", "--word", "x12", "--strands", "3"])
    assert rc == 0
    assert "X1 -> X1" in capsys.readouterr().out
    rc = main(["braid", "--action", "cable", "--word", "x12", "--strands", "2", "--multiplicities", "1,2"])
    assert rc == 0
    assert capsys.readouterr().out == "strands: 3\nx12 x13\n"


def test_braid_usage_errors(capsys):
    assert main(["braid", "--action", "ad", "--word", "s1", "--strands", "3"]) == 2
    assert main(["braid", "--action", "artin"]) == 2


def test_unknown_flag_exit_code():
    assert main(["solve", "--bogus"]) == 2
