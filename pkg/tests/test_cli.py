"""End-to-end CLI tests: golden outputs, exit codes, cache, and formats.

Golden values used here are the frozen library oracles (trace -248,
H(23) = 3, theta pairing -8*pi); the CLI layer must reproduce them
byte-for-byte as decimal strings through every output format.
"""

import json

import pytest

from cyclotrace import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, tmp_path, *argv):
    code, out, err = run(capsys, *argv, "--cache-dir", str(tmp_path))
    return code, (json.loads(out) if out.strip() else None), err


# ---------------------------------------------------------------------------
# Golden examples
# ---------------------------------------------------------------------------

def test_trace_cm_golden(capsys, tmp_path):
    code, doc, _ = run_json(capsys, tmp_path,
                            "trace", "--kind", "cm", "-d", "-3", "-D", "1")
    assert code == 0
    assert doc["value"] == "-248"
    assert doc["method"] == "cm"
    assert len(doc["params_hash"]) == 64


def test_hurwitz_golden(capsys):
    code, out, _ = run(capsys, "hurwitz", "-n", "23")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "3"


def test_hurwitz_fractional_value(capsys):
    code, out, _ = run(capsys, "hurwitz", "-n", "3")
    assert code == 0
    assert json.loads(out)["value"] == "1/3"


def test_inner_prod_theta_golden(capsys, tmp_path):
    code, doc, _ = run_json(capsys, tmp_path,
                            "inner-prod", "--theta", "-d", "-3")
    assert code == 0
    assert doc["value"].startswith("-25.13274")


def test_salie_value(capsys):
    code, out, _ = run(capsys, "salie", "-m", "-1", "-d", "-4",
                       "-D", "-3", "-c", "4")
    assert code == 0
    assert json.loads(out)["value"] == "2.0"


def test_series_f_provenance_and_support(capsys):
    code, out, _ = run(capsys, "series", "--kind", "f", "-d", "-3", "-N", "8")
    assert code == 0
    doc = json.loads(out)
    assert doc["coefficients"]["-3"] == "1"
    assert doc["coefficients"]["1"] == "-248"
    assert doc["provenance"]["4"] == "unavailable"
    assert doc["support_residues_mod4"] == "0,1"


def test_eval_kminus(capsys, tmp_path):
    code, doc, _ = run_json(capsys, tmp_path,
                            "eval", "--kind", "kminus", "-d", "-3",
                            "--tau", "0.1+1.2j", "--cmax", "4000")
    assert code == 0
    # nonzero complex value; decimal-string rendering
    assert "j" in doc["value"]
    assert doc["tau"] == "(0.1 + 1.2j)"


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

def test_invalid_input_names_precondition(capsys):
    code, out, err = run(capsys, "hurwitz", "-n", "-1")
    assert code == 1
    assert out == ""
    assert "invalid input" in err and "n must be >= 0" in err


def test_missing_spectral_parameter_is_invalid(capsys, tmp_path):
    code, _, err = run(capsys, "trace", "--kind", "star-series",
                       "-d", "-4", "-D", "-3",
                       "--cache-dir", str(tmp_path))
    assert code == 1
    assert "requires -s" in err


def test_bad_argument_is_invalid_not_convergence(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "nosuch")
    assert code == 1


def test_convergence_failure_exits_2_with_diagnostics(capsys, tmp_path):
    code, out, err = run(capsys, "bcoeff", "-m", "3", "-n", "4",
                         "-s", "0.75", "--cmax", "512", "--window", "8",
                         "--tol", "1e-12", "--cache-dir", str(tmp_path))
    assert code == 2
    assert out == ""
    assert "convergence failure" in err
    assert "c_max=512" in err and "spread=" in err


def test_verify_failure_exits_3(capsys):
    # The modularity criterion fails by design (empty constraint set).
    code, out, _ = run(capsys, "verify", "--suite", "modularity",
                       "--format", "text")
    assert code == 3
    assert "criterion 12" in out and "FAIL" in out
    assert "0/1 criteria passed" in out


def test_verify_pass_exits_0(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "kloosterman",
                       "--format", "text")
    assert code == 0
    assert "criterion  3" in out and "PASS" in out


def test_verify_json_shape(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hurwitz")
    assert code == 0
    doc = json.loads(out)
    assert doc["suite"] == "hurwitz"
    (entry,) = doc["results"]
    assert entry["number"] == 2 and entry["ok"] is True
    assert entry["measurements"]["H(23)"] == "3"


# ---------------------------------------------------------------------------
# Cache behaviour
# ---------------------------------------------------------------------------

def test_cache_round_trip_identical_output(capsys, tmp_path):
    args = ("trace", "--kind", "cm", "-d", "-7", "-D", "1",
            "--cache-dir", str(tmp_path))
    code1, out1, err1 = run(capsys, *args)
    code2, out2, err2 = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "cache hit" not in err1
    assert "cache hit" in err2
    assert list(tmp_path.glob("*.json"))


def test_cache_key_covers_precision(capsys, tmp_path):
    args = ("trace", "--kind", "cm", "-d", "-7", "-D", "1",
            "--cache-dir", str(tmp_path))
    run(capsys, *args)
    _, _, err = run(capsys, *args, "--precision-bits", "320")
    assert "cache hit" not in err


def test_env_var_selects_cache_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CYCLOTRACE_CACHE", str(tmp_path / "envcache"))
    code, _, _ = run(capsys, "trace", "--kind", "cm", "-d", "-3", "-D", "1")
    assert code == 0
    assert list((tmp_path / "envcache").glob("*.json"))


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------

def test_csv_format(capsys):
    code, out, _ = run(capsys, "hurwitz", "-n", "23", "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.split(",") == ["n", "value"]
    assert row.split(",") == ["23", "3"]


def test_text_format(capsys):
    code, out, _ = run(capsys, "salie", "-m", "-1", "-d", "-4", "-D", "-3",
                       "-c", "4", "--format", "text")
    assert code == 0
    assert "value = 2.0" in out


def test_csv_flattens_nested_components(capsys, tmp_path):
    code, out, _ = run(capsys, "mock-coeff", "-D", "-3", "-d", "-4",
                       "--cmax", "4000", "--window", "400",
                       "--format", "csv", "--cache-dir", str(tmp_path))
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert "components.class_number_term" in header
    assert "components.trace_term" in header


def test_global_flags_accepted_before_and_after_subcommand(capsys):
    code1, out1, _ = run(capsys, "--format", "text", "hurwitz", "-n", "23")
    code2, out2, _ = run(capsys, "hurwitz", "-n", "23", "--format", "text")
    assert code1 == code2 == 0
    assert out1 == out2


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
    capsys.readouterr()
