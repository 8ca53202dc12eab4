import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from cmatlas.cli import main

DOCS = pathlib.Path(__file__).parent.parent / "docs"
REPORT_SCHEMA = json.loads((DOCS / "verification_report.schema.json").read_text())
ENUM_SCHEMA = json.loads((DOCS / "enumeration.schema.json").read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify(capsys):
    code, out, _ = run_cli(capsys, "classify", "smooth-elliptic")
    assert code == 0 and out == "Tame\n"
    code, out, _ = run_cli(capsys, "classify", "kodaira:4")
    assert code == 0 and out == "Tame\n"
    code, out, _ = run_cli(capsys, "classify", "other:nodal-and-cusp")
    assert code == 0 and out == "Wild\n"


def test_classify_parse_error(capsys):
    code, _, err = run_cli(capsys, "classify", "not-a-curve")
    assert code == 2 and "error" in err


def test_verify_symbolic(capsys):
    code, out, _ = run_cli(capsys, "verify", "ex1", "--specializations", "2",
                           "--seed", "7")
    assert code == 0
    assert "overall: PASS" in out


def test_verify_prime_json_schema(capsys):
    code, out, _ = run_cli(capsys, "verify", "ex1", "--field", "q:10007",
                           "--seed", "42", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, REPORT_SCHEMA)
    assert payload["passed"] is True
    assert payload["prime"] == 10007


def test_verify_excluded_lambda_is_config_error(capsys):
    code, _, err = run_cli(capsys, "verify", "ex1", "--field", "q:10007",
                           "--lambda", "1")
    assert code == 2
    assert "excluded" in err


def test_verify_lambda_requires_prime_mode(capsys):
    code, _, err = run_cli(capsys, "verify", "ex1", "--lambda", "3")
    assert code == 2


def test_verify_bad_field(capsys):
    code, _, err = run_cli(capsys, "verify", "ex1", "--field", "q:10")
    assert code == 2


def test_verify_determinism(capsys):
    argv = ("verify", "ex2", "--field", "q:4003", "--seed", "5",
            "--format", "json")
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_text_and_json_carry_identical_data(capsys):
    _, text, _ = run_cli(capsys, "verify", "ex1", "--specializations", "0",
                         "--seed", "0")
    _, raw, _ = run_cli(capsys, "verify", "ex1", "--specializations", "0",
                        "--seed", "0", "--format", "json")
    payload = json.loads(raw)
    for stage in payload["stages"]:
        mark = "PASS" if stage["passed"] else "FAIL"
        assert f"[{mark}] {stage['name']}:" in text
    assert text.count("not checked") == len(payload["unchecked"])
    assert ("overall: PASS" in text) == payload["passed"]


def test_enumerate_counts_and_schema(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--rank", "3",
                           "--format", "json")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, ENUM_SCHEMA)
    assert payload["counts"] == {"Z": 4, "Z-minus-infinity": 1, "isolated": 1}
    code, out, _ = run_cli(capsys, "enumerate", "--rank", "1")
    assert code == 0
    assert "Z-families: 0, punctured: 1" in out


def test_enumerate_oracle(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--rank", "3", "--oracle",
                           "--max-degree", "4", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, ENUM_SCHEMA)
    assert payload["oracle"]["match"] is True


def test_enumerate_rank_guard(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--rank", "65")
    assert code == 2


def test_inspect_main_table(capsys, ex1_algebra):
    code, out, _ = run_cli(capsys, "inspect", "ex1")
    assert code == 0
    payload = json.loads(out)
    assert payload == ex1_algebra.dump()


def test_inspect_chart(capsys):
    code, out, _ = run_cli(capsys, "inspect", "ex1", "--chart", "U1")
    assert code == 0
    payload = json.loads(out)
    assert payload["chart"] == "U1"
    assert payload["basis"] == ["1", "x", "y1", "z1"]
    assert payload["embedding"]["z1"] == {"1": "-eps*xi", "z": "v^-2"}


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "classify", "kodaira:2",
                           "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text()) == {"curve": "kodaira:2",
                                              "verdict": "Tame"}


def test_threads_cap_validated(capsys, monkeypatch):
    monkeypatch.setenv("CMATLAS_THREADS", "0")
    code, _, err = run_cli(capsys, "classify", "smooth-elliptic")
    assert code == 2
    monkeypatch.setenv("CMATLAS_THREADS", "4")
    code, out, _ = run_cli(capsys, "classify", "smooth-elliptic")
    assert code == 0


def test_console_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "cmatlas.cli", "classify", "smooth-elliptic"],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert result.stdout == "Tame\n"
