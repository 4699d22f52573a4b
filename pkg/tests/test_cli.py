import io
import json
import subprocess
import sys
import time

import jsonschema
import pytest

from conftest import FIXTURES
from dsr_analyzer.cli import UsageError, main, parse_cap_env
from dsr_analyzer.verdict import REPORT_SCHEMA

EXIT = {
    "empty": 0, "figreversible_a": 2, "figreversible_b": 0, "natural_ab": 0, "orientation": 0,
    "repressilator": 0, "srone": 0, "storeq": 2, "tca_a": 0, "tca_b": 0, "tca_c": 0,
    "tca_d": 2, "trivial_3species": 0, "trivial_ab": 2, "tworeac": 2,
}


def fx(name):
    return str(FIXTURES / f"{name}.net")


@pytest.mark.parametrize("name", sorted(EXIT))
def test_check_exit_codes(name, capsys):
    start = time.perf_counter()
    assert main(["check", fx(name)]) == EXIT[name]
    assert time.perf_counter() - start < 5


@pytest.mark.parametrize("name", sorted(EXIT))
def test_check_json_validates(name, capsys):
    main(["check", "--format", "json", fx(name)])
    jsonschema.validate(json.loads(capsys.readouterr().out), REPORT_SCHEMA)


def test_tca_d_names_witness(capsys):
    assert main(["check", fx("tca_d")]) == 2
    assert "OAA->R6-FUM-R7-MAL-R8-NADH-R3->αKG-R9-OAA" in capsys.readouterr().out


def test_cycle_cap_flag_gives_3(capsys):
    assert main(["check", "--cycle-cap", "2", "--genlem", "off", fx("tca_d")]) == 3


def test_cap_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("DSR_ANALYZER_CAP", "cycle=2,minor=4")
    assert main(["check", "--genlem", "off", fx("tca_d")]) == 3
    # an explicit flag wins over the environment
    assert main(["check", "--genlem", "off", "--cycle-cap", "1000", fx("tca_d")]) == 2


def test_bad_environment_is_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("DSR_ANALYZER_CAP", "lots")
    assert main(["check", fx("tca_a")]) == 1
    assert "DSR_ANALYZER_CAP" in capsys.readouterr().err


@pytest.mark.parametrize("value, want", [
    ("", {}), ("7", {"cycle": 7}), ("minor=3", {"minor": 3}), ("cycle=5, minor=2", {"cycle": 5, "minor": 2}),
])
def test_parse_cap_env(value, want):
    assert parse_cap_env(value) == want


def test_parse_cap_env_rejects_unknown_key():
    with pytest.raises(UsageError):
        parse_cap_env("depth=3")


def test_parse_error_location(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("species A\nreaction R1: A -> Q\n"))
    assert main(["check", "-"]) == 1
    assert capsys.readouterr().err.startswith("<stdin>:2:19:")


@pytest.mark.parametrize("argv", [[], ["bogus"], ["check", "--cycle-cap", "0", "x"],
                                  ["oracle", "nosuch"], ["check", "/no/such/file.net"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1


def test_dot_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.dot", tmp_path / "b.dot"
    assert main(["dot", "--out", str(a), fx("tca_a")]) == 0
    assert main(["dot", "--out", str(b), fx("tca_a")]) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text(encoding="utf-8")
    assert text.count("shape=ellipse") == 8 and text.count("shape=box") == 8
    assert "αKG" in text


def test_dot_srone_double_edge(capsys):
    main(["dot", fx("srone")])
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip().startswith('"C" -> "R1"')]
    assert len(lines) == 2


def test_dot_json(capsys):
    main(["dot", "--format", "json", fx("natural_ab")])
    assert len(json.loads(capsys.readouterr().out)["edges"]) == 2


def test_dot_empty_model(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(""))
    assert main(["dot"]) == 0
    assert "->" not in capsys.readouterr().out


def test_lint(capsys):
    assert main(["lint", fx("srone")]) == 0
    assert capsys.readouterr().out == "no findings\n"
    main(["lint", "--format", "json", fx("tworeac")])
    assert [f["kind"] for f in json.loads(capsys.readouterr().out)] == ["tworeac"]


def test_lint_consumed_unsigned(monkeypatch, capsys):
    doc = "species A B\nreaction R1: A -> B\nmodulate R1: A : ?\n"
    monkeypatch.setattr(sys, "stdin", io.StringIO(doc))
    main(["lint", "--format", "json", "-"])
    assert [f["kind"] for f in json.loads(capsys.readouterr().out)] == ["onereac"]


def test_matrices(capsys):
    main(["matrices", "--format", "json", fx("natural_ab")])
    doc = json.loads(capsys.readouterr().out)
    assert doc["S"] == [["-1"], ["1"]] and doc["V"] == [["+", "-"]]


def test_oracle(capsys):
    assert main(["oracle", "prodformula", "--seed", "42", "--cases", "20", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 42
    assert doc["suites"][0]["passed"] == doc["suites"][0]["cases"] == 20


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dsr_analyzer", "check", fx("repressilator")],
                         capture_output=True, text=True, encoding="utf-8")
    assert out.returncode == 0 and "verdict: p0" in out.stdout
