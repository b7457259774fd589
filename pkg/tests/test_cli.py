import csv
import json
import subprocess
import sys

import pytest

from monadlaw.cli import main
from monadlaw.registry import ENV_VAR


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def verdict_lines(out):
    return [l for l in out.splitlines() if l and not l.startswith((" ", "summary"))]


# ---------------------------------------------------------------- check


def test_check_state_core(capsys):
    code, out, _ = run(capsys, "check", "--stack", "StateT(s=2).Id", "--suite", "state-core")
    assert code == 0
    lines = verdict_lines(out)
    assert len(lines) == 4
    assert all(l.startswith("PASS ") for l in lines)


def test_check_refuted_law_prints_witness(capsys):
    code, out, _ = run(capsys, "check", "--stack", "WriterT(Z2).Id", "--law", "Steele-UnitR")
    assert code == 0
    assert "FAIL (expected)" in out
    assert "h = Table[Pair(Star, Elem 0), Pair(Star, Elem 0)]" in out
    assert "at input Pair(Star, Elem 1)" in out


def test_default_stacks_need_no_flags(capsys):
    code, out, _ = run(capsys, "check", "--suite", "writer-steele")
    assert code == 0
    assert len(verdict_lines(out)) == 3


def test_bad_stack_reports_position(capsys):
    code, _, err = run(capsys, "check", "--stack", "StateT(s=2).Bogus")
    assert code == 2
    assert "position 12" in err
    assert " " * 14 + "^" in err  # caret under the offending character


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["check", "--suite", "state-cor"], "did you mean state-core"),
        (["check", "--law", "Put-Putt"], "did you mean Put-Put"),
        (["check", "--stack", "ExceptT(e=2).Id", "--law", "Put-Put"], "primitive put unavailable"),
        (["check", "--type", "X=0"], "cardinality"),
        (["check", "--budget", "-3"], "positive"),
        (["check", "--mutant", "nope"], "invalid choice"),
    ],
)
def test_configuration_errors_exit_2(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert needle in err


def test_holds_law_failing_exits_1(capsys):
    code, out, _ = run(capsys, "check", "--suite", "state-core", "--mutant", "put-ignore")
    assert code == 1
    assert "\nFAIL " in "\n" + out


def test_refuted_law_passing_exits_1(capsys):
    # with a one-element log there is nothing for the law to lose
    code, out, _ = run(capsys, "check", "--stack", "WriterT(Trivial).Id", "--law", "Steele-UnitR")
    assert code == 1
    assert "PASS (unexpected)" in out


def test_type_override_is_recorded(capsys):
    code, out, _ = run(capsys, "check", "--law", "Put-Get", "--type", "X=3", "--json")
    assert code == 0
    rep = json.loads(out)["comparable"]["reports"][0]
    assert rep["types"]["X"] == 3


def test_effect_parameters_cannot_be_overridden(capsys):
    code, _, err = run(capsys, "check", "--law", "Put-Put", "--type", "S=3")
    assert code == 2
    assert "fixed by the stack" in err


def test_json_comparable_section_is_stable(capsys):
    argv = ("check", "--suite", "writer-steele", "--json", "--seed", "9")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    da, db = json.loads(a), json.loads(b)
    assert json.dumps(da["comparable"]) == json.dumps(db["comparable"])
    assert list(da["comparable"]["reports"][0])[:4] == ["law", "stack", "effect", "types"]


def test_sample_and_budget_flags(capsys):
    code, out, _ = run(capsys, "check", "--law", "Get-Get", "--budget", "100", "--sample", "50", "--json")
    assert code == 0
    rep = json.loads(out)["comparable"]["reports"][0]
    assert (rep["mode"], rep["instances_checked"]) == ("sampled", 50)


def test_single_threaded_matches_workers(capsys):
    base = ("check", "--law", "Put-Get", "--json")
    _, a, _ = run(capsys, *base, "--single-threaded")
    _, b, _ = run(capsys, *base, "--workers", "2")
    assert json.loads(a)["comparable"] == json.loads(b)["comparable"]


def test_report_dir(capsys, tmp_path):
    code, _, err = run(capsys, "check", "--suite", "writer-steele", "--report-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "summary.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    rows = list(csv.DictReader(open(tmp_path / "summary.csv", encoding="utf-8")))
    assert [r["law"] for r in rows] == ["Steele-UnitL", "Steele-UnitR", "Steele-Assoc"]
    assert rows[1]["verdict"] == "FAIL (expected)"
    doc = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert doc["comparable"]["summary"]["ok"] is True


def test_extra_laws_dir(capsys, tmp_path, monkeypatch):
    (tmp_path / "mine.law").write_text(
        "@expect refuted\n"
        "law Put-Forgets: forall s: S, s2: S . put s >> put s2 == put s\n"
        '@stacks "StateT(s=2).Id"\n@effect state\nsuite mine { Put-Forgets }\n',
        encoding="utf-8",
    )
    code, out, _ = run(capsys, "check", "--suite", "mine", "--laws-dir", str(tmp_path))
    assert code == 0 and "FAIL (expected)" in out
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    code, out, _ = run(capsys, "list", "laws", "--suite", "mine")
    assert code == 0 and "Put-Forgets" in out


# ---------------------------------------------------------------- list


def test_list_suites(capsys):
    code, out, _ = run(capsys, "list", "suites")
    assert code == 0
    assert len(out.splitlines()) == 14


def test_list_laws_with_citations(capsys):
    code, out, _ = run(capsys, "list", "laws", "--suite", "writer-coherence")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 7
    assert all("writer:" in l for l in lines)


def test_list_monoids(capsys):
    _, out, _ = run(capsys, "list", "monoids")
    assert [l.split()[0] for l in out.splitlines()] == ["Trivial", "Z2", "Z3", "T2"]


def test_list_grammar_and_primitives(capsys):
    _, out, _ = run(capsys, "list", "grammar")
    assert "ReaderBase(r=" in out
    _, out, _ = run(capsys, "list", "primitives")
    assert "put: state" in out


# ---------------------------------------------------------------- explain


def write_report(capsys, path, *argv):
    code, out, _ = run(capsys, "check", "--json", *argv)
    path.write_text(out, encoding="utf-8")
    return code


def test_explain_failure_report(capsys, tmp_path):
    p = tmp_path / "steele.json"
    write_report(capsys, p, "--stack", "WriterT(Z2).Id", "--law", "Steele-UnitR")
    code, out, _ = run(capsys, "explain", str(p))
    assert code == 0
    assert "h = Table[Pair(Star, Elem 0), Pair(Star, Elem 0)]" in out
    assert "lhs = Pair(Star, Elem 1)" in out
    assert "re-verification OK" in out


def test_explain_pass_report(capsys, tmp_path):
    p = tmp_path / "pass.json"
    write_report(capsys, p, "--suite", "state-core")
    code, out, _ = run(capsys, "explain", str(p))
    assert code == 0
    assert len(out.splitlines()) == 4


def test_explain_mutated_report_warns(capsys, tmp_path):
    p = tmp_path / "mut.json"
    assert write_report(capsys, p, "--suite", "state-core", "--mutant", "put-ignore") == 1
    code, out, err = run(capsys, "explain", str(p))
    assert code == 1
    assert "counterexample no longer reproduces" in out
    assert "WARNING" in err


@pytest.mark.parametrize("content", ["not json", '{"reports": []}'])
def test_explain_invalid_report(capsys, tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content, encoding="utf-8")
    code, _, err = run(capsys, "explain", str(p))
    assert code == 2 and "cannot read report" in err


def test_explain_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "explain", str(tmp_path / "absent.json"))
    assert code == 2


# ---------------------------------------------------------------- entry point


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monadlaw.cli", "check", "--stack", "bogus"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "position 0" in proc.stderr
