import io
import json

import pytest

from comodrep.cli import main
from comodrep.demos import data_dir


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def data(name):
    return str(data_dir() / name)


def test_list_suites():
    code, out = run("list-suites")
    names = out.split()
    assert code == 0
    assert "monad-laws:tree" in names and "mutant:io-j-order" in names


def test_check_laws_text_and_json():
    code, out = run("check-laws", "--suite", "monad-laws:identity", "--max-shapes", "1")
    assert code == 0 and out.startswith("PASS")
    code, out = run("check-laws", "--suite", "comodule-laws:tree", "--max-shapes", "1", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["status"] == "PASS" and body["failed"] == 0


def test_check_laws_reports_a_mutant_failure():
    code, out = run("check-laws", "--suite", "mutant:pfin-restrict")
    assert code == 1
    assert out.startswith("FAIL") and "counterexample" in out


def test_budget_zero_skips(monkeypatch):
    code, out = run("check-laws", "--suite", "monad-laws:tree", "--budget", "0")
    assert code == 0 and out.startswith("SKIPPED")
    monkeypatch.setenv("COMODULE_BUDGET", "0")
    code, out = run("check-laws", "--suite", "monad-laws:tree")
    assert code == 0 and out.startswith("SKIPPED")


def test_budget_caps_cases():
    code, out = run("check-laws", "--suite", "monad-laws:identity", "--max-shapes", "1", "--budget", "50", "--format", "json")
    body = json.loads(out)
    assert code == 0
    assert body["run"] == 50 and body["skipped"] > 0


def test_bad_budget_env(monkeypatch):
    monkeypatch.setenv("COMODULE_BUDGET", "lots")
    assert run("check-laws", "--suite", "monad-laws:tree")[0] == 2


def test_unknown_suite_is_a_usage_error():
    assert run("check-laws", "--suite", "monad-laws:nope")[0] == 2


def test_eval_baire():
    code, out = run("eval", "--rep", data("baire.json"))
    assert (code, out.strip()) == (0, "2")


def test_eval_with_explicit_point():
    code, out = run("eval", "--rep", data("exceptional.json"), "--at", "0")
    # b=0 asks h at False; h = not gives True; the table negates it
    assert (code, out.strip()) == (0, "false")


def test_eval_stateful():
    code, out = run("eval", "--rep", data("io-interactive.json"), "--state", "1")
    assert code == 0
    assert out.strip() == "(final state, value) = (2, true)"


def test_eval_errors():
    assert run("eval", "--rep", data("baire.json"), "--at", "7")[0] == 2
    assert run("eval", "--rep", data("baire.json"), "--at", "{")[0] == 2
    assert run("eval", "--rep", data("baire.json"), "--state", "0")[0] == 2
    assert run("eval", "--rep", data("zorn-choice.json"))[0] == 2
    assert run("eval", "--rep", "/nonexistent.json")[0] == 2
    # argument over Flag, representation over Baire
    assert run("eval", "--rep", data("baire.json"), "--arg", data("identity.json"))[0] == 2


def test_reduce():
    code, out = run("reduce", "--from", data("zorn-choice.json"), "--to", data("zorn-maximal.json"))
    assert (code, out.strip()) == (0, "irreducible")
    code, out = run("reduce", "--from", data("zorn-choice-nonempty.json"), "--to", data("zorn-maximal.json"), "--functional")
    assert code == 0 and out.startswith("functional reduction found")
    code, out = run("reduce", "--from", data("zorn-maximal.json"), "--to", data("zorn-maximal.json"))
    assert code == 0 and "identity" in out


def test_reduce_needs_prop_containers():
    assert run("reduce", "--from", data("baire.json"), "--to", data("zorn-maximal.json"))[0] == 2


def test_demo():
    code, out = run("demo", "baire", "--no-laws")
    assert code == 0 and "F(α)(⋆) = 2" in out
    assert run("demo", "nope")[0] == 2


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["check-laws"], ["eval"]])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_help_exits_zero():
    assert run("--help")[0] == 0
