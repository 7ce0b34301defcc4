import pytest

from comodrep.lawcheck import (
    Catalog,
    SuiteParams,
    UnknownSuite,
    check_monad_laws,
    list_suites,
    mutation_fixtures,
    run_suite,
)
from comodrep.report import SuiteReport, case_budget
from comodrep.treemonad import TreeMonad

from suites import report

QUICK = SuiteParams(max_shapes=1, max_depth=1)
MUTANTS = [fx.name for fx in mutation_fixtures()]


def test_catalog_has_every_small_container():
    # shapes 𝟘, 𝟙, 𝟚 with positions drawn from {𝟘, 𝟙, 𝟚}: 1 + 3 + 3²
    assert len(Catalog().containers) == 13
    assert len(Catalog(max_shapes=3).containers) == 13 + 27


# the slowest suites only run at full size, in the acceptance test
FULL_SIZE_ONLY = {"io-rho", "mendler-coherence:io", "mendler-coherence:pfin"}


@pytest.mark.parametrize("name", [n for n in list_suites() if not n.startswith("mutant:") and n not in FULL_SIZE_ONLY])
def test_suites_pass_on_small_parameters(name):
    rep = run_suite(name, QUICK)
    assert rep.ok, rep.to_text()
    assert rep.passed > 0


def test_at_least_five_mutants():
    assert len(MUTANTS) >= 5


@pytest.mark.parametrize("name", MUTANTS)
def test_mutant_is_caught_with_a_counterexample(name):
    rep = report(f"mutant:{name}")
    assert not rep.ok
    assert rep.counterexamples
    # a real counterexample names its inputs, not just a crash of the checker
    assert "checker ran to completion" not in rep.counterexamples


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("monad-laws:nope")


def test_budget_zero_is_skipped():
    rep = run_suite("monad-laws:tree", SuiteParams(budget=0))
    assert rep.status == "SKIPPED" and rep.run == 0


def test_budget_limits_recorded_cases():
    with case_budget(10):
        rep = check_monad_laws(TreeMonad(), Catalog(max_shapes=1, depth=1))
    assert rep.run == 10 and rep.skipped > 0 and rep.ok


def test_report_keeps_first_counterexample():
    rep = SuiteReport("r")
    rep.record("c", True)
    rep.record("c", False, {"x": 1})
    rep.record("c", False, {"x": 2})
    rep.attempt("d", lambda: 1 / 0)
    assert (rep.run, rep.passed, rep.failed) == (4, 1, 3)
    assert rep.counterexamples["c"] == {"x": "1"}
    assert "ZeroDivisionError" in rep.counterexamples["d"]["error"]
    d = rep.to_dict()
    assert d["status"] == "FAIL" and d["failed"] == 3
    assert rep.to_text().startswith("FAIL")
