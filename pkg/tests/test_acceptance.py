"""One test per acceptance criterion; each prints a PASS/FAIL line.

The lines are also collected in RESULTS and repeated in the terminal summary
(see conftest.py).
"""

import io
import json

import pytest

from comodrep.cli import main
from comodrep.demos import data_dir, run_demo, shipped_scenarios
from comodrep.lawcheck import Catalog, check_algebra_translation, mutation_fixtures
from comodrep.mendler import InducedMonad, identity_algebra
from comodrep.scenario import emit_document, parse_document
from comodrep.treemonad import TreeMonad

from suites import timed

RESULTS = {}

COHERENCE = ["pfin", "identity", "trivial", "exc", "io"]
EFFECT_SUITES = [
    "io-rho",
    "monad-laws:io",
    "monad-laws:iotree",
    "comodule-laws:io",
    "comodule-laws:iotree",
    "comodule-laws:pure-state2",
    "comodule-laws:pure-exception",
    "effect-squares",
]


@pytest.fixture
def verdict(capsys):
    def say(n, ok, detail):
        RESULTS[n] = (ok, detail)
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  criterion {n}: {detail}")
        assert ok, detail

    return say


def _summary(names):
    reps = [timed(n) for n in names]
    ok = all(r.ok for r, _ in reps)
    cases = sum(r.run for r, _ in reps)
    failed = [r.name for r, _ in reps if not r.ok]
    secs = sum(t for _, t in reps)
    return ok, cases, failed, secs


def test_criterion_1_tree_monad_laws(verdict):
    rep, secs = timed("monad-laws:tree")
    ok = rep.ok and rep.skipped == 0 and secs < 60
    verdict(1, ok, f"tree monad laws {rep.passed}/{rep.run} cases, {rep.skipped} skipped, {secs:.1f}s (limit 60s)")


def test_criterion_2_tree_comodule_laws(verdict):
    rep, _ = timed("comodule-laws:tree")
    verdict(2, rep.ok and rep.run > 0, f"tree comodule laws {rep.passed}/{rep.run} cases")


def test_criterion_3_representation_soundness(verdict):
    rep, _ = timed("representation")
    verdict(3, rep.ok and rep.run > 0, f"soundness, composition and products {rep.passed}/{rep.run} cases")


def test_criterion_4_algebra_translation(verdict):
    reps = [check_algebra_translation(m, Catalog()) for m in (TreeMonad(), InducedMonad(identity_algebra()))]
    ok = all(r.ok and r.run > 0 for r in reps)
    verdict(4, ok, "; ".join(f"{r.name} {r.passed}/{r.run}" for r in reps))


def test_criterion_5_mendler_coherence(verdict):
    names = [f"mendler-coherence:{i}" for i in COHERENCE] + [f"monad-laws:{i}" for i in COHERENCE]
    ok, cases, failed, _ = _summary(names)
    verdict(5, ok, f"{len(names)} suites, {cases} cases" + (f", failing: {failed}" if failed else ""))


def test_criterion_6_finite_support(verdict):
    rep, _ = timed("finite-support")
    verdict(6, rep.ok and rep.run > 0, f"support invariance {rep.passed}/{rep.run} pairs")


def test_criterion_7_effects(verdict):
    ok, cases, failed, secs = _summary(EFFECT_SUITES)
    ok = ok and secs < 300
    verdict(7, ok, f"{len(EFFECT_SUITES)} suites, {cases} cases, {secs:.1f}s (limit 300s)" + (f", failing: {failed}" if failed else ""))


def test_criterion_8_pcont(verdict):
    ok, cases, failed, _ = _summary(["pcont-heyting", "pcont-kleisli"])
    verdict(8, ok, f"Heyting, reducibility and exponential checks, {cases} cases" + (f", failing: {failed}" if failed else ""))


def test_criterion_9_mutation_sensitivity(verdict):
    caught = []
    for fx in mutation_fixtures():
        rep, _ = timed(f"mutant:{fx.name}")
        real = [k for k in rep.counterexamples if k != "checker ran to completion"]
        if not rep.ok and real:
            caught.append(fx.name)
    n = len(mutation_fixtures())
    verdict(9, n >= 5 and len(caught) == n, f"{len(caught)}/{n} seeded bugs caught with a counterexample")


def test_criterion_10_demos(verdict):
    succ = lambda n: n + 1  # noqa: E731
    expected = succ(succ(0))
    out = io.StringIO()
    code = main(["demo", "baire", "--no-laws"], out=out)
    baire_ok = code == 0 and f"F(α)(⋆) = {expected}" in out.getvalue()

    exc = run_demo("exceptional", with_laws=False)
    exc_ok = exc.ok and exc.facts["inr_values"] == {True}

    bad = []
    for name in shipped_scenarios():
        j = json.loads((data_dir() / name).read_text(encoding="utf-8"))
        if emit_document(parse_document(j)) != j:
            bad.append(name)
    ok = baire_ok and exc_ok and not bad
    verdict(
        10,
        ok,
        f"baire prints {expected}: {baire_ok}; exceptional inr independent of h: {exc_ok}; "
        f"{len(shipped_scenarios()) - len(bad)}/{len(shipped_scenarios())} files round-trip",
    )
