import pytest

from comodrep.demos import (
    DEMOS,
    UnknownDemo,
    choice_side,
    maximal_choices,
    partial_choices,
    run_demo,
    zorn_side,
)
from comodrep.pcont import instance_reducible


def _io_by_hand(r0):
    """The interactive demo, simulated directly.

    counter3 reads ``r odd`` and steps to ``r+1``; writing ``o`` steps by ``1+o``.
    The argument maps ``(a, r)`` to ``(r+1, a xor r == 2)``.
    """
    i = r0 % 2 == 1
    r = (r0 + 1) % 3
    if i:
        r = (r + 2) % 3
    return ((r + 1) % 3, i != (r == 2))


def test_baire_prints_two():
    rep = run_demo("baire", with_laws=False)
    assert rep.ok
    assert rep.facts["value"] == 2
    assert rep.facts["staged"] == rep.facts["stepwise"] == 2
    assert "F(α)(⋆) = 2" in rep.text()


def test_exceptional_inr_branch_ignores_the_argument():
    rep = run_demo("exceptional", with_laws=False)
    assert rep.ok
    assert rep.facts["inr_values"] == {True}
    assert rep.facts["inl_outcomes"] == 4


def test_finite_support_demo():
    rep = run_demo("finite-support", with_laws=False)
    assert rep.ok
    assert rep.facts["bad"] == 0 and rep.facts["total"] > 0


def test_io_demo_matches_hand_simulation():
    rep = run_demo("io-interactive", with_laws=False)
    assert rep.facts["results"] == {r: _io_by_hand(r) for r in range(3)}


def test_zorn_demo():
    rep = run_demo("instance-zorn-shape", with_laws=False)
    assert rep.ok
    assert rep.facts["empty members allowed"] is False
    assert rep.facts["nonempty members"] is True


def test_maximal_choices_by_hand():
    fam = {0: frozenset({0, 1}), 1: frozenset()}
    assert len(partial_choices(fam)) == 3
    assert maximal_choices(fam) == [{0: 0}, {0: 1}]


def test_zorn_sides_against_direct_definitions():
    ap = zorn_side()
    # a finite poset with a bottom element always has a maximal element
    assert all(ap.pred.values())
    bq = choice_side(False)
    assert sum(not v for v in bq.pred.values()) == 16 - 9
    assert not instance_reducible(ap, bq)
    assert instance_reducible(ap, choice_side(True))


@pytest.mark.parametrize("name", list(DEMOS))
def test_every_demo_with_law_verdict(name):
    rep = run_demo(name)
    assert rep.ok, rep.text()
    assert rep.facts["laws"] == "PASS"


def test_unknown_demo():
    with pytest.raises(UnknownDemo):
        run_demo("nope")

