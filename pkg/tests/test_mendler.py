import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from comodrep.container import Assignment, Container, cointerpret_assignments, container
from comodrep.demos import demo_finite_support_reps
from comodrep.mendler import (
    FiniteSubset,
    InducedMonad,
    PfinCode,
    check_coherence,
    check_finite_support,
    exception_instance,
    families_over,
    identity_algebra,
    kleisli_extend_pfin,
    pfin_algebra,
    restrict,
    self_rep_instance,
    singleton,
    stride_sample,
    union,
)
from comodrep.representation import Representation, evaluate_rep
from comodrep.universe import BOOL, EMPTY, UNIT, UNIT_T, Fin, Inl, Inr, enumerate_values

FLAG = container(BOOL, BOOL)


@given(st.lists(st.integers(0, 5)), st.lists(st.integers(0, 5)))
def test_finite_subsets_are_canonical(xs, ys):
    assert FiniteSubset(xs) == FiniteSubset(sorted(set(xs)))
    assert set(union(FiniteSubset(xs), FiniteSubset(ys))) == set(xs) | set(ys)


def test_bool_and_int_members_are_distinct():
    s = FiniteSubset([0, False, 1, True])
    assert len(s) == 4


def test_powerset_code_size():
    assert len(enumerate_values(PfinCode(Fin(3)))) == 2**3


@given(st.lists(st.integers(0, 3), max_size=4))
def test_pfin_kleisli_extension_is_union_of_images(xs):
    f = lambda a: FiniteSubset([a, a + 1])  # noqa: E731
    out = kleisli_extend_pfin(f)(FiniteSubset(xs))
    assert set(out) == {y for a in xs for y in (a, a + 1)}
    assert kleisli_extend_pfin(singleton)(FiniteSubset(xs)) == FiniteSubset(xs)


def test_restrict_keeps_only_the_support():
    h = Assignment(container(Fin(3), BOOL), lambda a: a == 1)
    t = restrict(h, FiniteSubset([1, 2]))
    assert t.keys() == [1, 2] and t(1) is True and t(2) is False


def test_stride_sample_is_even_and_keeps_ends():
    xs = list(range(100))
    s = stride_sample(xs, 5)
    assert s[0] == 0 and s[-1] == 99 and len(s) == 5
    assert stride_sample(xs[:3], 5) == xs[:3]


def test_families_over_counts():
    assert len(families_over(BOOL)) == 3**2
    assert len(families_over(Fin(3), [EMPTY, UNIT_T])) == 2**3


@pytest.mark.parametrize(
    "alg",
    [identity_algebra(), exception_instance(), self_rep_instance()],
    ids=["identity", "exc", "trivial"],
)
def test_coherence_on_small_codes(alg):
    rep = check_coherence(alg, shape_codes=[EMPTY, UNIT_T, BOOL], budget=20_000, max_kleisli=8)
    assert rep.ok, rep.to_text()
    assert rep.passed > 0


def test_exception_branch_ignores_the_argument():
    exc = InducedMonad(exception_instance())
    cod = container(UNIT_T, BOOL)
    tc = exc.T(FLAG)
    from comodrep.container import ContainerMorphism

    raise_default = ContainerMorphism(cod, tc, lambda _: Inr(UNIT), lambda _, pos: True)
    r = Representation(exc, FLAG, cod, raise_default)
    outs = {evaluate_rep(r, h, UNIT) for h in cointerpret_assignments(FLAG)}
    assert outs == {True}
    query = ContainerMorphism(cod, tc, lambda _: Inl(True), lambda _, pos: pos)
    r2 = Representation(exc, FLAG, cod, query)
    assert {evaluate_rep(r2, h, UNIT) for h in cointerpret_assignments(FLAG)} == {False, True}


def test_pfin_cook_is_the_restriction():
    pf = InducedMonad(pfin_algebra())
    c = container(Fin(3), BOOL)
    for h in cointerpret_assignments(c)[::3]:
        cooked = pf.cook(c)(h)
        for s in enumerate_values(PfinCode(Fin(3))):
            assert cooked(s) == restrict(h, s)


def test_finite_support_on_the_demo_set():
    reps = demo_finite_support_reps()
    assert len(reps) == 676 + 1
    checked = 0
    for r in reps[::5]:
        hs = cointerpret_assignments(r.domain)
        for b in r.codomain.shape_values():
            for h, h2 in itertools.product(hs, repeat=2):
                assert check_finite_support(r, h, h2, b)
                checked += 1
    assert checked > 0


def test_finite_support_detects_reading_outside_support():
    # a position map that is not a function of the restricted table would be caught
    pf = InducedMonad(pfin_algebra())
    c = container(Fin(2), BOOL)
    cod = container(UNIT_T, BOOL)
    from comodrep.container import ContainerMorphism

    r = Representation(pf, c, cod, ContainerMorphism(cod, pf.T(c), lambda _: FiniteSubset([0]), lambda _, t: t(0)))
    h = Assignment(c, lambda a: True)
    h2 = Assignment(c, lambda a: a == 0)
    assert check_finite_support(r, h, h2, UNIT)
    assert evaluate_rep(r, h, UNIT) is True
