import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from comodrep import pcont
from comodrep.pcont import (
    NotAPropMorphism,
    PropContainer,
    all_maps,
    coproduct,
    functional_instance_reduce,
    instance_reducible,
    leq,
    prop_catalog,
    prop_morphism,
    prop_morphisms,
    product,
    weak_exponential,
)
from comodrep.universe import Fin, FunTable, TypeMismatch

from suites import report


@st.composite
def props(draw, max_shapes=3):
    n = draw(st.integers(0, max_shapes))
    bits = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return PropContainer(Fin(n), FunTable(zip(range(n), bits)))


def _brute_instance(ap, bq):
    # ∀b ∃a. P a ⇒ Q b, spelled out over the product of shapes
    return all(any((not ap(a)) or bq(b) for a in ap.shape_values()) for b in bq.shape_values())


def _brute_functional(ap, bq):
    return [t for t in all_maps(bq.shape_values(), ap.shape_values()) if all((not ap(t(b))) or bq(b) for b in bq.shape_values())]


@pytest.mark.parametrize("suite", ["pcont-heyting", "pcont-kleisli"])
def test_pcont_suites_pass(suite):
    rep = report(suite)
    assert rep.ok, rep.to_text()
    assert rep.run > 1000


def test_catalog_size():
    # 𝟘 gives one container, 𝟙 two, 𝟚 four
    assert len(prop_catalog(2)) == 7


@given(props(), props())
def test_functional_reduce_matches_exhaustive_search(ap, bq):
    t = functional_instance_reduce(ap, bq)
    found = _brute_functional(ap, bq)
    assert (t is not None) == bool(found)
    if t is not None:
        assert t in found


@given(props(), props())
def test_instance_reducible_is_the_quantifier_formula(ap, bq):
    assert instance_reducible(ap, bq) == _brute_instance(ap, bq)


@given(props(), props())
def test_leq_is_morphism_existence(x, y):
    assert leq(x, y) == bool(prop_morphisms(x, y))


@given(props())
def test_reflexive_reduction_is_identity(ap):
    t = functional_instance_reduce(ap, ap)
    assert t is not None
    assert all(t(b) == b for b in ap.shape_values())


def test_functional_reduction_implies_instance_reduction():
    for ap, bq in itertools.product(prop_catalog(2), repeat=2):
        if functional_instance_reduce(ap, bq) is not None:
            assert instance_reducible(ap, bq)


@given(props(2), props(2), props(2))
def test_heyting_adjunction(c, a, b):
    assert leq(product(c, a), b) == leq(c, weak_exponential(a, b).obj)


@given(props(2), props(2), props(2))
def test_meet_and_join(x, y, z):
    assert leq(z, product(x, y)) == (leq(z, x) and leq(z, y))
    assert leq(coproduct(x, y), z) == (leq(x, z) and leq(y, z))


def test_predicate_must_be_total_and_boolean():
    with pytest.raises(TypeMismatch):
        PropContainer(Fin(2), FunTable([(0, True)]))
    with pytest.raises(TypeMismatch):
        PropContainer(Fin(1), FunTable([(0, 1)]))


def test_morphism_needs_the_implication():
    top = PropContainer(Fin(1), FunTable([(0, True)]))
    bot = PropContainer(Fin(1), FunTable([(0, False)]))
    # Q(f a) holds while P a fails
    with pytest.raises(NotAPropMorphism):
        prop_morphism(bot, top, lambda a: 0)
    assert prop_morphism(top, bot, lambda a: 0)(0) == 0


def test_terminal_and_initial():
    for x in prop_catalog(2):
        assert len(prop_morphisms(x, pcont.terminal())) == 1
        assert len(prop_morphisms(pcont.initial(), x)) == 1
