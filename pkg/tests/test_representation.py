import itertools

import pytest

from comodrep.container import Assignment, Container, cointerpret_assignments, container, identity_container, morphisms_equal
from comodrep.demos import baire_scenario, baire_stages
from comodrep.mendler import InducedMonad, identity_algebra
from comodrep.representation import (
    CookFromAlpha,
    FunctionalOracle,
    MonadMismatch,
    Representation,
    alpha_from_cook,
    check_algebra,
    check_represents,
    compose_oracles,
    compose_reps,
    evaluate_rep,
    find_representation,
    functor_F,
    id_rep,
    identity_oracle,
    rfun_products,
)
from comodrep.treemonad import TreeMonad, enumerate_trees
from comodrep.universe import BOOL, NAT, UNIT, UNIT_T, Fin, Inl, Inr, TypeMismatch

FLAG = container(BOOL, BOOL)
MIXED = Container(BOOL, {False: UNIT_T, True: BOOL})
TM = TreeMonad()


def _oracle(fn, dom=FLAG, cod=FLAG):
    return FunctionalOracle(dom, cod, lambda h: Assignment(cod, lambda b: fn(h, b)))


TWICE = _oracle(lambda h, b: h(h(b)))
FLIP_AFTER = _oracle(lambda h, b: not h(not b))
CONST = _oracle(lambda h, b: b)


@pytest.mark.parametrize("oracle,depth", [(TWICE, 2), (FLIP_AFTER, 1), (CONST, 0)])
def test_found_representation_reproduces_the_functional(oracle, depth):
    r = find_representation(TM, oracle, depth=depth, budget=None)
    assert r is not None
    assert check_represents(r, oracle).ok


def test_nested_query_needs_depth_two():
    # h(h b) reads h at a point that depends on an answer
    assert find_representation(TM, TWICE, depth=1, budget=None) is None


def test_identity_representation_echoes_argument():
    r = id_rep(TM, MIXED)
    for h in cointerpret_assignments(MIXED):
        for b in (False, True):
            assert evaluate_rep(r, h, b) == h(b)


def test_composition_matches_composed_functionals():
    f = find_representation(TM, FLIP_AFTER, depth=1, budget=None)
    g = find_representation(TM, TWICE, depth=2, budget=None)
    gf = compose_reps(g, f)
    assert check_represents(gf, compose_oracles(TWICE, FLIP_AFTER)).ok
    fg = compose_reps(f, g)
    assert check_represents(fg, compose_oracles(FLIP_AFTER, TWICE)).ok


def test_functor_of_every_small_kleisli_map_is_represented():
    for m in TM.kleisli_morphisms(MIXED, FLAG, depth=1, budget=None)[::13]:
        r = Representation(TM, FLAG, MIXED, m)
        assert check_represents(r, functor_F(TM, m)).ok


def test_representation_checks_its_morphism():
    m = TM.eta(FLAG)
    with pytest.raises(TypeMismatch):
        Representation(TM, MIXED, FLAG, m)


def test_monads_must_agree_when_composing():
    idm = InducedMonad(identity_algebra())
    with pytest.raises(MonadMismatch):
        compose_reps(id_rep(TM, FLAG), id_rep(idm, FLAG))


def test_products_of_represented_functionals():
    prods = rfun_products(TM)
    f = find_representation(TM, FLIP_AFTER, depth=1, budget=None)
    g = find_representation(TM, CONST, depth=0, budget=None)
    p = prods.pair(f, g)
    p1 = compose_reps(prods.proj1(FLAG, FLAG), p)
    p2 = compose_reps(prods.proj2(FLAG, FLAG), p)
    for h in cointerpret_assignments(FLAG):
        for b in (False, True):
            assert evaluate_rep(p1, h, b) == evaluate_rep(f, h, b)
            assert evaluate_rep(p2, h, b) == evaluate_rep(g, h, b)
            assert evaluate_rep(p, h, Inl(b)) == FLIP_AFTER(h)(b)
            assert evaluate_rep(p, h, Inr(b)) == b
    # the terminal object is the empty container; its map has nothing to check
    assert list(prods.bang(FLAG).codomain.shape_values()) == []


@pytest.mark.parametrize("monad", [TM, InducedMonad(identity_algebra())], ids=["tree", "identity"])
def test_cook_algebra_round_trip(monad):
    alpha = alpha_from_cook(monad)
    assert check_algebra(monad, alpha, depth=2).ok
    rebuilt = CookFromAlpha(monad, alpha)
    for c in (FLAG, MIXED):
        shapes = monad.sample_shapes(c, 2)
        for h in cointerpret_assignments(c):
            a1, a2 = monad.cook(c)(h), rebuilt.cook(c)(h)
            assert all(a1(t) == a2(t) for t in shapes)
    assert morphisms_equal(alpha_from_cook(rebuilt), alpha, monad.sample_shapes(identity_container(), 3))


def test_baire_value_is_two():
    sc = baire_scenario()
    r = sc.representation.build()
    h = sc.argument.build()
    succ = lambda n: n + 1  # noqa: E731
    assert evaluate_rep(r, h, UNIT) == succ(succ(0)) == 2


def test_baire_two_stages_agree_on_many_arguments():
    first, second = baire_stages()
    both = compose_reps(second, first)
    baire = first.domain
    for k in range(5):
        h = Assignment(baire, lambda n, k=k: (3 * n + k) % 7)
        direct = h(h(0))
        staged = evaluate_rep(second, Assignment(baire, lambda b: evaluate_rep(first, h, b)), UNIT)
        assert evaluate_rep(both, h, UNIT) == staged == direct
