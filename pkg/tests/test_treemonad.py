import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from comodrep.container import Assignment, Container, container, cointerpret_assignments
from comodrep.treemonad import (
    LEAF,
    STOP,
    MalformedPath,
    Node,
    PathType,
    Step,
    TreeMonad,
    concat_paths,
    conforms,
    cook_pure,
    count_trees,
    depth,
    enumerate_paths,
    enumerate_trees,
    flatten_direct,
    graft,
    is_tree,
    leaves_node,
    node,
    path,
    path_positions,
    pfst,
    psnd,
    tree_map_direct,
)
from comodrep.universe import BOOL, EMPTY, NAT, UNIT, UNIT_T, Fin, enumerate_values

FLAG = container(BOOL, BOOL)
MIXED = Container(BOOL, {False: UNIT_T, True: BOOL})
STOPPER = Container(Fin(2), {0: EMPTY, 1: BOOL})


def _count(c, d):
    # independent recursion: a tree of depth ≤ d is a leaf or a label with |P a| subtrees of depth ≤ d-1
    if d == 0:
        return 1
    sub = _count(c, d - 1)
    return 1 + sum(sub ** len(enumerate_values(c.positions(a))) for a in enumerate_values(c.shapes))


@pytest.mark.parametrize("c", [FLAG, MIXED, STOPPER])
@pytest.mark.parametrize("d", [0, 1, 2])
def test_tree_counts(c, d):
    ts = enumerate_trees(c, d)
    assert len(ts) == count_trees(c, d) == _count(c, d)
    assert len(set(ts)) == len(ts)
    assert all(is_tree(c, t) and depth(t) <= d for t in ts)


def _trees():
    return st.sampled_from(enumerate_trees(MIXED, 2))


@given(_trees(), st.data())
def test_split_inverts_concatenation(t, data):
    inner = enumerate_trees(MIXED, 1)
    choice = {pi: data.draw(st.sampled_from(inner)) for pi in enumerate_paths(t)}

    def u(pi):
        return choice[pi]

    g = graft(t, u)
    paths = enumerate_paths(g)
    # |paths(graft t u)| = Σ_π |paths(u π)|
    assert len(paths) == sum(len(enumerate_paths(u(pi))) for pi in enumerate_paths(t))
    for q in paths:
        first, second = pfst(t, u, q), psnd(t, u, q)
        assert conforms(t, first)
        assert conforms(u(first), second)
        assert concat_paths(first, second) == q


def test_graft_onto_leaf_and_onto_leaves():
    t = node(True, {False: LEAF, True: node(False, {UNIT: LEAF})})
    assert graft(LEAF, lambda pi: t) is t
    assert graft(t, lambda pi: LEAF) is t


def test_pfst_rejects_short_paths():
    t = leaves_node(FLAG, True)
    with pytest.raises(MalformedPath):
        pfst(t, lambda pi: LEAF, STOP)


def test_cook_follows_the_argument():
    t = node(True, {False: node(False, {False: LEAF, True: LEAF}), True: LEAF})
    h = Assignment(FLAG, lambda a: not a)
    # h(True) = False leads to the inner node; h(False) = True ends at a leaf
    assert cook_pure(FLAG, h, t) == path(False, True)


def test_cook_on_infinite_branching():
    baire = container(NAT, NAT)
    t = node(0, lambda p: node(p, lambda q: LEAF))
    h = Assignment(baire, lambda n: n + 1)
    assert path_positions(cook_pure(baire, h, t)) == [1, 2]
    assert PathType(baire, t).contains(path(5, 9))


def _kleisli_sample():
    tm = TreeMonad()
    return tm, tm.kleisli_morphisms(FLAG, MIXED, depth=1, budget=None)


def test_bind_is_map_then_flatten():
    tm, ms = _kleisli_sample()
    for m in ms[:: max(1, len(ms) // 50)]:
        ext = tm.bind(m)
        for t in enumerate_trees(FLAG, 2):
            assert ext.shape_map(t) == flatten_direct(tree_map_direct(m)(t))


def test_bind_positions_are_paths():
    tm, ms = _kleisli_sample()
    for m in ms[:: max(1, len(ms) // 30)]:
        ext = tm.bind(m)
        for t in enumerate_trees(FLAG, 2):
            for q in enumerate_paths(ext.shape_map(t)):
                assert conforms(t, ext.position_map(t, q))


def test_unit_laws_pointwise():
    tm, ms = _kleisli_sample()
    eta = tm.eta(FLAG)
    ext_eta = tm.bind(eta)
    for t in enumerate_trees(FLAG, 2):
        assert ext_eta.shape_map(t) == t
        for q in enumerate_paths(t):
            assert ext_eta.position_map(t, q) == q
    for m in ms[::11]:
        ext = tm.bind(m)
        for a in enumerate_values(FLAG.shapes):
            assert ext.shape_map(eta.shape_map(a)) == m.shape_map(a)


def test_eta_is_a_single_query():
    eta = TreeMonad().eta(MIXED)
    assert eta.shape_map(True) == node(True, {False: LEAF, True: LEAF})
    assert eta.position_map(True, path(False)) is False
    with pytest.raises(MalformedPath):
        eta.position_map(True, path(False, True))


def test_trees_hash_cons():
    assert node(True, {False: LEAF, True: LEAF}) is leaves_node(FLAG, True)


def test_cook_is_natural_for_every_argument():
    tm = TreeMonad()
    for h in cointerpret_assignments(MIXED):
        cooked = tm.cook(MIXED)(h)
        for t in enumerate_trees(MIXED, 2):
            pi = cooked(t)
            assert conforms(t, pi)
            # each step answers the query with h
            s = t
            for p in path_positions(pi):
                assert h(s.label) == p
                s = s.child(p)
            assert s is LEAF
