import itertools

import pytest

from comodrep.container import (
    Container,
    SourceTargetMismatch,
    catalog,
    cointerpret_assignments,
    cointerpret_morphism,
    compose_all,
    compose_containers,
    compose_morphisms,
    container,
    coproduct,
    count_morphisms,
    exponential,
    identity_container,
    identity_morphism,
    interpret,
    interpret_morphism,
    lax_product_map,
    morphism_difference,
    morphisms_between,
    morphisms_equal,
    product,
    terminal_container,
    check_morphism,
)
from comodrep.universe import BOOL, EMPTY, UNIT, UNIT_T, Fin, FunTable, Inl, Inr, cardinality, enumerate_values

SMALL = catalog([EMPTY, UNIT_T, BOOL], [EMPTY, UNIT_T, BOOL])
FLAG = container(BOOL, BOOL)
MIXED = Container(BOOL, {False: UNIT_T, True: BOOL})


def _brute_count(c, d):
    # one shape choice per source shape, then one source position per target position
    total = 0
    for shape_map in itertools.product(enumerate_values(d.shapes), repeat=cardinality(c.shapes)):
        n = 1
        for a, b in zip(enumerate_values(c.shapes), shape_map):
            n *= cardinality(c.positions(a)) ** cardinality(d.positions(b))
        total += n
    return total


def test_catalog_size():
    # shape codes of sizes 0, 1, 2 with three position codes each
    assert len(SMALL) == 1 + 3 + 9


@pytest.mark.parametrize("c,d", [(c, d) for c in SMALL[:6] for d in SMALL[:6]])
def test_morphism_count_matches_brute_force(c, d):
    ms = morphisms_between(c, d, budget=None)
    assert len(ms) == count_morphisms(c, d) == _brute_count(c, d)
    assert all(not check_morphism(m) for m in ms)


def test_morphisms_are_pairwise_distinct():
    ms = morphisms_between(MIXED, FLAG, budget=None)
    for m, n in itertools.combinations(ms, 2):
        assert not morphisms_equal(m, n)


def test_category_laws_on_all_small_morphisms():
    cs = [FLAG, MIXED, identity_container()]
    for c, d in itertools.product(cs, repeat=2):
        for m in morphisms_between(c, d, budget=None):
            assert morphisms_equal(compose_morphisms(identity_morphism(d), m), m)
            assert morphisms_equal(compose_morphisms(m, identity_morphism(c)), m)
    fs = morphisms_between(FLAG, MIXED, budget=None)[:10]
    gs = morphisms_between(MIXED, FLAG, budget=None)[:10]
    hs = morphisms_between(FLAG, MIXED, budget=None)[-5:]
    for f, g, h in itertools.product(fs, gs, hs):
        left = compose_morphisms(h, compose_morphisms(g, f))
        right = compose_morphisms(compose_morphisms(h, g), f)
        assert morphisms_equal(left, right)
        assert morphisms_equal(compose_all(h, g, f), left)


def test_composition_checks_endpoints():
    m = identity_morphism(FLAG)
    with pytest.raises(SourceTargetMismatch):
        compose_morphisms(identity_morphism(MIXED), m)


def test_product_laws():
    pd = product(FLAG, MIXED)
    for x in (FLAG, MIXED):
        for f in morphisms_between(x, FLAG, budget=None)[::7]:
            for g in morphisms_between(x, MIXED, budget=None)[::7]:
                p = pd.pair(f, g)
                assert morphisms_equal(compose_morphisms(pd.fst, p), f)
                assert morphisms_equal(compose_morphisms(pd.snd, p), g)
                q = pd.pair(compose_morphisms(pd.fst, p), compose_morphisms(pd.snd, p))
                assert morphisms_equal(p, q)


def test_coproduct_laws():
    cd = coproduct(FLAG, MIXED)
    for y in (FLAG, MIXED):
        for f in morphisms_between(FLAG, y, budget=None)[::5]:
            for g in morphisms_between(MIXED, y, budget=None)[::5]:
                k = cd.copair(f, g)
                assert morphisms_equal(compose_morphisms(k, cd.inl), f)
                assert morphisms_equal(compose_morphisms(k, cd.inr), g)


def test_terminal_object_has_exactly_one_map_in():
    t = terminal_container()
    for c in SMALL:
        assert len(morphisms_between(c, t, budget=None)) == 1


@pytest.mark.parametrize("x,c,d", [(FLAG, MIXED, identity_container()), (MIXED, FLAG, identity_container()), (identity_container(), FLAG, FLAG), (identity_container(), MIXED, MIXED)])
def test_exponential_transposition(x, c, d):
    e = exponential(c, d)
    prod = product(x, c)
    fs = morphisms_between(prod.obj, d, budget=None)
    gs = morphisms_between(x, e.obj, budget=None)
    # Hom(X × C, D) ≅ Hom(X, C ⇒ D), counted independently
    assert len(fs) == len(gs)
    for f in fs[:: max(1, len(fs) // 40)]:
        g = e.curry(f)
        assert morphisms_equal(e.uncurry(g), f)
        ev_after = compose_morphisms(e.ev, _times_id(g, c, e))
        assert morphisms_equal(ev_after, f)
    for g in gs[:: max(1, len(gs) // 40)]:
        assert morphisms_equal(e.curry(e.uncurry(g)), g)


def _times_id(g, c, e):
    src = product(g.source, c)
    tgt = product(e.obj, c)
    return tgt.pair(compose_morphisms(g, src.fst), src.snd)


def test_composition_product_shapes():
    cc = compose_containers(MIXED, FLAG)
    # Σ a. B^{|P a|} shapes, Σ p. |Q (v p)| positions
    assert cardinality(cc.shapes) == 2**1 + 2**2
    for av in enumerate_values(cc.shapes):
        a, v = av
        expect = sum(cardinality(FLAG.positions(v(p))) for p in enumerate_values(MIXED.positions(a)))
        assert cardinality(cc.positions(av)) == expect


def test_interpretation_size_and_functoriality():
    x = Fin(3)
    assert cardinality(interpret(MIXED, x)) == 3**1 + 3**2
    fs = morphisms_between(FLAG, MIXED, budget=None)[::9]
    gs = morphisms_between(MIXED, FLAG, budget=None)[::9]
    for f, g in itertools.product(fs, gs):
        gf = compose_morphisms(g, f)
        for av in enumerate_values(interpret(FLAG, x)):
            assert interpret_morphism(gf, x)(av) == interpret_morphism(g, x)(interpret_morphism(f, x)(av))


def test_cointerpretation_is_contravariant():
    fs = morphisms_between(FLAG, MIXED, budget=None)[::9]
    gs = morphisms_between(MIXED, FLAG, budget=None)[::9]
    for f, g in itertools.product(fs, gs):
        gf = compose_morphisms(g, f)
        for h in cointerpret_assignments(FLAG):
            lhs = cointerpret_morphism(gf)(h)
            rhs = cointerpret_morphism(f)(cointerpret_morphism(g)(h))
            assert lhs == rhs


def test_cointerpretation_counts_dependent_functions():
    assert len(cointerpret_assignments(MIXED)) == 1 * 2
    assert len(cointerpret_assignments(Container(BOOL, {False: EMPTY, True: BOOL}))) == 0


def test_lax_product_map_tags_the_side():
    left = lax_product_map(FLAG, MIXED)(Inl(cointerpret_assignments(FLAG)[1]))
    assert left((True, False)) == Inl(cointerpret_assignments(FLAG)[1](True))
    right = lax_product_map(FLAG, MIXED)(Inr(cointerpret_assignments(MIXED)[0]))
    assert right((True, False)) == Inr(UNIT)


def test_lax_product_map_is_well_typed_and_natural():
    cs = [c for c in SMALL if cointerpret_assignments(c)]
    for c, d in itertools.product(cs, repeat=2):
        obj = product(c, d).obj
        tagged = [Inl(h) for h in cointerpret_assignments(c)] + [Inr(k) for k in cointerpret_assignments(d)]
        for x in tagged:
            out = lax_product_map(c, d)(x)
            assert all(out(ab) in enumerate_values(obj.positions(ab)) for ab in obj.shape_values())
        # naturality in both arguments, along f : C2 → C and g : D2 → D
        for c2, d2 in ((c, d), (FLAG, MIXED)):
            src = product(c2, d2)
            for f in morphisms_between(c2, c, budget=None)[:3]:
                for g in morphisms_between(d2, d, budget=None)[:3]:
                    fg = product(c, d).pair(compose_morphisms(f, src.fst), compose_morphisms(g, src.snd))
                    for x in tagged:
                        pulled = cointerpret_morphism(f if isinstance(x, Inl) else g)(x.value)
                        lhs = cointerpret_morphism(fg)(lax_product_map(c, d)(x))
                        rhs = lax_product_map(c2, d2)(type(x)(pulled))
                        assert lhs == rhs


def test_difference_reports_first_disagreement():
    ms = morphisms_between(FLAG, FLAG, budget=None)
    d = morphism_difference(ms[0], ms[1])
    assert d is not None and "shape" in d


def test_container_equality_is_structural():
    assert container(BOOL, BOOL) == Container(BOOL, {False: BOOL, True: BOOL})
    assert container(BOOL, BOOL) != MIXED
    assert FunTable([(False, 1)]) == FunTable([(False, 1)])
