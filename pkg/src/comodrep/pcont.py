"""Propositional containers with booleans as propositions.

Excluded middle holds in this model, so every container is decidable and the
category is cartesian closed; intuitionistic separations cannot be observed.
A propositional container is also an ordinary container whose positions are
𝟙 (true) or 𝟘 (false), which is how the inhabited-powerset monad is run
through the generic induced-monad machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .container import Container, catalog, morphisms_between
from .mendler import (
    FiniteSubset,
    InducedMonad,
    MonadOnTypes,
    WeakMendlerAlgebra,
    check_coherence,
    families_over,
)
from .report import SuiteReport
from .universe import (
    BOOL,
    EMPTY,
    UNIT,
    UNIT_T,
    Budget,
    Derived,
    Fin,
    FunTable,
    Inl,
    Inr,
    Listed,
    Prod,
    Sum,
    TypeMismatch,
    check,
    enumerate_values,
    sort_key,
)


class NotAPropMorphism(TypeMismatch):
    pass


@dataclass(frozen=True)
class PropContainer:
    shapes: object
    pred: FunTable
    name: str = field(default="", compare=False)

    def __post_init__(self):
        vals = enumerate_values(self.shapes)
        if self.pred.keys() != vals or any(not isinstance(v, bool) for v in self.pred.values()):
            raise TypeMismatch(f"predicate must be a total boolean table on {self.shapes!r}")

    def __call__(self, a) -> bool:
        return self.pred(a)

    def shape_values(self) -> list:
        return self.pred.keys()

    def as_container(self) -> Container:
        return Container(self.shapes, {a: UNIT_T if p else EMPTY for a, p in self.pred.items()})

    def __repr__(self):
        if self.name:
            return self.name
        body = ", ".join(f"{a!r}:{'⊤' if p else '⊥'}" for a, p in self.pred.items())
        return f"⟨{body}⟩"


def prop_container(shapes, pred: Callable | dict, name: str = "") -> PropContainer:
    vals = enumerate_values(shapes)
    fn = pred.__getitem__ if isinstance(pred, dict) else pred
    return PropContainer(shapes, FunTable((a, bool(fn(a))) for a in vals), name)


def from_container(c: Container) -> PropContainer:
    """Read a container with positions in {𝟘, 𝟙} back as a propositional one."""
    table = []
    for a in c.shape_values():
        p = c.positions(a)
        if p not in (EMPTY, UNIT_T):
            raise TypeMismatch(f"positions {p!r} at {a!r} are not a proposition")
        table.append((a, p == UNIT_T))
    return PropContainer(c.shapes, FunTable(table))


def cointerpret(ap: PropContainer) -> bool:
    """⟨⟨A◁P⟩⟩ = ∀a. P a."""
    return all(ap.pred.values())


def prop_catalog(max_shapes: int = 2) -> list[PropContainer]:
    codes = [c for c in (EMPTY, UNIT_T, BOOL, Fin(3)) if len(enumerate_values(c)) <= max_shapes]
    return [from_container(c) for c in catalog(codes, [EMPTY, UNIT_T])]


# ---------------------------------------------------------------- morphisms


def morphism_check(f, source: PropContainer, target: PropContainer) -> bool:
    """∀a. Q(f a) ⇒ P a."""
    return all((not target(f(a))) or source(a) for a in source.shape_values())


@dataclass(frozen=True)
class PropMorphism:
    source: PropContainer
    target: PropContainer
    table: FunTable

    def __post_init__(self):
        for a in self.source.shape_values():
            b = self.table(a)
            if not check(self.target.shapes, b):
                raise NotAPropMorphism(f"{a!r} ↦ {b!r} is not a shape of {self.target!r}")
            if self.target(b) and not self.source(a):
                raise NotAPropMorphism(f"Q({b!r}) holds but P({a!r}) does not")

    def __call__(self, a):
        return self.table(a)


def prop_morphism(source: PropContainer, target: PropContainer, f) -> PropMorphism:
    return PropMorphism(source, target, FunTable((a, f(a)) for a in source.shape_values()))


def all_maps(source_vals, target_vals) -> list[FunTable]:
    return [FunTable(zip(source_vals, ch)) for ch in itertools.product(target_vals, repeat=len(source_vals))]


def prop_morphisms(source: PropContainer, target: PropContainer, budget: int | None = 100_000) -> list[PropMorphism]:
    av, bv = source.shape_values(), target.shape_values()
    n = len(bv) ** len(av)
    if budget is not None and n > budget:
        raise Budget(budget, f"{n} maps {source!r} → {target!r}")
    return [PropMorphism(source, target, t) for t in all_maps(av, bv) if morphism_check(t, source, target)]


def compose(g: PropMorphism, f: PropMorphism) -> PropMorphism:
    return prop_morphism(f.source, g.target, lambda a: g(f(a)))


def identity(ap: PropContainer) -> PropMorphism:
    return prop_morphism(ap, ap, lambda a: a)


def leq(x: PropContainer, y: PropContainer) -> bool:
    """Preorder reflection: a morphism ``x → y`` exists."""
    yv = y.shape_values()
    return all(any((not y(b)) or x(a) for b in yv) for a in x.shape_values())


# -------------------------------------------------------- instance reductions


def functional_instance_reduce(ap: PropContainer, bq: PropContainer):
    """A map ``t : B → A`` with ``∀b. P(t b) ⇒ Q b``, or ``None``.

    The condition is pointwise.  At each ``b`` the search tries ``a = b`` first
    when ``b`` is also a shape of ``A`` (so reflexive reductions come out as the
    identity), then every ``a`` in enumeration order.
    """
    av = ap.shape_values()
    same = ap.shapes == bq.shapes
    rows = []
    for b in bq.shape_values():
        cands = ([b] if same else []) + av
        a = next((a for a in cands if (not ap(a)) or bq(b)), _NONE)
        if a is _NONE:
            return None
        rows.append((b, a))
    return FunTable(rows, presorted=True)


_NONE = object()


def instance_reducible(ap: PropContainer, bq: PropContainer) -> bool:
    """∀b ∃a. P a ⇒ Q b."""
    return all(any((not ap(a)) or bq(b) for a in ap.shape_values()) for b in bq.shape_values())


# ------------------------------------------------------- products and sums


def terminal() -> PropContainer:
    return PropContainer(UNIT_T, FunTable([(UNIT, False)]), "𝟙ᵖ")


def initial() -> PropContainer:
    return PropContainer(EMPTY, FunTable(), "𝟘ᵖ")


def truth() -> PropContainer:
    """𝟙 ◁ ⊤, the unit for evaluation at a point."""
    return PropContainer(UNIT_T, FunTable([(UNIT, True)]), "Idᵖ")


def product(ap: PropContainer, bq: PropContainer) -> PropContainer:
    code = Prod(ap.shapes, bq.shapes)
    return PropContainer(code, FunTable(((a, b), ap(a) or bq(b)) for a, b in enumerate_values(code)))


def coproduct(ap: PropContainer, bq: PropContainer) -> PropContainer:
    code = Sum(ap.shapes, bq.shapes)
    return PropContainer(
        code, FunTable((s, ap(s.value) if isinstance(s, Inl) else bq(s.value)) for s in enumerate_values(code))
    )


def pair(f: PropMorphism, g: PropMorphism) -> PropMorphism:
    return prop_morphism(f.source, product(f.target, g.target), lambda c: (f(c), g(c)))


def copair(f: PropMorphism, g: PropMorphism) -> PropMorphism:
    return prop_morphism(coproduct(f.source, g.source), f.target, lambda s: f(s.value) if isinstance(s, Inl) else g(s.value))


def times_id(g: PropMorphism, ap: PropContainer) -> PropMorphism:
    return prop_morphism(product(g.source, ap), product(g.target, ap), lambda ca: (g(ca[0]), ca[1]))


@dataclass
class PStructure:
    terminal: PropContainer
    initial: PropContainer
    product: Callable
    coproduct: Callable


def p_structure() -> PStructure:
    return PStructure(terminal(), initial(), product, coproduct)


def distributivity_iso(ap, bq, cr):
    """``A×(B+C) ⇄ (A×B)+(A×C)``; construction raises if a direction is not a morphism."""
    lhs = product(ap, coproduct(bq, cr))
    rhs = coproduct(product(ap, bq), product(ap, cr))

    def there(x):
        a, s = x
        return Inl((a, s.value)) if isinstance(s, Inl) else Inr((a, s.value))

    def back(s):
        a, v = s.value
        return (a, Inl(v)) if isinstance(s, Inl) else (a, Inr(v))

    return prop_morphism(lhs, rhs, there), prop_morphism(rhs, lhs, back)


# -------------------------------------------------------------- exponentials


@dataclass
class WeakExponential:
    obj: PropContainer
    ev: PropMorphism
    curry: Callable[[PropContainer, PropMorphism], PropMorphism]


def weak_exponential(ap: PropContainer, bq: PropContainer) -> WeakExponential:
    """Shapes ``(k, K)`` with ``∀a. Q(k a) → P a ∨ K``; predicate ``∃a. Q(k a) ∧ K``."""
    av = ap.shape_values()
    shapes = [
        (k, big)
        for k in all_maps(av, bq.shape_values())
        for big in (False, True)
        if all((not bq(k(a))) or ap(a) or big for a in av)
    ]
    code = Listed.of(shapes, "wexp")
    obj = PropContainer(code, FunTable(((k, big), big and any(bq(k(a)) for a in av)) for k, big in code.members))
    ev = prop_morphism(product(obj, ap), bq, lambda ka: ka[0][0](ka[1]))

    def curry(cr: PropContainer, f: PropMorphism) -> PropMorphism:
        """``c ↦ (λa. f(c, a), R c)`` for ``f : C◁R ×ᵖ A◁P → B◁Q``."""
        return prop_morphism(cr, obj, lambda c: (FunTable((a, f((c, a))) for a in av), cr(c)))

    return WeakExponential(obj, ev, curry)


def exponential_p(ap: PropContainer, bq: PropContainer) -> WeakExponential:
    """Shapes ``A → B``, predicate ``∃a. Q(u a) ∧ ¬P a``; evaluation needs P decidable."""
    if not decidable_check(ap):
        raise TypeMismatch(f"{ap!r} is not decidable")
    av = ap.shape_values()
    maps = all_maps(av, bq.shape_values())
    code = Listed.of(maps, "exp")
    obj = PropContainer(code, FunTable((u, any(bq(u(a)) and not ap(a) for a in av)) for u in code.members))
    ev = prop_morphism(product(obj, ap), bq, lambda ua: ua[0](ua[1]))

    def curry(cr: PropContainer, f: PropMorphism) -> PropMorphism:
        return prop_morphism(cr, obj, lambda c: FunTable((a, f((c, a))) for a in av))

    return WeakExponential(obj, ev, curry)


def decidable_check(ap: PropContainer) -> bool:
    """``∀a. P a ∨ ¬P a``: always true because propositions are booleans here."""
    return all(p or not p for p in ap.pred.values())


# ------------------------------------------------------ inhabited powerset


class InhabitedCode(Derived):
    """𝒫₊(X): nonempty subsets, by size and then lexicographically."""

    def __init__(self, base):
        self.base = base

    def ident(self):
        return ("P+", self.base)

    def values(self):
        vals = enumerate_values(self.base)
        return [FiniteSubset(c) for n in range(1, len(vals) + 1) for c in itertools.combinations(vals, n)]

    def size(self):
        return 2 ** len(enumerate_values(self.base)) - 1

    def contains(self, v):
        return isinstance(v, FiniteSubset) and len(v) > 0 and all(check(self.base, a) for a in v)

    def __repr__(self):
        return f"P+({self.base!r})"


class InhabitedPowerset(MonadOnTypes):
    name = "P+"

    def code(self, x):
        return InhabitedCode(x)

    def unit(self, v):
        return FiniteSubset([v])

    def bind(self, f, m):
        out = []
        for a in m:
            out.extend(f(a))
        return FiniteSubset(out)


def ppow_monad() -> InhabitedPowerset:
    return InhabitedPowerset()


def _holds(code) -> bool:
    return code == UNIT_T


def _prop(b: bool):
    return UNIT_T if b else EMPTY


def plus_extend(p: Container):
    """``P⁺ u = ∃a ∈ u. P a`` as a proposition code."""
    return lambda u: _prop(any(_holds(p.positions(a)) for a in u))


def plus_algebra() -> WeakMendlerAlgebra:
    """Extension ``P⁺``; all witnesses are the unique proof ``()``."""

    def action(h, p, q):
        return lambda u, x: UNIT

    def i(p, a, x):
        return UNIT

    def j(q, f, u, x):
        return UNIT

    return WeakMendlerAlgebra("plus", InhabitedPowerset(), plus_extend, action, i, j, _cook_plus)


def plus_witness(ap, u):
    """The first ``a ∈ u`` (canonical order) with ``P a``, or ``None``."""
    pred = ap if isinstance(ap, PropContainer) else from_container(ap)
    for a in u:
        if pred(a):
            return a
    return None


def _cook_plus(c: Container, h, u):
    a = plus_witness(c, u)
    if a is None:
        raise TypeMismatch(f"no witness in {u!r}")
    return h(a)


def cook_plus(ap: PropContainer):
    """``(∀a. P a) ⇒ ∀u. P⁺ u``: the proof at ``u`` comes from the first true witness."""
    c = ap.as_container()

    def act(h):
        return lambda u: _cook_plus(c, h, u)

    return act


def plus_monad() -> InducedMonad:
    return InducedMonad(plus_algebra())


def kleisli_witness(ap: PropContainer, bq: PropContainer, budget: int | None = 100_000):
    """A Kleisli map ``B◁Q → 𝒫₊ᶜ(A◁P)`` found by generic morphism search, or ``None``."""
    mon = plus_monad()
    ms = morphisms_between(bq.as_container(), mon.T(ap.as_container()), budget=budget)
    return ms[0] if ms else None


def kleisli_reducibility_equiv(ap: PropContainer, bq: PropContainer) -> SuiteReport:
    rep = SuiteReport("instance ≤ ⇔ Kleisli")
    lhs = instance_reducible(ap, bq)
    rhs = kleisli_witness(ap, bq) is not None
    rep.record("≤_I ⇔ ∃ Kleisli map", lhs == rhs, lambda: {"A◁P": ap, "B◁Q": bq, "reducible": lhs, "kleisli": rhs})
    return rep


# ------------------------------------------------------------------ suites


def check_heyting_suite(max_shapes: int = 2) -> SuiteReport:
    """Preorders, meets, joins, the Heyting adjunction and the currying triangles."""
    rep = SuiteReport("pcont-heyting")
    cat = prop_catalog(max_shapes)
    for x in cat:
        rep.record("≤ reflexive", leq(x, x), {"X": x})
        rep.record("≤_I reflexive", instance_reducible(x, x), {"X": x})
        rep.record("decidable", decidable_check(x), {"X": x})
    for x, y in itertools.product(cat, repeat=2):
        # the closed-form order agrees with morphism search
        found = bool(prop_morphisms(x, y))
        rep.record("≤ = ∃ morphism", leq(x, y) == found, {"X": x, "Y": y})
        t = functional_instance_reduce(x, y)
        rep.record("functional ⇒ instance", t is None or instance_reducible(x, y), {"A◁P": x, "B◁Q": y})
        rep.record("functional reduction = morphism", (t is not None) == leq(y, x), {"A◁P": x, "B◁Q": y})
        for f in prop_morphisms(x, y):
            rep.record("⟨⟨−⟩⟩ contravariant", (not cointerpret(y)) or cointerpret(x), {"f": f.table})
    for x, y, z in itertools.product(cat, repeat=3):
        if leq(x, y) and leq(y, z):
            rep.record("≤ transitive", leq(x, z), {"X": x, "Y": y, "Z": z})
        if instance_reducible(x, y) and instance_reducible(y, z):
            rep.record("≤_I transitive", instance_reducible(x, z), {"X": x, "Y": y, "Z": z})
        rep.record("× is meet", leq(z, product(x, y)) == (leq(z, x) and leq(z, y)), {"X": x, "Y": y, "Z": z})
        rep.record("+ is join", leq(coproduct(x, y), z) == (leq(x, z) and leq(y, z)), {"X": x, "Y": y, "Z": z})
        # C = x, A = y, B = z
        w = weak_exponential(y, z)
        lhs, rhs = leq(product(x, y), z), leq(x, w.obj)
        rep.record("C×A ≤ B ⇔ C ≤ A⇒ʷB", lhs == rhs, {"C": x, "A": y, "B": z, "left": lhs, "right": rhs})
        _triangles(rep, x, y, z, w)
    rep.record("𝟙ᵖ terminal", all(len(prop_morphisms(x, terminal())) == 1 for x in cat), None)
    rep.record("𝟘ᵖ initial", all(len(prop_morphisms(initial(), x)) == 1 for x in cat), None)
    for x, y, z in itertools.product(prop_catalog(min(max_shapes + 1, 3)), repeat=3):
        try:
            there, back = distributivity_iso(x, y, z)
            ok = all(back(there(s)) == s for s in there.source.shape_values()) and all(
                there(back(s)) == s for s in back.source.shape_values()
            )
        except NotAPropMorphism:
            ok = False
        rep.record("A×(B+C) ≅ A×B + A×C", ok, {"A": x, "B": y, "C": z})
    return rep


def _triangles(rep, cr, ap, bq, w):
    src = product(cr, ap)
    strict = exponential_p(ap, bq)
    for f in prop_morphisms(src, bq):
        g = w.curry(cr, f)
        lhs = compose(w.ev, times_id(g, ap))
        rep.record("ev ∘ (curry f × id) = f", lhs.table == f.table, {"C": cr, "A": ap, "B": bq, "f": f.table})
        # strict exponential: exactly one mediating morphism
        mediators = [
            g2
            for g2 in prop_morphisms(cr, strict.obj)
            if compose(strict.ev, times_id(g2, ap)).table == f.table
        ]
        rep.record("unique mediating morphism", len(mediators) == 1, {"C": cr, "A": ap, "B": bq, "f": f.table, "found": len(mediators)})
        if mediators:
            g2 = strict.curry(cr, f)
            rep.record("curry is the mediator", mediators[0].table == g2.table, {"f": f.table})


def check_kleisli_suite(max_shapes: int = 2) -> SuiteReport:
    """𝒫₊ monad laws, ≤_I against Kleisli maps, and the exponential identities."""
    rep = SuiteReport("pcont-kleisli")
    mon = InhabitedPowerset()
    code = Fin(3)
    subs = enumerate_values(mon.code(code))
    for a in enumerate_values(code):
        for f in all_maps(enumerate_values(code), subs):
            rep.record("bind f (unit a) = f a", mon.bind(f, mon.unit(a)) == f(a), {"a": a, "f": f})
    for u in subs:
        rep.record("bind unit u = u", mon.bind(mon.unit, u) == u, {"u": u})
        fs = all_maps(enumerate_values(code), subs)
        for f in fs[:: 37]:
            for g in fs[:: 41]:
                lhs = mon.bind(g, mon.bind(f, u))
                rhs = mon.bind(lambda a: mon.bind(g, f(a)), u)
                rep.record("bind associative", lhs == rhs, {"u": u, "f": f, "g": g})
    for ap in prop_catalog(max_shapes):
        c = ap.as_container()
        for a in ap.shape_values():
            rep.record("P⁺{a} = P a", _holds(plus_extend(c)(mon.unit(a))) == ap(a), {"P": ap, "a": a})
        if cointerpret(ap):
            for u in enumerate_values(mon.code(ap.shapes)):
                w = plus_witness(ap, u)
                rep.record("cook⁺ finds the first witness", w == next(iter(u)), {"P": ap, "u": u, "witness": w})
    for ap, bq in itertools.product(prop_catalog(max_shapes), repeat=2):
        rep.merge(kleisli_reducibility_equiv(ap, bq))
        e = exponential_p(ap, bq)
        via = [len(e.obj.shape_values()), len(prop_morphisms(truth(), e.obj)), len(prop_morphisms(product(truth(), ap), bq))]
        n_maps = len(bq.shape_values()) ** len(ap.shape_values())
        rep.record("E ≅ (Idᵖ → E) ≅ (Idᵖ × A → B) ≅ (A → B)", via == [n_maps] * 3, {"A◁P": ap, "B◁Q": bq})
        base = exponential_p(terminal(), bq)
        rep.record(
            "(𝟙ᵖ ⇒ B) ≅ B",
            sorted((u(UNIT) for u in base.obj.shape_values()), key=sort_key) == sorted(bq.shape_values(), key=sort_key)
            and all(base.obj(u) == bq(u(UNIT)) for u in base.obj.shape_values()),
            {"B◁Q": bq},
        )
    prop_fams = {c: families_over(c, [EMPTY, UNIT_T]) for c in (EMPTY, UNIT_T, BOOL, Fin(3))}
    rep.merge(check_coherence(plus_algebra(), families=prop_fams, budget=None, max_kleisli=32), prefix="coherence: ")
    return rep


__all__ = [
    "InhabitedCode",
    "InhabitedPowerset",
    "NotAPropMorphism",
    "PStructure",
    "PropContainer",
    "PropMorphism",
    "WeakExponential",
    "all_maps",
    "check_heyting_suite",
    "check_kleisli_suite",
    "cointerpret",
    "compose",
    "cook_plus",
    "copair",
    "coproduct",
    "decidable_check",
    "distributivity_iso",
    "exponential_p",
    "from_container",
    "functional_instance_reduce",
    "identity",
    "initial",
    "instance_reducible",
    "kleisli_reducibility_equiv",
    "kleisli_witness",
    "leq",
    "p_structure",
    "pair",
    "plus_algebra",
    "plus_extend",
    "plus_monad",
    "plus_witness",
    "ppow_monad",
    "product",
    "prop_catalog",
    "prop_container",
    "prop_morphism",
    "prop_morphisms",
    "terminal",
    "times_id",
    "truth",
    "weak_exponential",
]
