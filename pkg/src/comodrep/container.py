"""Containers, container morphisms and the structure of Cont."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .universe import (
    BOOL,
    EMPTY,
    INFINITE,
    UNIT,
    UNIT_T,
    Budget,
    Fun,
    FunTable,
    Inl,
    Inr,
    Listed,
    NotEnumerable,
    Prod,
    Sum,
    TypeCode,
    TypeMismatch,
    Value,
    cardinality,
    check,
    enumerate_dependent,
    enumerate_values,
    is_finite,
    samples,
    show_code,
)


class SourceTargetMismatch(TypeMismatch):
    pass


class Container:
    """A shape code together with a position code for every shape.

    ``positions`` is either a dict (finite shapes) or a function.  Containers
    built by monads pass a ``key`` so that two separately built ``T(C)`` compare
    equal; they also pass a ``sampler`` producing finitely many shapes for law
    checks when the shape type is infinite.
    """

    def __init__(self, shapes: TypeCode, positions, *, name: str = "", key=None, sampler=None):
        self.shapes = shapes
        if isinstance(positions, dict):
            table = dict(positions)
            self._positions = lambda a: _lookup_positions(table, a)
            self._table = table
        else:
            self._positions = positions
            self._table = None
        self.name = name
        self.key = key
        self.sampler = sampler
        self._hash = None

    def positions(self, a: Value) -> TypeCode:
        return self._positions(a)

    def is_finite(self) -> bool:
        if not is_finite(self.shapes):
            return False
        return all(is_finite(self.positions(a)) for a in enumerate_values(self.shapes))

    def shape_values(self, depth: int = 2) -> list:
        """All shapes, or a finite sample when the shape type is infinite."""
        if is_finite(self.shapes):
            return enumerate_values(self.shapes)
        if self.sampler is not None:
            return self.sampler(depth)
        return samples(self.shapes)

    def table(self) -> list[tuple[Value, TypeCode]]:
        return [(a, self.positions(a)) for a in enumerate_values(self.shapes)]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Container):
            return NotImplemented
        if self.key is not None or other.key is not None:
            return self.key == other.key
        if self.shapes != other.shapes:
            return False
        if not is_finite(self.shapes):
            return False
        return all(self.positions(a) == other.positions(a) for a in enumerate_values(self.shapes))

    def __hash__(self):
        if self._hash is None:
            if self.key is not None:
                self._hash = hash(self.key)
            elif is_finite(self.shapes):
                self._hash = hash((self.shapes, tuple(c for _, c in self.table())))
            else:
                self._hash = hash(self.shapes)
        return self._hash

    def __repr__(self):
        if self.name:
            return self.name
        if self.key is not None:
            return f"Container<{self.key!r}>"
        try:
            body = ", ".join(f"{a!r}↦{show_code(c)}" for a, c in self.table())
            return f"({show_code(self.shapes)} ◁ {{{body}}})"
        except NotEnumerable:
            return f"({show_code(self.shapes)} ◁ …)"


def _lookup_positions(table, a):
    try:
        return table[a]
    except KeyError:
        raise TypeMismatch(f"no positions recorded for shape {a!r}") from None


def container(shapes: TypeCode, positions, name: str = "") -> Container:
    """Build a container; ``positions`` may be a single code (constant family)."""
    if isinstance(positions, TypeCode):
        code = positions
        if is_finite(shapes):
            return Container(shapes, {a: code for a in enumerate_values(shapes)}, name=name)
        return Container(shapes, lambda a: code, name=name, key=("const", shapes, code))
    return Container(shapes, positions, name=name)


def identity_container() -> Container:
    return container(UNIT_T, UNIT_T, name="Idᶜ")


def terminal_container() -> Container:
    return container(UNIT_T, EMPTY, name="𝟙ᶜ")


def initial_container() -> Container:
    return container(EMPTY, EMPTY, name="𝟘ᶜ")


# ------------------------------------------------------------- morphisms


@dataclass(eq=False)
class ContainerMorphism:
    source: Container
    target: Container
    shape_map: Callable[[Value], Value]
    position_map: Callable[[Value, Value], Value]
    name: str = ""

    def shape(self, a):
        return self.shape_map(a)

    def pos(self, a, q):
        return self.position_map(a, q)

    def __repr__(self):
        return self.name or f"<{self.source!r} → {self.target!r}>"


def identity_morphism(c: Container) -> ContainerMorphism:
    return ContainerMorphism(c, c, lambda a: a, lambda a, q: q, name=f"id[{c!r}]")


def compose_morphisms(second: ContainerMorphism, first: ContainerMorphism) -> ContainerMorphism:
    """``second ∘ first``: shapes forward, positions backward."""
    if first.target != second.source:
        raise SourceTargetMismatch(f"cannot compose {second!r} after {first!r}")

    def pos(a, r):
        return first.position_map(a, second.position_map(first.shape_map(a), r))

    return ContainerMorphism(
        first.source, second.target, lambda a: second.shape_map(first.shape_map(a)), pos
    )


def compose_all(*ms: ContainerMorphism) -> ContainerMorphism:
    """``ms[0] ∘ ms[1] ∘ … ∘ ms[-1]``."""
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = compose_morphisms(m, out)
    return out


def check_morphism(m: ContainerMorphism, shapes: Sequence[Value] | None = None) -> list[str]:
    """Typing problems of ``m`` over the given (or all) source shapes."""
    problems = []
    for a in m.source.shape_values() if shapes is None else shapes:
        b = m.shape_map(a)
        if not check(m.target.shapes, b):
            problems.append(f"shape {a!r} ↦ {b!r} not in target shapes")
            continue
        for q in enumerate_values(m.target.positions(b)):
            p = m.position_map(a, q)
            if not check(m.source.positions(a), p):
                problems.append(f"position {q!r} at {a!r} ↦ {p!r} ill-typed")
    return problems


def morphism_difference(m, n, shapes: Iterable[Value] | None = None):
    """First shape/position where ``m`` and ``n`` disagree, or ``None``."""
    for a in m.source.shape_values() if shapes is None else shapes:
        b1, b2 = m.shape_map(a), n.shape_map(a)
        if b1 != b2:
            return {"shape": a, "left": b1, "right": b2}
        for q in enumerate_values(m.target.positions(b1)):
            p1, p2 = m.position_map(a, q), n.position_map(a, q)
            if p1 != p2:
                return {"shape": a, "position": q, "left": p1, "right": p2}
    return None


def morphisms_equal(m, n, shapes=None) -> bool:
    return morphism_difference(m, n, shapes) is None


def tabulate(m: ContainerMorphism, name: str = "") -> ContainerMorphism:
    """Freeze a morphism with finite source into tables."""
    shp, pos = {}, {}
    for a in enumerate_values(m.source.shapes):
        b = shp[a] = m.shape_map(a)
        for q in enumerate_values(m.target.positions(b)):
            pos[(a, q)] = m.position_map(a, q)
    return ContainerMorphism(
        m.source, m.target, shp.__getitem__, lambda a, q: pos[(a, q)], name=name or m.name
    )


def tabulate_on(m: ContainerMorphism, shapes: Iterable[Value]) -> ContainerMorphism:
    """Cache ``m`` on the given source shapes; other shapes fall through to ``m``."""
    shp, pos = {}, {}
    for a in shapes:
        b = shp[a] = m.shape_map(a)
        for q in enumerate_values(m.target.positions(b)):
            pos[(a, q)] = m.position_map(a, q)

    def shape(a):
        try:
            return shp[a]
        except KeyError:
            return m.shape_map(a)

    def position(a, q):
        try:
            return pos[(a, q)]
        except KeyError:
            return m.position_map(a, q)

    return ContainerMorphism(m.source, m.target, shape, position, name=m.name)


# ------------------------------------------------- products / coproducts


@dataclass
class ProductData:
    obj: Container
    fst: ContainerMorphism
    snd: ContainerMorphism
    pair: Callable[[ContainerMorphism, ContainerMorphism], ContainerMorphism]


@dataclass
class CoproductData:
    obj: Container
    inl: ContainerMorphism
    inr: ContainerMorphism
    copair: Callable[[ContainerMorphism, ContainerMorphism], ContainerMorphism]


def product(c: Container, d: Container) -> ProductData:
    shapes = Prod(c.shapes, d.shapes)
    obj = Container(
        shapes,
        lambda ab: Sum(c.positions(ab[0]), d.positions(ab[1])),
        key=("prod", c, d),
        sampler=lambda depth: list(itertools.product(c.shape_values(depth), d.shape_values(depth))),
    )
    fst = ContainerMorphism(obj, c, lambda ab: ab[0], lambda ab, p: Inl(p), name="fstᶜ")
    snd = ContainerMorphism(obj, d, lambda ab: ab[1], lambda ab, q: Inr(q), name="sndᶜ")

    def pair(m1: ContainerMorphism, m2: ContainerMorphism) -> ContainerMorphism:
        if m1.target != c or m2.target != d or m1.source != m2.source:
            raise SourceTargetMismatch("pairing needs morphisms into the factors from one source")

        def pos(x, s):
            return m1.position_map(x, s.value) if isinstance(s, Inl) else m2.position_map(x, s.value)

        return ContainerMorphism(m1.source, obj, lambda x: (m1.shape_map(x), m2.shape_map(x)), pos)

    return ProductData(obj, fst, snd, pair)


def coproduct(c: Container, d: Container) -> CoproductData:
    def positions(s):
        return c.positions(s.value) if isinstance(s, Inl) else d.positions(s.value)

    obj = Container(
        Sum(c.shapes, d.shapes),
        positions,
        key=("coprod", c, d),
        sampler=lambda depth: [Inl(a) for a in c.shape_values(depth)]
        + [Inr(b) for b in d.shape_values(depth)],
    )
    inl = ContainerMorphism(c, obj, Inl, lambda a, p: p, name="inlᶜ")
    inr = ContainerMorphism(d, obj, Inr, lambda b, q: q, name="inrᶜ")

    def copair(m1: ContainerMorphism, m2: ContainerMorphism) -> ContainerMorphism:
        if m1.source != c or m2.source != d or m1.target != m2.target:
            raise SourceTargetMismatch("copairing needs morphisms out of the summands into one target")

        def shape(s):
            return m1.shape_map(s.value) if isinstance(s, Inl) else m2.shape_map(s.value)

        def pos(s, x):
            return m1.position_map(s.value, x) if isinstance(s, Inl) else m2.position_map(s.value, x)

        return ContainerMorphism(obj, m1.target, shape, pos)

    return CoproductData(obj, inl, inr, copair)


# ------------------------------------------------------------ exponential


UNFILLED = Inl(UNIT)


@dataclass
class ExponentialData:
    obj: Container
    ev: ContainerMorphism
    curry: Callable[[ContainerMorphism], ContainerMorphism]
    uncurry: Callable[[ContainerMorphism], ContainerMorphism]
    base: Container
    result: Container


def exponential(c: Container, d: Container) -> ExponentialData:
    """``c ⇒ᶜ d``; unfilled positions are marked by ``inl ()``."""
    if not (c.is_finite() and d.is_finite()):
        raise NotEnumerable(c.shapes if not c.is_finite() else d.shapes)
    a_vals = enumerate_values(c.shapes)
    b_vals = enumerate_values(d.shapes)

    per_a = []
    for a in a_vals:
        opts = []
        for b in b_vals:
            for marks in enumerate_values(_fun(d.positions(b), Sum(UNIT_T, c.positions(a)))):
                opts.append((b, marks))
        per_a.append(opts)
    shape_vals = [FunTable(zip(a_vals, choice)) for choice in itertools.product(*per_a)]
    shapes = Listed(tuple(shape_vals), label="exp-shapes")

    def positions(phi):
        return Listed(
            tuple((a, q) for a in a_vals for q, mark in phi(a)[1].items() if mark == UNFILLED),
            label="exp-positions",
        )

    obj = Container(shapes, {phi: positions(phi) for phi in shape_vals}, name=f"({c!r} ⇒ᶜ {d!r})")
    prod = product(obj, c).obj

    def ev_pos(phi_a, q):
        phi, a = phi_a
        mark = phi(a)[1](q)
        return Inl((a, q)) if mark == UNFILLED else Inr(mark.value)

    ev = ContainerMorphism(prod, d, lambda phi_a: phi_a[0](phi_a[1])[0], ev_pos, name="ev")

    def curry(f: ContainerMorphism) -> ContainerMorphism:
        source = _left_factor(f.source)

        def shape(x):
            entries = []
            for a in a_vals:
                b = f.shape_map((x, a))
                marks = FunTable(
                    (q, UNFILLED if isinstance(f.position_map((x, a), q), Inl) else f.position_map((x, a), q))
                    for q in enumerate_values(d.positions(b))
                )
                entries.append((a, (b, marks)))
            return FunTable(entries)

        def pos(x, aq):
            a, q = aq
            return f.position_map((x, a), q).value

        return ContainerMorphism(source, obj, shape, pos, name="curry")

    def uncurry(g: ContainerMorphism) -> ContainerMorphism:
        src = product(g.source, c).obj

        def shape(xa):
            return g.shape_map(xa[0])(xa[1])[0]

        def pos(xa, q):
            x, a = xa
            mark = g.shape_map(x)(a)[1](q)
            return Inl(g.position_map(x, (a, q))) if mark == UNFILLED else Inr(mark.value)

        return ContainerMorphism(src, d, shape, pos, name="uncurry")

    return ExponentialData(obj, ev, curry, uncurry, c, d)


def _left_factor(p: Container) -> Container:
    if isinstance(p.key, tuple) and p.key and p.key[0] == "prod":
        return p.key[1]
    raise TypeMismatch("expected a product container as source")


def _fun(dom: TypeCode, cod: TypeCode) -> Fun:
    return Fun(dom, cod)


# ------------------------------------------------ composition product


def compose_containers(c: Container, d: Container) -> Container:
    """``c ∘ᶜ d``: shapes Σ a. (P a → B), positions Σ p. Q (v p)."""
    if not is_finite(c.shapes):
        raise NotEnumerable(c.shapes)
    shape_vals = []
    for a in enumerate_values(c.shapes):
        pa = c.positions(a)
        if not is_finite(pa):
            raise NotEnumerable(pa)
        for v in enumerate_values(_fun(pa, d.shapes)):
            shape_vals.append((a, v))

    def positions(av):
        a, v = av
        return Listed(
            tuple((p, q) for p in enumerate_values(c.positions(a)) for q in enumerate_values(d.positions(v(p)))),
            label="comp-positions",
        )

    return Container(
        Listed(tuple(shape_vals), label="comp-shapes"),
        {av: positions(av) for av in shape_vals},
        name=f"({c!r} ∘ᶜ {d!r})",
    )


# ------------------------------------------- (co)interpretation


class Assignment:
    """An element of Π a. P a, i.e. of the cointerpretation ⟨⟨C⟩⟩."""

    __slots__ = ("container", "fn")

    def __init__(self, container_: Container, fn):
        self.container = container_
        self.fn = fn

    def __call__(self, a):
        return self.fn(a)

    @classmethod
    def from_table(cls, c: Container, table) -> "Assignment":
        ft = table if isinstance(table, FunTable) else FunTable(table)
        return cls(c, ft)

    def tabulate(self, shapes=None) -> FunTable:
        return FunTable((a, self.fn(a)) for a in (self.container.shape_values() if shapes is None else shapes))

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        if self.container != other.container:
            return False
        if not is_finite(self.container.shapes):
            return self.fn is other.fn
        return all(self(a) == other(a) for a in enumerate_values(self.container.shapes))

    __hash__ = None

    def __repr__(self):
        if isinstance(self.fn, FunTable):
            return f"Assignment{self.fn!r}"
        try:
            return f"Assignment{self.tabulate()!r}"
        except NotEnumerable:
            return "Assignment<…>"


def assignment_difference(x: Assignment, y: Assignment, shapes=None):
    for a in x.container.shape_values() if shapes is None else shapes:
        u, v = x(a), y(a)
        if u != v:
            return {"shape": a, "left": u, "right": v}
    return None


def check_assignment(x: Assignment, shapes=None) -> bool:
    return all(
        check(x.container.positions(a), x(a))
        for a in (x.container.shape_values() if shapes is None else shapes)
    )


def cointerpret_assignments(c: Container) -> list[Assignment]:
    if not is_finite(c.shapes):
        raise NotEnumerable(c.shapes)
    return [Assignment(c, t) for t in enumerate_dependent(c.table())]


def cointerpret_morphism(m: ContainerMorphism) -> Callable[[Assignment], Assignment]:
    """``⟨⟨m⟩⟩ : ⟨⟨target⟩⟩ → ⟨⟨source⟩⟩`` (contravariant)."""

    def act(alpha: Assignment) -> Assignment:
        if alpha.container != m.target:
            raise TypeMismatch(f"assignment over {alpha.container!r}, expected {m.target!r}")
        return Assignment(m.source, lambda a: m.position_map(a, alpha(m.shape_map(a))))

    return act


def lax_product_map(c: Container, d: Container):
    """The comparison ⟨⟨C⟩⟩ + ⟨⟨D⟩⟩ → ⟨⟨C ×ᶜ D⟩⟩; ``Inl``/``Inr`` tag the summand."""
    obj = product(c, d).obj

    def act(tagged):
        h = tagged.value
        if isinstance(tagged, Inl):
            return Assignment(obj, lambda ab: Inl(h(ab[0])))
        return Assignment(obj, lambda ab: Inr(h(ab[1])))

    return act


def interpret(c: Container, x: TypeCode) -> TypeCode:
    """⟦C⟧X = Σ a. (P a → X) as a finite listed code."""
    if not c.is_finite():
        raise NotEnumerable(c.shapes)
    return Listed(
        tuple((a, v) for a in enumerate_values(c.shapes) for v in enumerate_values(_fun(c.positions(a), x))),
        label="interp",
    )


def interpret_morphism(m: ContainerMorphism, x: TypeCode):
    """⟦m⟧_X (a, v) = (f a, v ∘ g_a)."""

    def act(av):
        a, v = av
        b = m.shape_map(a)
        return (b, FunTable((q, v(m.position_map(a, q))) for q in enumerate_values(m.target.positions(b))))

    return act


# --------------------------------------------------- enumeration oracle


DEFAULT_BUDGET = 10_000


def count_morphisms(c: Container, d: Container, target_shapes=None) -> int:
    bs = enumerate_values(d.shapes) if target_shapes is None else list(target_shapes)
    total = 1
    for a in enumerate_values(c.shapes):
        pa = cardinality(c.positions(a))
        per = 0
        for b in bs:
            qb = cardinality(d.positions(b))
            if pa == INFINITE or qb == INFINITE:
                raise NotEnumerable(c.positions(a))
            per += pa**qb
        total *= per
    return total


def morphisms_between(
    c: Container, d: Container, budget: int | None = DEFAULT_BUDGET, target_shapes=None
) -> list[ContainerMorphism]:
    """Every morphism ``c → d``; ``target_shapes`` restricts the shape maps."""
    if not is_finite(c.shapes):
        raise NotEnumerable(c.shapes)
    n = count_morphisms(c, d, target_shapes)
    if budget is not None and n > budget:
        raise Budget(budget, f"{n} morphisms {c!r} → {d!r}")
    a_vals = enumerate_values(c.shapes)
    bs = enumerate_values(d.shapes) if target_shapes is None else list(target_shapes)

    per_a = []
    for a in a_vals:
        opts = []
        for b in bs:
            qs = enumerate_values(d.positions(b))
            ps = enumerate_values(c.positions(a))
            for choice in itertools.product(ps, repeat=len(qs)):
                opts.append((b, dict(zip(qs, choice))))
        per_a.append(opts)

    out = []
    for combo in itertools.product(*per_a):
        shp = {a: b for a, (b, _) in zip(a_vals, combo)}
        pos = {a: tbl for a, (_, tbl) in zip(a_vals, combo)}
        out.append(
            ContainerMorphism(c, d, shp.__getitem__, lambda a, q, pos=pos: pos[a][q])
        )
    return out


# ------------------------------------------------------------- catalog


def small_codes():
    return [EMPTY, UNIT_T, BOOL]


def catalog(shape_codes=None, position_codes=None) -> list[Container]:
    """All containers with the given shape codes and per-shape position codes."""
    shape_codes = small_codes() if shape_codes is None else shape_codes
    position_codes = small_codes() if position_codes is None else position_codes
    out = []
    for s in shape_codes:
        vals = enumerate_values(s)
        for choice in itertools.product(position_codes, repeat=len(vals)):
            out.append(Container(s, dict(zip(vals, choice))))
    return out


__all__ = [
    "Assignment",
    "Container",
    "ContainerMorphism",
    "SourceTargetMismatch",
    "UNIT",
    "assignment_difference",
    "catalog",
    "check_morphism",
    "cointerpret_assignments",
    "cointerpret_morphism",
    "compose_all",
    "compose_containers",
    "compose_morphisms",
    "container",
    "coproduct",
    "count_morphisms",
    "exponential",
    "identity_container",
    "identity_morphism",
    "initial_container",
    "interpret",
    "interpret_morphism",
    "lax_product_map",
    "morphism_difference",
    "morphisms_between",
    "morphisms_equal",
    "product",
    "tabulate",
    "tabulate_on",
    "terminal_container",
]
