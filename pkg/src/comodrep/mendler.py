"""Weak Mendler-style algebras and the container monads they induce.

A family ``P : A → U`` is represented by a :class:`Container` ``A◁P``; a
family map ``h : Π a. P a → Q a`` by a Python callable ``h(a, p)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .container import Assignment, Container, ContainerMorphism
from .report import SuiteReport
from .representation import MonadOnContainers
from .universe import (
    UNIT,
    UNIT_T,
    Budget,
    Derived,
    FunTable,
    Inl,
    Inr,
    NotEnumerable,
    Sum,
    TypeCode,
    check,
    enumerate_dependent,
    enumerate_values,
    is_finite,
    sort_key,
)


class AlgebraLawFailure(Exception):
    def __init__(self, diagram, report=None):
        super().__init__(f"weak Mendler algebra fails diagram {diagram!r}")
        self.diagram = diagram
        self.report = report


# ------------------------------------------------------------ monads on types


class MonadOnTypes:
    """``(M, η, (−)†)`` on the value universe.

    ``code(X)`` is the code of ``M X``; ``sample(X, depth)`` lists values of
    ``M X`` (all of them when finite).
    """

    name = "M"

    def code(self, x: TypeCode) -> TypeCode:
        raise NotImplementedError

    def unit(self, v):
        raise NotImplementedError

    def bind(self, f: Callable, m):
        raise NotImplementedError

    def fmap(self, f: Callable, m):
        return self.bind(lambda v: self.unit(f(v)), m)

    def sample(self, x: TypeCode, depth: int = 2) -> list:
        return enumerate_values(self.code(x))

    def __repr__(self):
        return f"<monad on types {self.name}>"


class IdentityTypeMonad(MonadOnTypes):
    name = "id"

    def code(self, x):
        return x

    def unit(self, v):
        return v

    def bind(self, f, m):
        return f(m)


class TrivialTypeMonad(MonadOnTypes):
    """``M X = 𝟙``."""

    name = "trivial"

    def code(self, x):
        return UNIT_T

    def unit(self, v):
        return UNIT

    def bind(self, f, m):
        return UNIT


class ExceptionTypeMonad(MonadOnTypes):
    """``M X = X + 𝟙``; ``inr ()`` is the raised exception."""

    name = "exc"

    def code(self, x):
        return Sum(x, UNIT_T)

    def unit(self, v):
        return Inl(v)

    def bind(self, f, m):
        return f(m.value) if isinstance(m, Inl) else m

    def sample(self, x, depth=2):
        try:
            return enumerate_values(self.code(x))
        except NotEnumerable:
            from .universe import samples

            return [Inl(v) for v in samples(x)] + [Inr(UNIT)]


RAISED = Inr(UNIT)


# ---------------------------------------------------------- finite subsets


class FiniteSubset:
    """A finite subset in canonical form: sorted, duplicate-free."""

    __slots__ = ("items", "_hash")

    def __init__(self, values=()):
        seen = {}
        for v in values:
            seen.setdefault((type(v) is bool, v), v)
        self.items = tuple(sorted(seen.values(), key=sort_key))
        self._hash = hash(("Pf", self.items))

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __contains__(self, v):
        return any(v == w and type(v) is type(w) for w in self.items)

    def __eq__(self, other):
        return isinstance(other, FiniteSubset) and self.items == other.items

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (len(self.items), tuple(sort_key(v) for v in self.items))

    def __repr__(self):
        return "{" + ", ".join(repr(v) for v in self.items) + "}"


def singleton(v) -> FiniteSubset:
    return FiniteSubset((v,))


def union(*sets: FiniteSubset) -> FiniteSubset:
    return FiniteSubset(itertools.chain.from_iterable(sets))


def kleisli_extend_pfin(f: Callable):
    """``f‡ S = ⋃_{a∈S} f a``."""
    return lambda s: union(*(f(a) for a in s))


def restrict(h, s: FiniteSubset) -> FunTable:
    """The table of ``h`` on ``S``."""
    return FunTable(((a, h(a)) for a in s), presorted=True)


class PfinCode(Derived):
    """𝒫_f(X): subsets ordered by size, then lexicographically."""

    def __init__(self, base: TypeCode):
        self.base = base

    def ident(self):
        return ("Pf", self.base)

    def values(self):
        if not is_finite(self.base):
            raise NotEnumerable(self)
        vals = enumerate_values(self.base)
        return [FiniteSubset(c) for n in range(len(vals) + 1) for c in itertools.combinations(vals, n)]

    def size(self):
        if not is_finite(self.base):
            from .universe import INFINITE

            return INFINITE
        return 2 ** len(enumerate_values(self.base))

    def contains(self, v):
        return isinstance(v, FiniteSubset) and all(check(self.base, a) for a in v)

    def __repr__(self):
        return f"Pf({self.base!r})"


class PfinTypeMonad(MonadOnTypes):
    name = "pfin"

    def code(self, x):
        return PfinCode(x)

    def unit(self, v):
        return singleton(v)

    def bind(self, f, m):
        return kleisli_extend_pfin(f)(m)


class DepProduct(Derived):
    """Π over an explicit finite index of (key, code) pairs, as choice tables."""

    def __init__(self, index, tag=""):
        self.index = tuple(index)
        self.tag = tag

    def ident(self):
        return ("Pi", self.index)

    def values(self):
        return enumerate_dependent(self.index)

    def size(self):
        n = 1
        from .universe import cardinality

        for _, c in self.index:
            n *= cardinality(c)
        return n

    def contains(self, v):
        return (
            isinstance(v, FunTable)
            and len(v) == len(self.index)
            and all(k in v and check(c, v(k)) for k, c in self.index)
        )

    def __repr__(self):
        return f"Π{self.tag}[{', '.join(f'{k!r}:{c!r}' for k, c in self.index)}]"


# ------------------------------------------------------------ the algebra


@dataclass
class WeakMendlerAlgebra:
    """Extension ``P ↦ P⋆``, action ``h ↦ [h]⋆`` and lax witnesses ``i``, ``j``.

    ``extend(P)(m)`` is the code ``P⋆ m``; ``action(h, P, Q)(m, x)`` applies
    ``[h]⋆`` at ``m``; ``i(P, a, x)`` and ``j(Q, f, m, x)`` are the witnesses.
    ``cook``, when present, maps an assignment ``h`` over ``A◁P`` and a shape
    ``m`` to a value of ``P⋆ m``.
    """

    name: str
    monad: MonadOnTypes
    extend: Callable
    action: Callable
    i: Callable
    j: Callable
    cook: Callable | None = None

    def family(self, p: Container) -> Container:
        """``P⋆`` as a container over ``M A``."""
        ext = self.extend(p)
        return Container(self.monad.code(p.shapes), ext, key=(self.name + "⋆", p))

    def after(self, q: Container, f: Callable, a_code: TypeCode) -> Container:
        """The family ``Q⋆ ∘ f`` over ``A``."""
        ext = self.extend(q)
        return Container(a_code, lambda a: ext(f(a)), key=(self.name + "⋆∘", q, _fn_key(f, a_code)))


def _fn_key(f, a_code):
    try:
        return FunTable((a, f(a)) for a in enumerate_values(a_code))
    except NotEnumerable:
        return id(f)


# ------------------------------------------------------- induced monad


class InducedMonad(MonadOnContainers):
    """``T(A◁P) = M A ◁ P⋆`` with ``η = ⟨η^M ◁ i⟩`` and ``(f◁g)† = ⟨f† ◁ [g]⋆ ∘ j⟩``."""

    def __init__(self, alg: WeakMendlerAlgebra, sample_depth: int = 2):
        self.alg = alg
        self.name = alg.name
        self.has_cook = alg.cook is not None
        self._depth = sample_depth

    def T(self, c):
        alg = self.alg
        ext = alg.extend(c)
        mon = alg.monad
        return Container(
            mon.code(c.shapes),
            ext,
            key=(self.key, c),
            sampler=lambda d: mon.sample(c.shapes, d),
        )

    def eta(self, c):
        alg = self.alg
        return ContainerMorphism(
            c, self.T(c), alg.monad.unit, lambda a, x: alg.i(c, a, x), name="η"
        )

    def bind(self, m):
        alg = self.alg
        c = m.source
        d = self.base(m.target)
        f = m.shape_map
        if is_finite(c.shapes):
            f = KleisliFn(FunTable((a, m.shape_map(a)) for a in enumerate_values(c.shapes)))
        qf = alg.after(d, f, c.shapes)
        act = alg.action(m.position_map, qf, c)

        def pos(mm, x):
            return act(mm, alg.j(d, f, mm, x))

        return ContainerMorphism(self.T(c), m.target, lambda mm: alg.monad.bind(f, mm), pos, name="ext")

    def cook(self, c):
        if self.alg.cook is None:
            raise NotImplementedError(f"{self.name} has no comodule structure")
        tc = self.T(c)
        cook = self.alg.cook

        def act(h):
            return Assignment(tc, lambda m: cook(c, h, m))

        return act

    def sample_shapes(self, c, depth=2):
        return self.alg.monad.sample(c.shapes, depth)


def induced_monad(alg: WeakMendlerAlgebra, verify: bool = False, families=None) -> InducedMonad:
    if verify:
        rep = check_coherence(alg, families=families)
        if not rep.ok:
            raise AlgebraLawFailure(next(iter(rep.counterexamples)), rep)
    return InducedMonad(alg)


# ---------------------------------------------------------- instances


def identity_algebra() -> WeakMendlerAlgebra:
    return WeakMendlerAlgebra(
        name="identity",
        monad=IdentityTypeMonad(),
        extend=lambda p: p.positions,
        action=lambda h, p, q: h,
        i=lambda p, a, x: x,
        j=lambda q, f, m, x: x,
        cook=lambda c, h, a: h(a),
    )


def _pi_over(p: Container, keys, tag=""):
    return DepProduct([(a, p.positions(a)) for a in keys], tag)


def pfin_algebra() -> WeakMendlerAlgebra:
    """𝒫_f with ``P⋆ S = Π_{a∈S} P a``; cook is restriction."""

    def extend(p):
        return lambda s: _pi_over(p, s)

    def action(h, p, q):
        return lambda s, k: FunTable(((a, h(a, k(a))) for a in s), presorted=True)

    def i(p, a, k):
        return k(a)

    def j(q, f, s, k):
        return FunTable(((a, restrict(k, f(a))) for a in s), presorted=True)

    def cook(c, h, s):
        return restrict(h, s)

    return WeakMendlerAlgebra("pfin", PfinTypeMonad(), extend, action, i, j, cook)


def self_rep_instance() -> WeakMendlerAlgebra:
    """``M X = 𝟙`` with ``P⋆ ⋆ = Π a. P a``; cook stores ``h`` at the unique shape."""

    def extend(p):
        return lambda _: _pi_over(p, enumerate_values(p.shapes), "all")

    def action(h, p, q):
        return lambda _, k: FunTable((a, h(a, k(a))) for a in enumerate_values(p.shapes))

    def i(p, a, k):
        return k(a)

    def j(q, f, _, k):
        # Q⋆(f† ⋆) = Π_b Q b and (Q⋆∘f)⋆ ⋆ = Π_a Π_b Q b
        return FunTable((a, k) for a in _domain_of(f))

    def cook(c, h, _):
        return FunTable((a, h(a)) for a in enumerate_values(c.shapes))

    alg = WeakMendlerAlgebra("trivial", TrivialTypeMonad(), extend, action, i, j, cook)
    return alg


def _domain_of(f):
    dom = getattr(f, "domain", None)
    if dom is None:
        raise NotEnumerable(f)
    return dom


class KleisliFn:
    """A shape-level Kleisli function ``A → M B`` carrying its finite domain."""

    __slots__ = ("table", "domain")

    def __init__(self, table: FunTable):
        self.table = table
        self.domain = table.keys()

    def __call__(self, a):
        return self.table(a)

    def __repr__(self):
        return repr(self.table)


def exception_instance() -> WeakMendlerAlgebra:
    """``M X = X + 𝟙``: ``P⋆(inl a) = P a`` and ``P⋆(inr ⋆) = 𝟙``."""

    def extend(p):
        return lambda m: p.positions(m.value) if isinstance(m, Inl) else UNIT_T

    def action(h, p, q):
        return lambda m, x: h(m.value, x) if isinstance(m, Inl) else UNIT

    def i(p, a, x):
        return x

    def j(q, f, m, x):
        return x if isinstance(m, Inl) else UNIT

    def cook(c, h, m):
        return h(m.value) if isinstance(m, Inl) else UNIT

    return WeakMendlerAlgebra("exc", ExceptionTypeMonad(), extend, action, i, j, cook)


# ------------------------------------------------------ finite support


def finsupp_cook(c: Container):
    """``h ↦ (S ↦ h↾S)`` as an assignment over ``T(C)``."""
    monad = InducedMonad(pfin_algebra())
    return monad.cook(c)


def check_finite_support(r, h: Assignment, h2: Assignment, b) -> bool:
    """If ``h`` and ``h2`` agree on ``tree_F b`` the outputs at ``b`` agree."""
    from .representation import evaluate_rep

    support = r.morphism.shape_map(b)
    if any(h(a) != h2(a) for a in support):
        return True
    return evaluate_rep(r, h, b) == evaluate_rep(r, h2, b)


# ------------------------------------------------------ coherence suite


def default_shape_codes():
    from .universe import BOOL, EMPTY, Fin

    return [EMPTY, UNIT_T, BOOL, Fin(3)]


def families_over(code: TypeCode, position_codes=None) -> list[Container]:
    from .universe import BOOL, EMPTY

    position_codes = [EMPTY, UNIT_T, BOOL] if position_codes is None else position_codes
    vals = enumerate_values(code)
    return [Container(code, dict(zip(vals, ch))) for ch in itertools.product(position_codes, repeat=len(vals))]


def family_maps(p: Container, q: Container, budget=None) -> list[Callable]:
    """All ``h : Π a. P a → Q a`` as callables ``h(a, x)``."""
    per = []
    keys = []
    for a in enumerate_values(p.shapes):
        xs = enumerate_values(p.positions(a))
        ys = enumerate_values(q.positions(a))
        keys.append((a, xs))
        per.append(list(itertools.product(ys, repeat=len(xs))))
    total = 1
    for opts in per:
        total *= len(opts)
    if budget is not None and total > budget:
        raise Budget(budget, f"{total} family maps")
    out = []
    for choice in itertools.product(*per):
        table = {}
        for (a, xs), ys in zip(keys, choice):
            for x, y in zip(xs, ys):
                table[(a, x)] = y
        out.append(_FamilyMap(table))
    return out


class _FamilyMap:
    __slots__ = ("table",)

    def __init__(self, table):
        self.table = table

    def __call__(self, a, x):
        return self.table[(a, x)]

    def __repr__(self):
        return repr(FunTable((k, v) for k, v in self.table.items()))


def kleisli_fns(monad: MonadOnTypes, a_code, b_code, depth=1, budget=None) -> list[KleisliFn]:
    a_vals = enumerate_values(a_code)
    mb = monad.sample(b_code, depth)
    total = len(mb) ** len(a_vals)
    if budget is not None and total > budget:
        raise Budget(budget, f"{total} Kleisli functions")
    return [KleisliFn(FunTable(zip(a_vals, ch))) for ch in itertools.product(mb, repeat=len(a_vals))]


def stride_sample(xs: list, n: int) -> list:
    """``n`` evenly spaced members of ``xs``, always including the first and last."""
    if len(xs) <= n:
        return list(xs)
    if n == 1:
        return [xs[0]]
    idx = sorted({round(k * (len(xs) - 1) / (n - 1)) for k in range(n)})
    return [xs[i] for i in idx]


def _ext_values(alg, p, m):
    return enumerate_values(alg.extend(p)(m))


def check_coherence(
    alg: WeakMendlerAlgebra,
    shape_codes=None,
    families=None,
    depth: int = 1,
    budget: int | None = 300_000,
    max_kleisli: int | None = 32,
) -> SuiteReport:
    """Functoriality, naturality of i and j, and the three coherence diagrams.

    Every diagram is checked pointwise on all elements of the relevant ``P⋆ m``;
    families range over ``shape_codes`` with positions in {Empty, Unit, Bool}.
    Kleisli functions ``A → M B`` are all used when there are at most
    ``max_kleisli`` of them and otherwise sampled with an even stride (noted in
    the report).  Each diagram stops at ``budget`` cases and records the rest
    as skipped.
    """
    rep = SuiteReport(f"mendler-coherence:{alg.name}")
    mon = alg.monad
    codes = default_shape_codes() if shape_codes is None else shape_codes
    fams = {c: families_over(c) for c in codes} if families is None else families
    counters = {}

    def case(diagram):
        n = counters.get(diagram, 0)
        counters[diagram] = n + 1
        if budget is not None and n >= budget:
            rep.skip(diagram, 1, "budget")
            return False
        return True

    kfns = {}
    ext_cache = {}

    def _ext_values(alg, p, m):
        key = (p, m)
        hit = ext_cache.get(key)
        if hit is None:
            hit = ext_cache[key] = enumerate_values(alg.extend(p)(m))
        return hit

    def kls(a, b):
        key = (a, b)
        if key not in kfns:
            full = kleisli_fns(mon, a, b, depth)
            if max_kleisli is not None and len(full) > max_kleisli:
                kfns[key] = stride_sample(full, max_kleisli)
                rep.notes.append(f"Kleisli functions {a!r} → M {b!r}: {max_kleisli} of {len(full)} (even stride)")
            else:
                kfns[key] = full
        return kfns[key]

    for a_code in codes:
        ms = mon.sample(a_code, depth)
        a_vals = enumerate_values(a_code)
        fa = fams[a_code]
        # functoriality (identity) and naturality of i
        for p in fa:
            ident = alg.action(lambda a, x: x, p, p)
            for m in ms:
                for x in _ext_values(alg, p, m):
                    if case("[id]⋆ = id"):
                        y = ident(m, x)
                        rep.record("[id]⋆ = id", y == x, lambda: {"P": p, "m": m, "x": x, "got": y})
            for p2 in fa:
                hs = family_maps(p, p2)
                for h in hs:
                    act = alg.action(h, p, p2)
                    for a in a_vals:
                        for x in _ext_values(alg, p, mon.unit(a)):
                            if case("i natural"):
                                lhs = h(a, alg.i(p, a, x))
                                rhs = alg.i(p2, a, act(mon.unit(a), x))
                                rep.record(
                                    "i natural", lhs == rhs, lambda: {"P": p, "P'": p2, "a": a, "x": x, "left": lhs, "right": rhs}
                                )
                # functoriality (composition), with a third family of the same shape
                for p3 in fa:
                    ks = family_maps(p2, p3)
                    for h in hs:
                        for k in ks:
                            comp = alg.action(lambda a, x, h=h, k=k: k(a, h(a, x)), p, p3)
                            ah, ak = alg.action(h, p, p2), alg.action(k, p2, p3)
                            for m in ms:
                                for x in _ext_values(alg, p, m):
                                    if case("[k∘h]⋆ = [k]⋆∘[h]⋆"):
                                        lhs, rhs = comp(m, x), ak(m, ah(m, x))
                                        rep.record(
                                            "[k∘h]⋆ = [k]⋆∘[h]⋆",
                                            lhs == rhs,
                                            lambda: {"P": p, "m": m, "x": x, "left": lhs, "right": rhs},
                                        )
            # coherence of i with j along η
            eta_fn = KleisliFn(FunTable((a, mon.unit(a)) for a in a_vals))
            pe = alg.after(p, eta_fn, a_code)
            ai = alg.action(lambda a, x, p=p: alg.i(p, a, x), pe, p)
            for m in ms:
                for x in _ext_values(alg, p, mon.bind(eta_fn, m)):
                    if case("[i]⋆ ∘ j(P,η) = id"):
                        y = ai(m, alg.j(p, eta_fn, m, x))
                        rep.record("[i]⋆ ∘ j(P,η) = id", y == x, lambda: {"P": p, "m": m, "x": x, "got": y})

        for b_code in codes:
            fb = fams[b_code]
            for f in kls(a_code, b_code):
                # coherence of j with i along η
                for q in fb:
                    qf = alg.after(q, f, a_code)
                    for a in a_vals:
                        for x in _ext_values(alg, q, mon.bind(f, mon.unit(a))):
                            if case("i ∘ j(Q,f) at η = id"):
                                y = alg.i(qf, a, alg.j(q, f, mon.unit(a), x))
                                rep.record(
                                    "i ∘ j(Q,f) at η = id", y == x, lambda: {"Q": q, "f": f, "a": a, "x": x, "got": y}
                                )
                    # naturality of j
                    for q2 in fb:
                        q2f = alg.after(q2, f, a_code)
                        ks = family_maps(q, q2)
                        for k in ks:
                            ak = alg.action(k, q, q2)
                            lifted = alg.action(lambda a, y, ak=ak: ak(f(a), y), qf, q2f)
                            for m in ms:
                                fm = mon.bind(f, m)
                                for x in _ext_values(alg, q, fm):
                                    if case("j natural"):
                                        lhs = lifted(m, alg.j(q, f, m, x))
                                        rhs = alg.j(q2, f, m, ak(fm, x))
                                        rep.record(
                                            "j natural",
                                            lhs == rhs,
                                            lambda: {"Q": q, "Q'": q2, "f": f, "m": m, "x": x, "left": lhs, "right": rhs},
                                        )
                # coherence of j with Kleisli composition
                for c_code in codes:
                    for g in kls(b_code, c_code):
                        gf = KleisliFn(FunTable((a, mon.bind(g, f(a))) for a in a_vals))
                        for r in fams[c_code]:
                            rg = alg.after(r, g, b_code)
                            rgf = alg.after(r, gf, a_code)
                            rg_f = alg.after(rg, f, a_code)
                            lift = alg.action(lambda a, y, r=r, g=g: alg.j(r, g, f(a), y), rgf, rg_f)
                            for m in ms:
                                fm = mon.bind(f, m)
                                for x in _ext_values(alg, r, mon.bind(gf, m)):
                                    if case("j coherent with composition"):
                                        # a broken j can hand itself an ill-shaped trace; keep the inputs
                                        try:
                                            lhs = lift(m, alg.j(r, gf, m, x))
                                            rhs = alg.j(rg, f, m, alg.j(r, g, fm, x))
                                            same = lhs == rhs
                                        except (AttributeError, TypeError, KeyError, ValueError) as exc:
                                            lhs, rhs, same = "?", f"crashed: {type(exc).__name__}: {exc}", False
                                        rep.record(
                                            "j coherent with composition",
                                            same,
                                            lambda: {"R": r, "f": f, "g": g, "m": m, "x": x, "left": lhs, "right": rhs},
                                        )
    return rep


__all__ = [
    "AlgebraLawFailure",
    "DepProduct",
    "ExceptionTypeMonad",
    "FiniteSubset",
    "IdentityTypeMonad",
    "InducedMonad",
    "KleisliFn",
    "MonadOnTypes",
    "PfinCode",
    "PfinTypeMonad",
    "RAISED",
    "TrivialTypeMonad",
    "WeakMendlerAlgebra",
    "check_coherence",
    "check_finite_support",
    "exception_instance",
    "families_over",
    "family_maps",
    "finsupp_cook",
    "identity_algebra",
    "induced_monad",
    "kleisli_extend_pfin",
    "kleisli_fns",
    "pfin_algebra",
    "restrict",
    "self_rep_instance",
    "singleton",
    "union",
]
