"""Input/output effects: computations, runners, traces and stateful comodules.

Three comodules live here.  ``stateful_cook_single`` runs an IO computation and
records its trace, querying the argument once at the end.  ``stateful_cook_tree``
walks interleaved trees of queries and IO operations.  ``pure_cook_S`` walks a
plain dialogue tree with an argument whose answers live in an ambient monad.

Values of the ambient state monad are tables ``r ↦ (r', x)`` over the finite
state code, so equality of stateful results is equality at every state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .container import Assignment, Container, ContainerMorphism
from .mendler import (
    ExceptionTypeMonad,
    IdentityTypeMonad,
    InducedMonad,
    MonadOnTypes,
    WeakMendlerAlgebra,
)
from .report import SuiteReport
from .representation import MonadOnContainers, Representation
from .treemonad import LEAF, STOP, Leaf, Node, Step, Stop, TreeMonad, enumerate_trees
from .universe import (
    BOOL,
    UNIT,
    UNIT_T,
    Budget,
    Derived,
    Fin,
    Fun,
    FunTable,
    NotEnumerable,
    Prod,
    TypeCode,
    TypeMismatch,
    cardinality,
    check,
    enumerate_values,
    samples,
    sort_key,
)


class MalformedTrace(TypeMismatch):
    pass


class NotAMonadMorphism(Exception):
    pass


# ------------------------------------------------------------ computations


class Ret:
    __slots__ = ("value", "_hash")

    def __init__(self, value):
        self.value = value
        self._hash = hash(("ret", value))

    def __eq__(self, other):
        return self is other or (isinstance(other, Ret) and self._hash == other._hash and self.value == other.value)

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (0, sort_key(self.value))

    def __repr__(self):
        return f"ret({self.value!r})"


class Inp:
    """Read an input ``i`` and continue with ``kids(i)``; also the input node of IO-trees."""

    __slots__ = ("kids", "_hash")

    def __init__(self, kids):
        self.kids = kids if isinstance(kids, FunTable) else FunTable(kids)
        self._hash = hash(("inp", self.kids))

    def child(self, i):
        return self.kids(i)

    def __eq__(self, other):
        return self is other or (isinstance(other, Inp) and self._hash == other._hash and self.kids == other.kids)

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (2, sort_key(self.kids))

    def __repr__(self):
        body = ", ".join(f"{i!r}: {c!r}" for i, c in self.kids.items())
        return f"inp({{{body}}})"


class Out:
    __slots__ = ("o", "rest", "_hash")

    def __init__(self, o, rest):
        self.o = o
        self.rest = rest
        self._hash = hash(("out", o, rest))

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Out) and self._hash == other._hash and self.o == other.o and self.rest == other.rest
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (3, sort_key(self.o), sort_key(self.rest))

    def __repr__(self):
        return f"out({self.o!r}, {self.rest!r})"


@dataclass(frozen=True)
class IOSignature:
    """Input and output codes of one scenario."""

    inputs: TypeCode = BOOL
    outputs: TypeCode = BOOL

    def input_values(self):
        return enumerate_values(self.inputs)

    def output_values(self):
        return enumerate_values(self.outputs)


def io_bind(f: Callable, c):
    if isinstance(c, Ret):
        return f(c.value)
    if isinstance(c, Inp):
        return Inp(FunTable(((i, io_bind(f, k)) for i, k in c.kids.items()), presorted=True))
    if isinstance(c, Out):
        return Out(c.o, io_bind(f, c.rest))
    raise TypeMismatch(f"{c!r} is not an IO computation")


def io_depth(c) -> int:
    if isinstance(c, Ret):
        return 0
    if isinstance(c, Inp):
        return 1 + max((io_depth(k) for k in c.kids.values()), default=0)
    return 1 + io_depth(c.rest)


def is_io(c, a_code: TypeCode, sig: IOSignature) -> bool:
    if isinstance(c, Ret):
        return check(a_code, c.value)
    if isinstance(c, Inp):
        return c.kids.keys() == sig.input_values() and all(is_io(k, a_code, sig) for k in c.kids.values())
    if isinstance(c, Out):
        return check(sig.outputs, c.o) and is_io(c.rest, a_code, sig)
    return False


def count_io(n_values: int, sig: IOSignature, depth: int) -> int:
    ni, no = len(sig.input_values()), len(sig.output_values())
    level = n_values
    for _ in range(depth):
        level = n_values + level**ni + no * level
    return level


def enumerate_io(values, sig: IOSignature, depth: int, budget: int | None = 100_000) -> list:
    """All computations of depth ``≤ depth`` returning one of ``values``: ret, then inp, then out."""
    values = list(values)
    total = count_io(len(values), sig, depth)
    if budget is not None and total > budget:
        raise Budget(budget, f"{total} IO computations of depth ≤ {depth}")
    ins, outs = sig.input_values(), sig.output_values()
    rets = [Ret(v) for v in values]
    level = list(rets)
    for _ in range(depth):
        nxt = list(rets)
        nxt += [Inp(FunTable(zip(ins, ks), presorted=True)) for ks in itertools.product(level, repeat=len(ins))]
        nxt += [Out(o, k) for o in outs for k in level]
        level = nxt
    return level


class IOCode(Derived):
    """``IO A``; infinite as soon as there is an operation, so it is sampled by depth."""

    def __init__(self, a_code: TypeCode, sig: IOSignature):
        self.a_code = a_code
        self.sig = sig

    def ident(self):
        return ("IO", self.a_code, self.sig)

    def values(self):
        if cardinality(self.sig.inputs) == 0 and cardinality(self.sig.outputs) == 0:
            return [Ret(v) for v in enumerate_values(self.a_code)]
        raise NotEnumerable(self)

    def contains(self, v):
        return is_io(v, self.a_code, self.sig)

    def __repr__(self):
        return f"IO({self.a_code!r})"


class IOTypeMonad(MonadOnTypes):
    def __init__(self, sig: IOSignature | None = None):
        self.sig = IOSignature() if sig is None else sig
        self.name = "io"

    def code(self, x):
        return IOCode(x, self.sig)

    def unit(self, v):
        return Ret(v)

    def bind(self, f, m):
        return io_bind(f, m)

    def sample(self, x, depth=2):
        if isinstance(x, IOCode):
            # IO (IO A): inner computations sampled to the same depth
            return enumerate_io(IOTypeMonad(x.sig).sample(x.a_code, depth), self.sig, depth)
        return enumerate_io(samples(x), self.sig, depth)


# ---------------------------------------------------------------- runners


@dataclass(frozen=True)
class Runner:
    """A state machine with co-operations ``co_inp : R → R × I`` and ``co_out : R × O → R``."""

    state: TypeCode
    co_inp: Callable
    co_out: Callable
    init: object = None
    name: str = ""

    def __repr__(self):
        return self.name or "<runner>"


def runner_from_tables(state: TypeCode, co_inp: dict, co_out: dict, init=None, name: str = "") -> Runner:
    inp_t, out_t = dict(co_inp), dict(co_out)
    return Runner(state, inp_t.__getitem__, lambda r, o: out_t[(r, o)], init, name)


def runner_tables(rn: Runner, sig: IOSignature) -> tuple[dict, dict]:
    rs = enumerate_values(rn.state)
    return (
        {r: rn.co_inp(r) for r in rs},
        {(r, o): rn.co_out(r, o) for r in rs for o in sig.output_values()},
    )


def count_runners(state: TypeCode, sig: IOSignature) -> int:
    nr, ni, no = cardinality(state), cardinality(sig.inputs), cardinality(sig.outputs)
    return (nr * ni) ** nr * nr ** (nr * no)


def enumerate_runners(state: TypeCode, sig: IOSignature, budget: int | None = 10_000) -> list[Runner]:
    total = count_runners(state, sig)
    if budget is not None and total > budget:
        raise Budget(budget, f"{total} runners")
    rs, ins, outs = enumerate_values(state), sig.input_values(), sig.output_values()
    ro = [(r, o) for r in rs for o in outs]
    out = []
    for ci in itertools.product([(r, i) for r in rs for i in ins], repeat=len(rs)):
        for co in itertools.product(rs, repeat=len(ro)):
            out.append(runner_from_tables(state, dict(zip(rs, ci)), dict(zip(ro, co))))
    return out


def echo_runner(code: TypeCode = BOOL) -> Runner:
    """``R = I = O``: reading returns the state, writing replaces it."""
    return Runner(code, lambda r: (r, r), lambda r, o: o, enumerate_values(code)[0], "echo")


def counter_runner(n: int = 3) -> Runner:
    """``R = Fin n`` over Bool IO: reading yields the parity and ticks, writing adds ``1 + o``."""
    return Runner(
        Fin(n),
        lambda r: ((r + 1) % n, r % 2 == 1),
        lambda r, o: (r + 1 + int(o)) % n,
        0,
        f"counter{n}",
    )


def stubborn_runner() -> Runner:
    """``R = 𝟙``: always reads ``False`` and ignores writes."""
    return Runner(UNIT_T, lambda r: (r, False), lambda r, o: r, UNIT, "stubborn")


def runner_zoo() -> list[Runner]:
    return [stubborn_runner(), echo_runner(), counter_runner(2), counter_runner(3)]


def run(rn, c, r):
    """Thread ``r`` through ``c``; returns ``(final state, result)``."""
    while True:
        if isinstance(c, Ret):
            return (r, c.value)
        if isinstance(c, Inp):
            r, i = rn.co_inp(r)
            c = c.kids(i)
        elif isinstance(c, Out):
            r = rn.co_out(r, c.o)
            c = c.rest
        else:
            raise TypeMismatch(f"{c!r} is not an IO computation")


# ------------------------------------------------------- the state monad


class StateTypeMonad(MonadOnTypes):
    """``St_R X = R → R × X`` with values tabulated over ``R``."""

    def __init__(self, state: TypeCode):
        self.state = state
        self.states = enumerate_values(state)
        self.name = f"state[{state!r}]"

    def code(self, x):
        return Fun(self.state, Prod(self.state, x))

    def unit(self, v):
        return FunTable(((r, (r, v)) for r in self.states), presorted=True)

    def bind(self, f, m):
        out = []
        for r in self.states:
            r1, x = m(r)
            out.append((r, f(x)(r1)))
        return FunTable(out, presorted=True)

    def fmap(self, f, m):
        return FunTable(((r, (m(r)[0], f(m(r)[1]))) for r in self.states), presorted=True)


def rho(rn: Runner, c):
    """The run map as a state-monad value."""
    return FunTable(((r, run(rn, c, r)) for r in enumerate_values(rn.state)), presorted=True)


# ------------------------------------------------ exhaustive runner search


class _Need(Exception):
    def __init__(self, key):
        self.key = key


class _PartialRunner:
    """A runner defined on part of its tables; reading elsewhere raises :class:`_Need`."""

    __slots__ = ("table",)

    def __init__(self, table):
        self.table = table

    def co_inp(self, r):
        try:
            return self.table[("inp", r)]
        except KeyError:
            raise _Need(("inp", r)) from None

    def co_out(self, r, o):
        try:
            return self.table[("out", r, o)]
        except KeyError:
            raise _Need(("out", r, o)) from None


def runner_classes(state: TypeCode, sig: IOSignature, body: Callable):
    """Evaluate ``body(rn)`` for every runner over ``state``, lazily.

    Co-operation entries are chosen only when ``body`` reads them, so each
    yielded partial table stands for every runner extending it.  Yields
    ``(table, weight, result)`` where ``weight`` counts those runners; the
    weights sum to :func:`count_runners`.
    """
    rs, ins, outs = enumerate_values(state), sig.input_values(), sig.output_values()
    inp_opts = [(r, i) for r in rs for i in ins]
    n_inp, n_out = len(rs), len(rs) * len(outs)
    stack = [{}]
    while stack:
        table = stack.pop()
        try:
            res = body(_PartialRunner(table))
        except _Need as need:
            opts = inp_opts if need.key[0] == "inp" else rs
            for v in reversed(opts):
                ext = dict(table)
                ext[need.key] = v
                stack.append(ext)
            continue
        ki = sum(1 for k in table if k[0] == "inp")
        ko = len(table) - ki
        yield table, len(inp_opts) ** (n_inp - ki) * len(rs) ** (n_out - ko), res


def check_io_monad_laws(sig: IOSignature | None = None, depth: int = 3, kleisli_depth: int = 1) -> SuiteReport:
    """Unit laws and associativity of ``io_bind``.

    Computations range over depth ``≤ depth`` returning ``𝟙`` and depth
    ``≤ depth-1`` returning Bool; Kleisli functions land in depth
    ``≤ kleisli_depth``.
    """
    sig = IOSignature() if sig is None else sig
    rep = SuiteReport("io-monad-laws")
    for code, d in ((UNIT_T, depth), (BOOL, max(depth - 1, 0))):
        vals = enumerate_values(code)
        comps = enumerate_io(vals, sig, d)
        fns = [FunTable(zip(vals, ch)) for ch in itertools.product(enumerate_io(vals, sig, kleisli_depth), repeat=len(vals))]
        for v in vals:
            for f in fns:
                rep.record("bind f (ret v) = f v", io_bind(f, Ret(v)) == f(v), {"f": f, "v": v})
        for c in comps:
            rep.record("bind ret c = c", io_bind(Ret, c) == c, {"c": c})
        for g in fns:
            for f in fns:
                gf = FunTable((v, io_bind(g, f(v))) for v in vals)
                for c in comps:
                    lhs, rhs = io_bind(g, io_bind(f, c)), io_bind(gf, c)
                    rep.record(
                        "bind g (bind f c) = bind (bind g ∘ f) c",
                        lhs == rhs,
                        lambda: {"c": c, "f": f, "g": g, "left": lhs, "right": rhs},
                    )
    return rep


def check_rho_monad_morphism(
    rn: Runner | None = None,
    sig: IOSignature | None = None,
    states=None,
    depth: int = 3,
    kleisli_depth: int = 1,
) -> SuiteReport:
    """``ρ(ret v) = η v`` and ``ρ(bind f c) = ρ(c) >>= ρ ∘ f``.

    With ``rn`` given only that runner is checked.  Otherwise every runner over
    each state code in ``states`` (default ``Fin 1..3``) is covered through
    :func:`runner_classes`, and the covered weights are checked to add up to
    the number of runners for each case.
    """
    sig = IOSignature() if sig is None else sig
    rep = SuiteReport("io-rho")
    state_codes = [rn.state] if rn is not None else ([Fin(1), Fin(2), Fin(3)] if states is None else states)
    cases = []
    for code, d in ((UNIT_T, depth), (BOOL, max(depth - 1, 0))):
        vals = enumerate_values(code)
        comps = enumerate_io(vals, sig, d)
        fns = [FunTable(zip(vals, ch)) for ch in itertools.product(enumerate_io(vals, sig, kleisli_depth), repeat=len(vals))]
        cases.append((vals, comps, fns))

    for sc in state_codes:
        total = count_runners(sc, sig)
        rs = enumerate_values(sc)
        classes = 0
        for vals, comps, fns in cases:
            for r in rs:
                for v in vals:
                    # no co-operation is consulted, so one case covers every runner
                    lhs = run(rn or _PartialRunner({}), Ret(v), r)
                    rep.record("ρ(ret v) = η v", lhs == (r, v), {"state": sc, "r": r, "v": v, "got": lhs})
            for f in fns:
                for c in comps:
                    bound = io_bind(f, c)

                    def body(runner, c=c, f=f, bound=bound, r=None):
                        lhs = run(runner, bound, r)
                        r1, a = run(runner, c, r)
                        return lhs, run(runner, f(a), r1)

                    for r in rs:
                        if rn is not None:
                            lhs, rhs = body(rn, r=r)
                            rep.record(
                                "ρ(bind f c) = ρ(c) >>= ρ∘f",
                                lhs == rhs,
                                lambda: {"runner": rn, "c": c, "f": f, "r": r, "left": lhs, "right": rhs},
                            )
                            continue
                        covered = 0
                        for table, weight, (lhs, rhs) in runner_classes(sc, sig, lambda x: body(x, r=r)):
                            covered += weight
                            classes += 1
                            rep.record(
                                "ρ(bind f c) = ρ(c) >>= ρ∘f",
                                lhs == rhs,
                                lambda: {"runner": table, "c": c, "f": f, "r": r, "left": lhs, "right": rhs},
                            )
                        rep.record(
                            "runner classes cover every runner",
                            covered == total,
                            {"state": sc, "c": c, "covered": covered, "runners": total},
                        )
        if rn is None:
            rep.notes.append(f"{total} runners over {sc!r} covered by {classes} partial runner classes")
    return rep


# ------------------------------------------------------------------ traces


class TStop:
    __slots__ = ("p", "_hash")

    def __init__(self, p):
        self.p = p
        self._hash = hash(("tstop", p))

    def __eq__(self, other):
        return self is other or (isinstance(other, TStop) and self._hash == other._hash and self.p == other.p)

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (0, sort_key(self.p))

    def __repr__(self):
        return f"stop({self.p!r})"


class IStep:
    """An input read during a trace or along an IO-path."""

    __slots__ = ("i", "rest", "_hash")

    def __init__(self, i, rest):
        self.i = i
        self.rest = rest
        self._hash = hash(("istep", i, rest))

    def __eq__(self, other):
        return self is other or (
            isinstance(other, IStep) and self._hash == other._hash and self.i == other.i and self.rest == other.rest
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (2, sort_key(self.i), sort_key(self.rest))

    def __repr__(self):
        return f"istep({self.i!r}, {self.rest!r})"


class OStep:
    """An output written; the value itself is read off the computation."""

    __slots__ = ("rest", "_hash")

    def __init__(self, rest):
        self.rest = rest
        self._hash = hash(("ostep", rest))

    def __eq__(self, other):
        return self is other or (isinstance(other, OStep) and self._hash == other._hash and self.rest == other.rest)

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (3, sort_key(self.rest))

    def __repr__(self):
        return f"ostep({self.rest!r})"


def trace_conforms(c, tr, p: Container) -> bool:
    while True:
        if isinstance(c, Ret):
            return isinstance(tr, TStop) and check(p.positions(c.value), tr.p)
        if isinstance(c, Inp):
            if not (isinstance(tr, IStep) and tr.i in c.kids):
                return False
            c, tr = c.kids(tr.i), tr.rest
        elif isinstance(c, Out):
            if not isinstance(tr, OStep):
                return False
            c, tr = c.rest, tr.rest
        else:
            return False


def enumerate_traces(c, p: Container) -> list:
    if isinstance(c, Ret):
        return [TStop(x) for x in enumerate_values(p.positions(c.value))]
    if isinstance(c, Inp):
        return [IStep(i, t) for i, k in c.kids.items() for t in enumerate_traces(k, p)]
    if isinstance(c, Out):
        return [OStep(t) for t in enumerate_traces(c.rest, p)]
    raise TypeMismatch(f"{c!r} is not an IO computation")


class TraceType(Derived):
    def __init__(self, p: Container, c):
        self.family = p
        self.comp = c

    def ident(self):
        return ("Trace", self.family, self.comp)

    def values(self):
        return enumerate_traces(self.comp, self.family)

    def contains(self, v):
        return trace_conforms(self.comp, v, self.family)

    def __repr__(self):
        return f"Trace({self.comp!r})"


def _bad_trace(c, tr):
    raise MalformedTrace(f"{tr!r} is not a trace of {c!r}")


def map_trace(h: Callable, c, tr):
    """``[h]⋆`` at ``c``: rewrite the final answer with ``h(a, ·)``."""
    frames = []
    while not isinstance(c, Ret):
        if isinstance(c, Inp) and isinstance(tr, IStep):
            frames.append(tr.i)
            c, tr = c.kids(tr.i), tr.rest
        elif isinstance(c, Out) and isinstance(tr, OStep):
            frames.append(_OUT)
            c, tr = c.rest, tr.rest
        else:
            _bad_trace(c, tr)
    if not isinstance(tr, TStop):
        _bad_trace(c, tr)
    return _rewrap(frames, TStop(h(c.value, tr.p)))


def split_trace(c, tr):
    """``j`` at ``c``: cut a trace of ``bind f c`` where ``c`` returns."""
    frames = []
    while not isinstance(c, Ret):
        if isinstance(c, Inp) and isinstance(tr, IStep):
            frames.append(tr.i)
            c, tr = c.kids(tr.i), tr.rest
        elif isinstance(c, Out) and isinstance(tr, OStep):
            frames.append(_OUT)
            c, tr = c.rest, tr.rest
        else:
            _bad_trace(c, tr)
    return _rewrap(frames, TStop(tr))


_OUT = object()


def _rewrap(frames, inner):
    for fr in reversed(frames):
        inner = OStep(inner) if fr is _OUT else IStep(fr, inner)
    return inner


def io_mendler_algebra(sig: IOSignature | None = None) -> WeakMendlerAlgebra:
    """Extension by traces; ``i`` unwraps ``stop``, ``j`` cuts a trace where ``c`` returns."""
    mon = IOTypeMonad(sig)

    def extend(p):
        return lambda c: TraceType(p, c)

    def action(h, p, q):
        return lambda c, tr: map_trace(h, c, tr)

    def i(p, a, tr):
        if not isinstance(tr, TStop):
            raise MalformedTrace(f"{tr!r} is not a trace of ret({a!r})")
        return tr.p

    def j(q, f, c, tr):
        return split_trace(c, tr)

    return WeakMendlerAlgebra("io", mon, extend, action, i, j, None)


def io_single_monad(sig: IOSignature | None = None) -> InducedMonad:
    """``T(A◁P) = IO A ◁ Trace``."""
    return InducedMonad(io_mendler_algebra(sig))


# ---------------------------------------------------- S-valued assignments


def s_container(S: MonadOnTypes, c: Container) -> Container:
    """``A ◁ S ∘ P``: its assignments are the elements of ``⟨⟨C⟩⟩_S``."""
    return Container(c.shapes, lambda a: S.code(c.positions(a)), key=("S", S.name, c), sampler=c.sampler)


def s_assignment(S: MonadOnTypes, c: Container, fn) -> Assignment:
    return Assignment(s_container(S, c), fn)


def cointerpret_S(S: MonadOnTypes, m: ContainerMorphism):
    """``⟨⟨f◁g⟩⟩_S h = λa. S(g a)(h (f a))``."""
    src = s_container(S, m.source)

    def act(h: Assignment) -> Assignment:
        return Assignment(src, lambda a: S.fmap(lambda q: m.position_map(a, q), h(m.shape_map(a))))

    return act


def s_assignments(S: MonadOnTypes, c: Container, limit: int | None = None) -> list[Assignment]:
    """Every S-valued assignment over ``c`` (or ``limit`` of them at an even stride)."""
    from .container import cointerpret_assignments
    from .mendler import stride_sample

    sc = s_container(S, c)
    per = [len(enumerate_values(sc.positions(a))) for a in enumerate_values(c.shapes)]
    total = 1
    for n in per:
        total *= n
    if limit is not None and total > 50 * limit:
        # too many to list; walk the mixed-radix index space directly
        idx = sorted({round(k * (total - 1) / max(limit - 1, 1)) for k in range(limit)})
        pools = [(a, enumerate_values(sc.positions(a))) for a in enumerate_values(c.shapes)]
        out = []
        for n in idx:
            table = []
            for a, pool in reversed(pools):
                n, d = divmod(n, len(pool))
                table.append((a, pool[d]))
            out.append(Assignment(sc, FunTable(reversed(table))))
        return out
    hs = cointerpret_assignments(sc)
    return hs if limit is None else stride_sample(hs, limit)


@dataclass
class EffectfulComodule:
    """A monad on containers with a comodule structure on ``⟨⟨−⟩⟩_S``.

    ``cook(C)`` maps an S-assignment over ``C`` to one over ``T(C)``.
    """

    name: str
    monad: MonadOnContainers
    ambient: MonadOnTypes
    cook: Callable
    runner: Runner | None = None

    def carrier(self, c: Container) -> Container:
        return s_container(self.ambient, c)


def evaluate_rep_S(comod: EffectfulComodule, r: Representation, h: Assignment, b, init=None):
    """``⟨⟨m⟩⟩_S (cook h)`` at ``b``; with ``init`` the state result is run from it."""
    if r.monad.key != comod.monad.key:
        raise TypeMismatch(f"representation over {r.monad.name}, comodule over {comod.monad.name}")
    if h.container != comod.carrier(r.domain):
        raise TypeMismatch(f"argument over {h.container!r}, expected S-assignments over {r.domain!r}")
    out = cointerpret_S(comod.ambient, r.morphism)(comod.cook(r.domain)(h))(b)
    if init is not None:
        return out(init)
    return out


def stateful_function(S: StateTypeMonad, c: Container, fn: Callable) -> Assignment:
    """Tabulate ``a ↦ (r ↦ (r', p))`` given as ``fn(a, r)``."""
    return s_assignment(S, c, lambda a: FunTable(((r, fn(a, r)) for r in S.states), presorted=True))


# ----------------------------------------------- single-query stateful cook


def _cook_trace(rn, h, comp, r):
    frames = []
    while True:
        if isinstance(comp, Ret):
            r, p = h(comp.value)(r)
            break
        if isinstance(comp, Inp):
            r, i = rn.co_inp(r)
            frames.append(i)
            comp = comp.kids(i)
        elif isinstance(comp, Out):
            r = rn.co_out(r, comp.o)
            frames.append(_OUT)
            comp = comp.rest
        else:
            raise TypeMismatch(f"{comp!r} is not an IO computation")
    return (r, _rewrap(frames, TStop(p)))


def stateful_cook_single(rn: Runner, c: Container, monad: InducedMonad | None = None, step=_cook_trace):
    """Run the computation from each state, then ask ``h`` at the returned shape."""
    monad = io_single_monad() if monad is None else monad
    S = StateTypeMonad(rn.state)
    target = s_container(S, monad.T(c))

    def act(h: Assignment) -> Assignment:
        return Assignment(target, lambda comp: FunTable(((r, step(rn, h, comp, r)) for r in S.states), presorted=True))

    return act


def io_single_comodule(rn: Runner, sig: IOSignature | None = None) -> EffectfulComodule:
    monad = io_single_monad(sig)
    return EffectfulComodule(
        f"io-single[{rn!r}]", monad, StateTypeMonad(rn.state), lambda c: stateful_cook_single(rn, c, monad), rn
    )


# ----------------------------------------------------- interleaved IO-trees


def graft_io(t, u: Callable):
    if isinstance(t, Leaf):
        return u(STOP)
    if isinstance(t, Node):
        return Node(t.label, FunTable(((p, graft_io(s, _under(u, p))) for p, s in t.kids.items()), presorted=True))
    if isinstance(t, Inp):
        return Inp(FunTable(((i, graft_io(s, _under_inp(u, i))) for i, s in t.kids.items()), presorted=True))
    if isinstance(t, Out):
        return Out(t.o, graft_io(t.rest, lambda rest: u(OStep(rest))))
    raise TypeMismatch(f"{t!r} is not an IO-tree")


def _under(u, p):
    return lambda rest: u(Step(p, rest))


def _under_inp(u, i):
    return lambda rest: u(IStep(i, rest))


def pfst_io(t, u, q):
    if isinstance(t, Leaf):
        return STOP
    if isinstance(t, Node) and isinstance(q, Step):
        return Step(q.pos, pfst_io(t.child(q.pos), _under(u, q.pos), q.rest))
    if isinstance(t, Inp) and isinstance(q, IStep):
        return IStep(q.i, pfst_io(t.kids(q.i), _under_inp(u, q.i), q.rest))
    if isinstance(t, Out) and isinstance(q, OStep):
        return OStep(pfst_io(t.rest, lambda rest: u(OStep(rest)), q.rest))
    raise MalformedTrace(f"{q!r} does not pass through {t!r}")


def psnd_io(t, u, q):
    while not isinstance(t, Leaf):
        if isinstance(t, Node) and isinstance(q, Step):
            t, q = t.child(q.pos), q.rest
        elif isinstance(t, Inp) and isinstance(q, IStep):
            t, q = t.kids(q.i), q.rest
        elif isinstance(t, Out) and isinstance(q, OStep):
            t, q = t.rest, q.rest
        else:
            raise MalformedTrace(f"{q!r} does not pass through {t!r}")
    return q


def is_io_tree(t, c: Container, sig: IOSignature) -> bool:
    if isinstance(t, Leaf):
        return True
    if isinstance(t, Node):
        return (
            check(c.shapes, t.label)
            and t.kids.keys() == enumerate_values(c.positions(t.label))
            and all(is_io_tree(s, c, sig) for s in t.kids.values())
        )
    if isinstance(t, Inp):
        return t.kids.keys() == sig.input_values() and all(is_io_tree(s, c, sig) for s in t.kids.values())
    if isinstance(t, Out):
        return check(sig.outputs, t.o) and is_io_tree(t.rest, c, sig)
    return False


def io_path_conforms(t, pi, c: Container | None = None) -> bool:
    while True:
        if isinstance(t, Leaf):
            return isinstance(pi, Stop)
        if isinstance(t, Node) and isinstance(pi, Step) and pi.pos in t.kids:
            t, pi = t.child(pi.pos), pi.rest
        elif isinstance(t, Inp) and isinstance(pi, IStep) and pi.i in t.kids:
            t, pi = t.kids(pi.i), pi.rest
        elif isinstance(t, Out) and isinstance(pi, OStep):
            t, pi = t.rest, pi.rest
        else:
            return False


def enumerate_io_paths(t) -> list:
    if isinstance(t, Leaf):
        return [STOP]
    if isinstance(t, Node):
        return [Step(p, r) for p, s in t.kids.items() for r in enumerate_io_paths(s)]
    if isinstance(t, Inp):
        return [IStep(i, r) for i, s in t.kids.items() for r in enumerate_io_paths(s)]
    return [OStep(r) for r in enumerate_io_paths(t.rest)]


def count_io_trees(c: Container, sig: IOSignature, depth: int, labels=None) -> int:
    labels = enumerate_values(c.shapes) if labels is None else labels
    sizes = [cardinality(c.positions(a)) for a in labels]
    ni, no = cardinality(sig.inputs), cardinality(sig.outputs)
    n = 1
    for _ in range(depth):
        n = 1 + sum(n**k for k in sizes) + n**ni + no * n
    return n


def enumerate_io_trees(c: Container, sig: IOSignature, depth: int = 2, labels=None, budget: int | None = 50_000) -> list:
    """Depth-bounded IO-trees: leaf, then nodes by label, then inp, then out."""
    labels = enumerate_values(c.shapes) if labels is None else list(labels)
    total = count_io_trees(c, sig, depth, labels)
    if budget is not None and total > budget:
        raise Budget(budget, f"{total} IO-trees of depth ≤ {depth}")
    pos = [(a, enumerate_values(c.positions(a))) for a in labels]
    ins, outs = sig.input_values(), sig.output_values()
    level = [LEAF]
    for _ in range(depth):
        nxt = [LEAF]
        for a, ps in pos:
            nxt += [Node(a, FunTable(zip(ps, ks), presorted=True)) for ks in itertools.product(level, repeat=len(ps))]
        nxt += [Inp(FunTable(zip(ins, ks), presorted=True)) for ks in itertools.product(level, repeat=len(ins))]
        nxt += [Out(o, s) for o in outs for s in level]
        level = nxt
    return level


class IOTreeType(Derived):
    def __init__(self, c: Container, sig: IOSignature):
        self.container = c
        self.sig = sig

    def ident(self):
        return ("IOTree", self.container, self.sig)

    def contains(self, v):
        return is_io_tree(v, self.container, self.sig)

    def __repr__(self):
        return f"IOTree{self.container!r}"


class IOPathType(Derived):
    def __init__(self, c: Container, t):
        self.container = c
        self.tree = t

    def ident(self):
        return ("IOPath", self.container, self.tree)

    def values(self):
        return enumerate_io_paths(self.tree)

    def contains(self, v):
        return io_path_conforms(self.tree, v)

    def __repr__(self):
        return f"IOPath({self.tree!r})"


class CombinedTreeMonad(MonadOnContainers):
    """Trees mixing queries with IO operations; extension grafts through all node kinds."""

    def __init__(self, sig: IOSignature | None = None):
        self.sig = IOSignature() if sig is None else sig
        self.name = "iotree"
        self.split = (pfst_io, psnd_io)

    @property
    def key(self):
        return ("iotree", self.sig)

    def T(self, c):
        sig = self.sig
        return Container(
            IOTreeType(c, sig),
            lambda t: IOPathType(c, t),
            key=(self.key, c),
            sampler=lambda d: enumerate_io_trees(c, sig, d, labels=c.shape_values(max(d - 1, 0))),
        )

    def eta(self, c):
        def shape(a):
            return Node(a, FunTable(((p, LEAF) for p in enumerate_values(c.positions(a))), presorted=True))

        def pos(a, pi):
            if not (isinstance(pi, Step) and isinstance(pi.rest, Stop)):
                raise MalformedTrace(f"{pi!r} is not a one-step path")
            return pi.pos

        return ContainerMorphism(c, self.T(c), shape, pos, name="η")

    def bind(self, m):
        c = m.source
        first, second = self.split
        memo, pos_memo = {}, {}

        def shape(t):
            hit = memo.get(t)
            if hit is not None:
                return hit
            if isinstance(t, Leaf):
                out = LEAF
            elif isinstance(t, Node):
                a = t.label
                out = graft_io(m.shape_map(a), lambda q: shape(t.child(m.position_map(a, q))))
            elif isinstance(t, Inp):
                out = Inp(FunTable(((i, shape(s)) for i, s in t.kids.items()), presorted=True))
            else:
                out = Out(t.o, shape(t.rest))
            memo[t] = out
            return out

        def pos(t, q):
            key = (t, q)
            hit = pos_memo.get(key)
            if hit is not None:
                return hit
            if isinstance(t, Leaf):
                out = STOP
            elif isinstance(t, Node):
                a = t.label
                fa = m.shape_map(a)
                u = lambda r: shape(t.child(m.position_map(a, r)))  # noqa: E731
                p = m.position_map(a, first(fa, u, q))
                out = Step(p, pos(t.child(p), second(fa, u, q)))
            elif isinstance(t, Inp):
                out = IStep(q.i, pos(t.kids(q.i), q.rest))
            else:
                out = OStep(pos(t.rest, q.rest))
            pos_memo[key] = out
            return out

        return ContainerMorphism(self.T(c), m.target, shape, pos, name="ext")

    def sample_shapes(self, c, depth=2):
        return enumerate_io_trees(c, self.sig, depth, labels=c.shape_values(max(depth - 1, 0)))

    has_cook = False


def combined_tree_monad(sig: IOSignature | None = None) -> CombinedTreeMonad:
    return CombinedTreeMonad(sig)


def _cook_io_path(rn, h, t, r):
    frames = []
    while not isinstance(t, Leaf):
        if isinstance(t, Node):
            r, p = h(t.label)(r)
            frames.append(("q", p))
            t = t.child(p)
        elif isinstance(t, Inp):
            r, i = rn.co_inp(r)
            frames.append(("i", i))
            t = t.kids(i)
        elif isinstance(t, Out):
            r = rn.co_out(r, t.o)
            frames.append(("o", None))
            t = t.rest
        else:
            raise TypeMismatch(f"{t!r} is not an IO-tree")
    out = STOP
    for tag, v in reversed(frames):
        out = Step(v, out) if tag == "q" else IStep(v, out) if tag == "i" else OStep(out)
    return (r, out)


def stateful_cook_tree(rn: Runner, c: Container, monad: CombinedTreeMonad | None = None, step=_cook_io_path):
    """Walk the tree from each state: queries go to ``h``, IO goes to the runner."""
    monad = combined_tree_monad() if monad is None else monad
    S = StateTypeMonad(rn.state)
    target = s_container(S, monad.T(c))

    def act(h: Assignment) -> Assignment:
        return Assignment(target, lambda t: FunTable(((r, step(rn, h, t, r)) for r in S.states), presorted=True))

    return act


def io_tree_comodule(rn: Runner, sig: IOSignature | None = None) -> EffectfulComodule:
    monad = combined_tree_monad(sig)
    return EffectfulComodule(
        f"io-tree[{rn!r}]", monad, StateTypeMonad(rn.state), lambda c: stateful_cook_tree(rn, c, monad), rn
    )


# ------------------------------------------ pure trees over effectful arguments


def _pure_cook(S: MonadOnTypes, h, t):
    if isinstance(t, Leaf):
        return S.unit(STOP)
    kid = t.child

    def after_answer(p):
        return S.bind(lambda pi: S.unit(Step(p, pi)), _pure_cook(S, h, kid(p)))

    return S.bind(after_answer, h(t.label))


def pure_cook_S(S: MonadOnTypes, c: Container, monad: TreeMonad | None = None):
    """``p ← h a; π ← cook (t p); return (step p π)``, and ``return stop`` at leaves."""
    monad = TreeMonad() if monad is None else monad
    target = s_container(S, monad.T(c))

    def act(h: Assignment) -> Assignment:
        return Assignment(target, lambda t: _pure_cook(S, h, t))

    return act


def pure_comodule(S: MonadOnTypes) -> EffectfulComodule:
    monad = TreeMonad()
    return EffectfulComodule(f"pure-tree[{S.name}]", monad, S, lambda c: pure_cook_S(S, c, monad))


def registered_ambients() -> dict[str, MonadOnTypes]:
    return {
        "identity": IdentityTypeMonad(),
        "exception": ExceptionTypeMonad(),
        "state2": StateTypeMonad(Fin(2)),
    }


# ------------------------------------------------------- monad morphisms


@dataclass
class MonadMorphism:
    """A natural family ``θ_X : S X → S' X`` given by a value-level function."""

    name: str
    source: MonadOnTypes
    target: MonadOnTypes
    apply: Callable

    def __call__(self, v):
        return self.apply(v)


def identity_theta(S: MonadOnTypes) -> MonadMorphism:
    return MonadMorphism(f"id[{S.name}]", S, S, lambda v: v)


def unit_theta(S: MonadOnTypes) -> MonadMorphism:
    """The unit of ``S`` viewed as a monad morphism out of the identity monad."""
    return MonadMorphism(f"η[{S.name}]", IdentityTypeMonad(), S, S.unit)


def check_monad_morphism(theta: MonadMorphism, codes=None) -> SuiteReport:
    """``θ ∘ η = η'`` and ``θ (f† m) = (θ∘f)'† (θ m)`` on enumerated values."""
    rep = SuiteReport(f"monad-morphism:{theta.name}")
    S, T = theta.source, theta.target
    codes = [UNIT_T, BOOL] if codes is None else codes
    for x in codes:
        for v in enumerate_values(x):
            lhs, rhs = theta(S.unit(v)), T.unit(v)
            rep.record("θ ∘ η = η'", lhs == rhs, {"v": v, "left": lhs, "right": rhs})
        for y in codes:
            xs = enumerate_values(x)
            for ch in itertools.product(S.sample(y, 1), repeat=len(xs)):
                f = FunTable(zip(xs, ch))
                for m in S.sample(x, 1):
                    lhs = theta(S.bind(f, m))
                    rhs = T.bind(lambda a: theta(f(a)), theta(m))
                    rep.record("θ ∘ bind = bind' ∘ θ", lhs == rhs, lambda: {"f": f, "m": m, "left": lhs, "right": rhs})
    return rep


def theta_assignment(theta: MonadMorphism, h: Assignment, c: Container) -> Assignment:
    """``⟨⟨C⟩⟩_θ h = λa. θ (h a)``."""
    return s_assignment(theta.target, c, lambda a: theta(h(a)))


def check_comodule_morphism_square(
    theta: MonadMorphism,
    c: Container,
    depth: int = 2,
    reps=(),
    max_args: int | None = 256,
) -> SuiteReport:
    """``θ ∘ cook_S = cook_S' ∘ θ`` on trees of depth ``≤ depth``.

    For each Kleisli map in ``reps`` also checks that the functionals it
    represents over ``S`` and ``S'`` commute with ``θ``.
    """
    law = check_monad_morphism(theta)
    if not law.ok:
        raise NotAMonadMorphism(f"{theta.name}: {law.counterexamples}")
    S, T = theta.source, theta.target
    rep = SuiteReport(f"effect-square:{theta.name}")
    monad = TreeMonad()
    cook_s, cook_t = pure_cook_S(S, c, monad), pure_cook_S(T, c, monad)
    trees = enumerate_trees(c, depth, labels=c.shape_values())
    hs = s_assignments(S, c, max_args)
    total = _count_s_assignments(S, c)
    if len(hs) < total:
        rep.notes.append(f"{len(hs)} of {total} arguments over {c!r} (even stride)")
    for h in hs:
        left, right = cook_s(h), cook_t(theta_assignment(theta, h, c))
        for t in trees:
            lhs, rhs = theta(left(t)), right(t)
            rep.record(
                "θ ∘ cook_S = cook_S' ∘ θ", lhs == rhs, lambda: {"C": c, "h": h, "tree": t, "left": lhs, "right": rhs}
            )
        for m in reps:
            f_out = cointerpret_S(S, m)(left)
            g_out = cointerpret_S(T, m)(right)
            for b in m.source.shape_values():
                lhs, rhs = theta(f_out(b)), g_out(b)
                rep.record(
                    "θ ∘ F = G ∘ θ", lhs == rhs, lambda: {"C": c, "h": h, "b": b, "left": lhs, "right": rhs}
                )
    return rep


def _count_s_assignments(S, c):
    sc = s_container(S, c)
    total = 1
    for a in enumerate_values(c.shapes):
        total *= cardinality(sc.positions(a))
    return total


__all__ = [
    "CombinedTreeMonad",
    "EffectfulComodule",
    "IOCode",
    "IOPathType",
    "IOSignature",
    "IOTreeType",
    "IOTypeMonad",
    "IStep",
    "Inp",
    "MalformedTrace",
    "MonadMorphism",
    "NotAMonadMorphism",
    "OStep",
    "Out",
    "Ret",
    "Runner",
    "StateTypeMonad",
    "TStop",
    "TraceType",
    "check_comodule_morphism_square",
    "check_io_monad_laws",
    "check_monad_morphism",
    "check_rho_monad_morphism",
    "cointerpret_S",
    "combined_tree_monad",
    "count_io",
    "count_io_trees",
    "count_runners",
    "counter_runner",
    "echo_runner",
    "enumerate_io",
    "enumerate_io_paths",
    "enumerate_io_trees",
    "enumerate_runners",
    "enumerate_traces",
    "evaluate_rep_S",
    "graft_io",
    "identity_theta",
    "io_bind",
    "io_depth",
    "io_mendler_algebra",
    "io_path_conforms",
    "io_single_comodule",
    "io_single_monad",
    "io_tree_comodule",
    "is_io",
    "is_io_tree",
    "map_trace",
    "pfst_io",
    "psnd_io",
    "pure_comodule",
    "pure_cook_S",
    "registered_ambients",
    "rho",
    "run",
    "runner_classes",
    "runner_from_tables",
    "runner_tables",
    "runner_zoo",
    "s_assignment",
    "s_assignments",
    "s_container",
    "split_trace",
    "stateful_cook_single",
    "stateful_cook_tree",
    "stateful_function",
    "stubborn_runner",
    "theta_assignment",
    "trace_conforms",
    "unit_theta",
]
