"""Worked examples shipped with the package, each with a printed walkthrough.

Every demo is built from Python here; the JSON files under ``data/`` are the
emitted form of the same scenarios and are checked against it by the tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from .container import Assignment, container
from .effects import IOSignature, counter_runner, runner_tables
from .mendler import FiniteSubset, InducedMonad, check_finite_support, pfin_algebra
from .pcont import PropContainer, functional_instance_reduce, instance_reducible
from .representation import Representation, compose_reps, evaluate_rep
from .scenario import (
    Answer,
    ArgSpec,
    Eat,
    RepSpec,
    RunnerSpec,
    Scenario,
    TreeExpr,
    dumps,
    evaluate,
    load,
)
from .treemonad import LEAF, TreeMonad, node
from .universe import BOOL, NAT, UNIT, UNIT_T, Fin, Fun, FunTable, enumerate_values


class UnknownDemo(KeyError):
    pass


@dataclass
class DemoReport:
    name: str
    lines: list = field(default_factory=list)
    facts: dict = field(default_factory=dict)
    ok: bool = True

    def say(self, *parts):
        self.lines.append(" ".join(str(p) for p in parts))

    def text(self) -> str:
        return "\n".join(self.lines)


def _leaf():
    return TreeExpr("leaf")


# ------------------------------------------------------------------ baire


def baire_space():
    return container(NAT, NAT, name="Baire")


def baire_scenario() -> Scenario:
    """``F α = α (α 0)``: ask at 0, then ask at the answer, return the last answer."""
    dom = baire_space()
    cod = container(UNIT_T, NAT, name="Point")
    tree = TreeExpr("node", 0, None, TreeExpr("node", Answer(-1), None, _leaf()))
    rep = RepSpec("tree", dom, cod, ((UNIT, tree, Eat("answer", -1)),))
    return Scenario(
        description="Second-order functional α ↦ α(α(0)) on Baire space, evaluated at the successor.",
        containers={"Baire": dom, "Point": cod},
        representation=rep,
        argument=ArgSpec(dom, builtin="succ"),
        at=UNIT,
        has_at=True,
    )


def baire_stages():
    """The same functional as two stages: ``β ↦ β 0`` after ``α ↦ (b ↦ α (α b))``."""
    tm = TreeMonad()
    dom = baire_space()
    point = container(UNIT_T, NAT, name="Point")
    tnat = tm.T(dom)
    ttwo = tm.T(dom)
    from .container import ContainerMorphism

    twice = {}

    def twice_tree(b):
        if b not in twice:
            twice[b] = node(b, lambda p: node(p, lambda q: LEAF))
        return twice[b]

    first = Representation(
        tm, dom, dom, ContainerMorphism(dom, tnat, twice_tree, lambda b, pi: pi.rest.pos, name="twice")
    )
    at_zero = node(0, lambda p: LEAF)
    second = Representation(
        tm, dom, point, ContainerMorphism(point, ttwo, lambda _: at_zero, lambda _, pi: pi.pos, name="at0")
    )
    return first, second


def _demo_baire(rep: DemoReport, with_laws: bool):
    sc = baire_scenario()
    r = sc.representation.build()
    h = sc.argument.build()
    t = r.tree(UNIT)
    rep.say("representation: tree monad over Baire = ℕ ◁ ℕ, codomain 𝟙 ◁ ℕ")
    rep.say("  tree_F(⋆) = node(0, λp. node(p, λq. leaf))")
    rep.say("  eat_F(⋆, step(p, step(q, stop))) = q")
    cooked = r.monad.cook(r.domain)(h)(t)
    rep.say("argument: α = successor")
    rep.say("  path chosen by α:", cooked)
    value = evaluate(sc, sc.argument, UNIT)
    rep.say("  F(α)(⋆) =", value)
    direct = h(h(0))
    rep.say("  direct α(α(0)) =", direct)
    first, second = baire_stages()
    staged = evaluate_rep(compose_reps(second, first), h, UNIT)
    stepwise = evaluate_rep(second, Assignment(first.codomain, lambda b: evaluate_rep(first, h, b)), UNIT)
    rep.say("two stages composed:", staged, " stage by stage:", stepwise)
    rep.facts.update(value=value, direct=direct, staged=staged, stepwise=stepwise)
    rep.ok = value == direct == staged == stepwise
    if with_laws:
        _law_verdict(rep, "monad-laws:tree")


# ----------------------------------------------------------- finite support


def finite_support_scenario() -> Scenario:
    """``b=False`` reads h at 0 and 1 and returns their conjunction; ``b=True`` returns h(2)."""
    dom = container(Fin(3), BOOL, name="Three")
    cod = container(BOOL, BOOL, name="Flag")
    pf = InducedMonad(pfin_algebra())
    both = FiniteSubset([0, 1])
    tc = pf.T(dom)
    conj = FunTable((pos, pos(0) and pos(1)) for pos in enumerate_values(tc.positions(both)))
    rep = RepSpec(
        "pfin",
        dom,
        cod,
        ((False, both, Eat("table", conj)), (True, FiniteSubset([2]), Eat("answer", 0))),
    )
    return Scenario(
        description="A finite-powerset representation: each output reads the argument on a finite support only.",
        containers={"Three": dom, "Flag": cod},
        representation=rep,
        argument=ArgSpec(dom, table=FunTable([(0, True), (1, True), (2, False)])),
        at=False,
        has_at=True,
    )


def demo_finite_support_reps() -> list[Representation]:
    """Every 𝒫_f Kleisli map Bool◁Bool → 𝒫_f(Bool◁Bool), plus the shipped scenario."""
    pf = InducedMonad(pfin_algebra())
    c = container(BOOL, BOOL)
    reps = [Representation(pf, c, c, m) for m in pf.kleisli_morphisms(c, c, 1, None)]
    reps.append(finite_support_scenario().representation.build())
    return reps


def _agreeing_pairs(r, b):
    from .container import cointerpret_assignments

    support = r.tree(b)
    hs = cointerpret_assignments(r.domain)
    for h, h2 in itertools.product(hs, repeat=2):
        if all(h(a) == h2(a) for a in support):
            yield h, h2


def _demo_finite_support(rep: DemoReport, with_laws: bool):
    sc = finite_support_scenario()
    r = sc.representation.build()
    rep.say("representation: finite powerset monad, domain Fin 3 ◁ Bool, codomain Bool ◁ Bool")
    for b in (False, True):
        rep.say(f"  support of b={b}:", r.tree(b))
    h = sc.argument.build()
    rep.say("argument h =", h.tabulate())
    for b in (False, True):
        rep.say(f"  F(h)({b}) =", evaluate_rep(r, h, b))
    checked = failed = 0
    for b in (False, True):
        for h1, h2 in _agreeing_pairs(r, b):
            checked += 1
            failed += not check_finite_support(r, h1, h2, b)
    rep.say(f"support invariance on the scenario: {checked - failed}/{checked} agreeing pairs give equal outputs")
    total = bad = 0
    for r2 in demo_finite_support_reps():
        for b in r2.codomain.shape_values():
            for h1, h2 in _agreeing_pairs(r2, b):
                total += 1
                bad += not check_finite_support(r2, h1, h2, b)
    rep.say(f"support invariance over the demo set: {total - bad}/{total} pairs")
    rep.facts.update(checked=checked, failed=failed, total=total, bad=bad)
    rep.ok = failed == 0 and bad == 0
    if with_laws:
        _law_verdict(rep, "monad-laws:pfin")


# -------------------------------------------------------------- exceptional


def exceptional_scenario() -> Scenario:
    dom = container(BOOL, BOOL, name="Flag")
    cod = container(Fin(3), BOOL, name="Three")
    from .universe import Inl, Inr

    negate = FunTable([(False, True), (True, False)])
    rep = RepSpec(
        "exc",
        dom,
        cod,
        (
            (0, Inl(False), Eat("table", negate)),
            (1, Inl(True), Eat("answer", 0)),
            (2, Inr(UNIT), Eat("const", True)),
        ),
    )
    return Scenario(
        description="Exception-monad representation: outputs 0 and 1 query the argument, output 2 raises and returns a default.",
        containers={"Flag": dom, "Three": cod},
        representation=rep,
        argument=ArgSpec(dom, builtin="not"),
        at=2,
        has_at=True,
    )


def _demo_exceptional(rep: DemoReport, with_laws: bool):
    from .container import cointerpret_assignments

    sc = exceptional_scenario()
    r = sc.representation.build()
    rep.say("representation: exception monad M X = X + 𝟙, domain Bool ◁ Bool, codomain Fin 3 ◁ Bool")
    rep.say("  b=0 ↦ inl False, eat = not;  b=1 ↦ inl True, eat = the answer;  b=2 ↦ inr ⋆, eat = True")
    rows = {}
    for h in cointerpret_assignments(r.domain):
        row = tuple(evaluate_rep(r, h, b) for b in range(3))
        rows[h.tabulate()] = row
        rep.say(f"  h = {h.tabulate()!r}:  F(h) = {row}")
    raised = {row[2] for row in rows.values()}
    queried = {row[:2] for row in rows.values()}
    rep.say(f"inl branches vary with h ({len(queried)} distinct outcomes); inr branch is {sorted(raised)} for every h")
    rep.facts.update(inr_values=raised, inl_outcomes=len(queried))
    rep.ok = raised == {True} and len(queried) > 1
    if with_laws:
        _law_verdict(rep, "monad-laws:exc")


# --------------------------------------------------------- io interactive


def _io_runner_spec() -> RunnerSpec:
    sig = IOSignature()
    rn = counter_runner(3)
    co_inp, co_out = runner_tables(rn, sig)
    return RunnerSpec(rn.state, rn.init, FunTable(co_inp), FunTable(co_out), rn.name)


def io_scenario() -> Scenario:
    """Read one input; on True write True first; then query the argument at the input."""
    dom = container(BOOL, BOOL, name="Flag")
    cod = container(UNIT_T, BOOL, name="Point")
    comp = TreeExpr(
        "inp",
        None,
        (
            (False, TreeExpr("ret", False)),
            (True, TreeExpr("out", True, None, TreeExpr("ret", True))),
        ),
    )
    state = Fin(3)
    # h a r = (r + 1 mod 3, a xor r == 2)
    table = FunTable(
        (a, FunTable((r, ((r + 1) % 3, a != (r == 2))) for r in range(3))) for a in (False, True)
    )
    return Scenario(
        description="One IO step against a three-state counter runner, then a stateful query.",
        containers={"Flag": dom, "Point": cod},
        io=IOSignature(),
        runner=_io_runner_spec(),
        representation=RepSpec("io", dom, cod, ((UNIT, comp, Eat("answer", -1)),), IOSignature()),
        argument=ArgSpec(dom, table=table, state=state),
        at=UNIT,
        has_at=True,
    )


def _demo_io(rep: DemoReport, with_laws: bool):
    sc = io_scenario()
    rep.say("representation: IO monad over Bool ◁ Bool with Bool inputs and outputs, codomain 𝟙 ◁ Bool")
    rep.say("  tree_F(⋆) = inp(False ↦ ret False, True ↦ out(True, ret True));  eat = final answer")
    rep.say("runner: counter3 (reading yields parity and ticks; writing o adds 1 + o)")
    rep.say("argument: h a r = (r + 1 mod 3, a xor (r = 2))")
    results = {}
    for r0 in enumerate_values(sc.runner.state):
        results[r0] = evaluate(sc, sc.argument, UNIT, init=r0)
        rep.say(f"  from state {r0}: (final state, value) = {results[r0]}")
    rep.facts["results"] = results
    if with_laws:
        _law_verdict(rep, "monad-laws:io")


# ---------------------------------------------------- instance reducibility


def _subset(mask: int) -> frozenset:
    return frozenset(x for x in (0, 1) if mask >> x & 1)


def _nonempty_subset(k: int) -> frozenset:
    return _subset(k + 1)


def partial_choices(family: dict) -> list[dict]:
    """Partial choice maps of an indexed family of subsets, as dicts."""
    idx = sorted(family)
    out = []
    for picks in itertools.product(*[[None, *sorted(family[i])] for i in idx]):
        out.append({i: x for i, x in zip(idx, picks) if x is not None})
    return out


def maximal_choices(family: dict) -> list[dict]:
    """Maximal elements of the partial choice maps ordered by extension."""
    maps = partial_choices(family)
    return [m for m in maps if not any(len(n) > len(m) and n.items() >= m.items() for n in maps)]


def _family(tab: FunTable, decode) -> dict:
    return {i: decode(k) for i, k in tab.items()}


def zorn_side() -> PropContainer:
    """Families (masks over {0,1} at each index); P = the choice poset has a maximal element."""
    shapes = Fun(Fin(2), Fin(4))
    return PropContainer(
        shapes,
        FunTable((t, bool(maximal_choices(_family(t, _subset)))) for t in enumerate_values(shapes)),
        "Zorn",
    )


def choice_side(nonempty: bool = False) -> PropContainer:
    """Q = the family has a choice function; ``nonempty`` drops families with an empty member."""
    shapes = Fun(Fin(2), Fin(3 if nonempty else 4))
    decode = _nonempty_subset if nonempty else _subset
    return PropContainer(
        shapes,
        FunTable((t, all(_family(t, decode).values())) for t in enumerate_values(shapes)),
        "Choice⁺" if nonempty else "Choice",
    )


def zorn_scenarios() -> dict[str, Scenario]:
    return {
        "zorn-maximal.json": Scenario(description="Families over two indices; holds when the poset of partial choice maps has a maximal element.", prop_container=zorn_side()),
        "zorn-choice.json": Scenario(description="Families over two indices, empty members allowed; holds when a choice function exists.", prop_container=choice_side(False)),
        "zorn-choice-nonempty.json": Scenario(description="Families over two indices with nonempty members (k encodes the mask k+1); holds when a choice function exists.", prop_container=choice_side(True)),
    }


def _demo_zorn(rep: DemoReport, with_laws: bool):
    ap = zorn_side()
    rep.say("A ◁ P: families of subsets of {0,1} over two indices; P = the partial choice maps have a maximal element")
    for nonempty in (False, True):
        bq = choice_side(nonempty)
        label = "nonempty members" if nonempty else "empty members allowed"
        rep.say(f"B ◁ Q ({label}): Q = a choice function exists")
        ok = instance_reducible(ap, bq)
        t = functional_instance_reduce(ap, bq)
        rep.say(f"  instance reducible: {ok}")
        rep.say("  functional witness:", "irreducible" if t is None else f"{len(t)}-entry map")
        if not ok:
            bad = next(b for b in bq.shape_values() if not bq(b))
            fam = _family(bad, _subset)
            rep.say(f"  stuck at family {fam}: maximal partial choices {maximal_choices(fam)} are not total")
        rep.facts[label] = ok
    totals = []
    for k in enumerate_values(Fun(Fin(2), Fin(3))):
        fam = _family(k, _nonempty_subset)
        totals.append(all(len(m) == len(fam) for m in maximal_choices(fam)))
    rep.say(f"for nonempty families every maximal partial choice is total: {all(totals)}")
    rep.facts["maximal_total"] = all(totals)
    rep.ok = rep.facts["empty members allowed"] is False and rep.facts["nonempty members"] and all(totals)
    if with_laws:
        _law_verdict(rep, "pcont-heyting")


# ------------------------------------------------------------------ registry


def _law_verdict(rep: DemoReport, suite: str):
    from .lawcheck import SuiteParams, run_suite

    res = run_suite(suite, SuiteParams(max_shapes=1, max_depth=1))
    rep.say(f"law suite {suite}: {res.status} ({res.passed}/{res.run} cases)")
    rep.facts["laws"] = res.status
    rep.ok = rep.ok and res.ok


DEMOS: dict[str, Callable] = {
    "baire": _demo_baire,
    "finite-support": _demo_finite_support,
    "exceptional": _demo_exceptional,
    "io-interactive": _demo_io,
    "instance-zorn-shape": _demo_zorn,
}


def run_demo(name: str, with_laws: bool = True) -> DemoReport:
    if name not in DEMOS:
        raise UnknownDemo(name)
    rep = DemoReport(name)
    DEMOS[name](rep, with_laws)
    return rep


def shipped_scenarios() -> dict[str, Scenario]:
    out = {
        "baire.json": baire_scenario(),
        "finite-support.json": finite_support_scenario(),
        "exceptional.json": exceptional_scenario(),
        "io-interactive.json": io_scenario(),
        "identity.json": identity_scenario(),
    }
    out.update(zorn_scenarios())
    return out


def identity_scenario() -> Scenario:
    """The identity representation on Bool ◁ Bool: it returns the argument."""
    c = container(BOOL, BOOL, name="Flag")
    rep = RepSpec(
        "tree",
        c,
        c,
        tuple((b, TreeExpr("node", b, None, _leaf()), Eat("answer", 0)) for b in (False, True)),
    )
    return Scenario(
        description="The identity representation: asks the argument at b and returns the answer.",
        containers={"Flag": c},
        representation=rep,
        argument=ArgSpec(c, builtin="not"),
        at=True,
        has_at=True,
    )


def data_dir():
    return resources.files("comodrep") / "data"


def load_shipped(name: str) -> Scenario:
    with resources.as_file(data_dir() / name) as p:
        return load(p)


def write_data(directory=None):
    """Regenerate the shipped JSON files."""
    import pathlib

    d = pathlib.Path(directory) if directory is not None else pathlib.Path(__file__).parent / "data"
    d.mkdir(exist_ok=True)
    for name, sc in shipped_scenarios().items():
        (d / name).write_text(dumps(sc), encoding="utf-8")


__all__ = [
    "DEMOS",
    "DemoReport",
    "UnknownDemo",
    "baire_scenario",
    "baire_stages",
    "choice_side",
    "demo_finite_support_reps",
    "exceptional_scenario",
    "finite_support_scenario",
    "identity_scenario",
    "io_scenario",
    "load_shipped",
    "maximal_choices",
    "partial_choices",
    "run_demo",
    "shipped_scenarios",
    "write_data",
    "zorn_side",
]
