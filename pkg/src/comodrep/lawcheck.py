"""Law suites over small catalogs, the suite registry and seeded-bug fixtures."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable

from .container import (
    Assignment,
    Container,
    catalog,
    cointerpret_assignments,
    cointerpret_morphism,
    identity_container,
    compose_morphisms,
    identity_morphism,
    morphism_difference,
    morphisms_between,
    tabulate,
    tabulate_on,
)
from .effects import (
    EffectfulComodule,
    IOSignature,
    StateTypeMonad,
    cointerpret_S,
    check_comodule_morphism_square,
    check_io_monad_laws,
    check_rho_monad_morphism,
    combined_tree_monad,
    identity_theta,
    io_mendler_algebra,
    io_single_monad,
    pure_comodule,
    registered_ambients,
    runner_zoo,
    s_assignments,
    stateful_cook_single,
    stateful_cook_tree,
    unit_theta,
)
from .mendler import (
    IdentityTypeMonad,
    InducedMonad,
    check_coherence,
    default_shape_codes,
    families_over,
    check_finite_support,
    exception_instance,
    identity_algebra,
    FiniteSubset,
    pfin_algebra,
    restrict,
    self_rep_instance,
    stride_sample,
)
from .report import SuiteReport, case_budget
from .representation import (
    CookFromAlpha,
    MonadOnContainers,
    Representation,
    alpha_from_cook,
    check_algebra,
    compose_reps,
    evaluate_rep,
    functor_F,
    id_rep,
    rfun_products,
)
from .treemonad import STOP, TreeMonad, pfst, psnd
from .universe import BOOL, EMPTY, UNIT_T, Budget, Fin, FunTable, cardinality, enumerate_values, sort_key


class UnknownSuite(KeyError):
    pass


# ----------------------------------------------------------------- catalog


@dataclass
class Catalog:
    """Containers with small shape codes and per-shape positions in {𝟘, 𝟙, 𝟚}."""

    max_shapes: int = 2
    depth: int = 2
    kleisli_depth: int = 1
    max_kleisli: int | None = None
    max_args: int | None = 64
    containers: list = field(default_factory=list)

    def __post_init__(self):
        if not self.containers:
            codes = [c for c in (EMPTY, UNIT_T, BOOL, Fin(3)) if cardinality(c) <= self.max_shapes]
            self.containers = catalog(codes)


# ----------------------------------------------------------- monad laws


def _kleisli(monad, c, d, depth, max_kleisli, rep):
    try:
        ks = monad.kleisli_morphisms(c, d, depth=depth, budget=20_000)
    except Budget as e:
        rep.skip("Kleisli maps", 1, f"{c!r} → T{d!r}: {e}")
        return []
    if max_kleisli is not None and len(ks) > max_kleisli:
        rep.notes.append(f"Kleisli maps {c!r} → T{d!r}: {max_kleisli} of {len(ks)} (even stride)")
        ks = stride_sample(ks, max_kleisli)
    return [tabulate(m) for m in ks]


def _table_key(m):
    rows = []
    for a in enumerate_values(m.source.shapes):
        b = m.shape_map(a)
        rows.append((sort_key(a), b, tuple((q, m.position_map(a, q)) for q in enumerate_values(m.target.positions(b)))))
    return tuple(rows)


def check_monad_laws(monad: MonadOnContainers, cat: Catalog | None = None, name: str | None = None) -> SuiteReport:
    """Both unit laws and associativity, compared on shape and position maps.

    Kleisli maps land in ``T``-shapes of depth ``≤ cat.kleisli_depth``; the
    extended maps are compared on ``T``-shapes of depth ``≤ cat.depth``.
    """
    cat = Catalog() if cat is None else cat
    rep = SuiteReport(name or f"monad-laws:{monad.name}")
    cs = cat.containers
    ks = {(i, j): _kleisli(monad, c, d, cat.kleisli_depth, cat.max_kleisli, rep) for i, c in enumerate(cs) for j, d in enumerate(cs)}
    binds = {key: [monad.bind(g) for g in v] for key, v in ks.items()}
    # distinct composites are few compared to (f, g) pairs, so share their extensions
    seen = {}

    def extended(i, k, m, shapes):
        try:
            key = (i, k, _table_key(m))
            hit = seen.get(key)
        except TypeError:
            return monad.bind(m)
        if hit is None:
            hit = seen[key] = tabulate_on(monad.bind(m), shapes)
        return hit

    for i, c in enumerate(cs):
        shapes = monad.sample_shapes(c, cat.depth)
        tc = monad.T(c)
        rep.attempt(
            "bind η = id",
            lambda: morphism_difference(monad.bind(monad.eta(c)), identity_morphism(tc), shapes),
            {"C": c},
        )
        eta = monad.eta(c)
        for j in range(len(cs)):
            for f, bf in zip(ks[i, j], binds[i, j]):
                rep.attempt(
                    "bind f ∘ η = f",
                    lambda: morphism_difference(compose_morphisms(bf, eta), f),
                    lambda: {"C": c, "D": cs[j], "f": f.name},
                )
            bfs = []
            for bf in binds[i, j]:
                try:
                    bfs.append(tabulate_on(bf, shapes))
                except Exception:
                    bfs.append(bf)
            for k in range(len(cs)):
                for f, bf in zip(ks[i, j], bfs):
                    for bg in binds[j, k]:

                        def diff(f=f, bf=bf, bg=bg, k=k):
                            lhs = extended(i, k, tabulate(compose_morphisms(bg, f)), shapes)
                            return morphism_difference(lhs, compose_morphisms(bg, bf), shapes)

                        rep.attempt(
                            "bind (bind g ∘ f) = bind g ∘ bind f",
                            diff,
                            lambda: {"C": c, "D": cs[j], "E": cs[k]},
                        )
    return rep


# ------------------------------------------------------- comodule laws


def pure_as_comodule(monad: MonadOnContainers) -> EffectfulComodule:
    """A monad with its own cook, seen as a comodule over the identity ambient."""
    return EffectfulComodule(monad.name, monad, IdentityTypeMonad(), monad.cook)


def _arguments(comod, c, max_args):
    S = comod.ambient
    if isinstance(S, IdentityTypeMonad):
        hs = cointerpret_assignments(c)
        return hs if max_args is None else stride_sample(hs, max_args)
    return s_assignments(S, c, max_args)


def check_comodule_laws(comod: EffectfulComodule, cat: Catalog | None = None, name: str | None = None) -> SuiteReport:
    """Counit, multiplication and naturality of ``cook`` on ``⟨⟨−⟩⟩_S``.

    S-values are compared by equality, which for the state monad means equal
    ``(r', x)`` at every state.
    """
    cat = Catalog() if cat is None else cat
    rep = SuiteReport(name or f"comodule-laws:{comod.name}")
    monad, S = comod.monad, comod.ambient
    cs = cat.containers
    for c in cs:
        cook = comod.cook(c)
        tc = monad.T(c)
        eta = monad.eta(c)
        mu = monad.mu(c)
        cook_t = comod.cook(tc)
        hs = _arguments(comod, c, cat.max_args)
        tshapes = monad.sample_shapes(c, cat.depth)
        ttshapes = monad.sample_shapes(tc, max(cat.depth - 1, 1))
        for h in hs:
            k = cook(h)
            for a in c.shape_values():
                rep.attempt(
                    "⟨⟨η⟩⟩ ∘ cook = id",
                    lambda: _diff(S.fmap(lambda x: eta.position_map(a, x), k(eta.shape_map(a))), h(a)),
                    lambda: {"C": c, "h": h, "a": a},
                )
            kk = cook_t(k)
            for t in ttshapes:
                rep.attempt(
                    "⟨⟨μ⟩⟩ ∘ cook = cook_T ∘ cook",
                    lambda: _diff(S.fmap(lambda x: mu.position_map(t, x), k(mu.shape_map(t))), kk(t)),
                    lambda: {"C": c, "h": h, "t": t},
                )
        for d in cs:
            try:
                ms = morphisms_between(c, d, budget=2_000)
            except Budget as e:
                rep.skip("cook natural", 1, str(e))
                continue
            cook_d = comod.cook(d)
            hd = _arguments(comod, d, cat.max_args)
            for m in stride_sample(ms, 16):
                tm = monad.fmap(m)
                pull = cointerpret_morphism(m) if isinstance(S, IdentityTypeMonad) else cointerpret_S(S, m)
                for h in stride_sample(hd, 16):
                    left, right = cook(pull(h)), cook_d(h)
                    for t in tshapes:
                        rep.attempt(
                            "cook ∘ ⟨⟨m⟩⟩ = ⟨⟨T m⟩⟩ ∘ cook",
                            lambda: _diff(left(t), S.fmap(lambda x: tm.position_map(t, x), right(tm.shape_map(t)))),
                            lambda: {"C": c, "D": d, "h": h, "t": t},
                        )
    return rep


def _diff(lhs, rhs):
    return None if lhs == rhs else {"left": lhs, "right": rhs}


# ------------------------------------------------- representations (RFun)


def check_representation_suite(monad: MonadOnContainers | None = None, cat: Catalog | None = None) -> SuiteReport:
    """Soundness of representations, composition, finite products, cook ↔ α."""
    monad = TreeMonad() if monad is None else monad
    cat = Catalog() if cat is None else cat
    rep = SuiteReport(f"representation:{monad.name}")
    cs = cat.containers
    hs = {c: cointerpret_assignments(c) for c in cs}
    ks = {(i, j): _kleisli(monad, c, d, cat.kleisli_depth, cat.max_kleisli, rep) for i, c in enumerate(cs) for j, d in enumerate(cs)}

    def evaluations(r: Representation, h):
        return FunTable((b, evaluate_rep(r, h, b)) for b in r.codomain.shape_values())

    # soundness: the representation evaluates to its functional
    for (i, j), ms in ks.items():
        a, b = cs[i], cs[j]
        for m in ms:
            r = Representation(monad, b, a, m)
            fun = functor_F(monad, m)
            for h in hs[b]:
                rep.attempt(
                    "F h = eat ∘ cook h ∘ tree",
                    lambda: _diff(fun(h).tabulate(), evaluations(r, h)),
                    lambda: {"A": a, "B": b, "h": h},
                )
    # identity and composition
    for c in cs:
        r = id_rep(monad, c)
        for h in hs[c]:
            rep.attempt("id represents id", lambda: _diff(evaluations(r, h), h.tabulate()), {"C": c, "h": h})
    for i, a in enumerate(cs):
        for j, b in enumerate(cs):
            for k, c in enumerate(cs):
                for f in stride_sample(ks[j, i], 8):
                    rf = Representation(monad, a, b, f)
                    for g in stride_sample(ks[k, j], 8):
                        rg = Representation(monad, b, c, g)
                        rgf = compose_reps(rg, rf)
                        for h in stride_sample(hs[a], 8):

                            def diff(rf=rf, rg=rg, rgf=rgf, h=h, b=b):
                                mid = Assignment(b, evaluations(rf, h))
                                return _diff(evaluations(rgf, h), evaluations(rg, mid))

                            rep.attempt("compose represents composite", diff, lambda: {"A": a, "B": b, "C": c, "h": h})
    # finite products: β and η laws
    prods = rfun_products(monad)
    for i, a in enumerate(cs):
        for j, b in enumerate(cs):
            for k, c in enumerate(cs):
                for f in stride_sample(ks[j, k], 6):
                    rf = Representation(monad, c, b, f)
                    for g in stride_sample(ks[i, k], 6):
                        rg = Representation(monad, c, a, g)
                        pr = prods.pair(rf, rg)
                        p1 = compose_reps(prods.proj1(b, a), pr)
                        p2 = compose_reps(prods.proj2(b, a), pr)
                        for h in stride_sample(hs[c], 6):
                            rep.attempt("π₁ ∘ ⟨f, g⟩ = f", lambda: _diff(evaluations(p1, h), evaluations(rf, h)), {"h": h})
                            rep.attempt("π₂ ∘ ⟨f, g⟩ = g", lambda: _diff(evaluations(p2, h), evaluations(rg, h)), {"h": h})
                            eta_law = prods.pair(p1, p2)
                            rep.attempt(
                                "⟨π₁ ∘ p, π₂ ∘ p⟩ = p",
                                lambda: _diff(evaluations(eta_law, h), evaluations(pr, h)),
                                {"h": h},
                            )
        bang = prods.bang(a)
        for h in hs[a]:
            rep.attempt("! is the unique map to 𝟙", lambda: _diff(evaluations(bang, h), FunTable()), {"h": h})
    rep.merge(check_algebra_translation(monad, cat))
    return rep


def check_algebra_translation(monad: MonadOnContainers, cat: Catalog | None = None) -> SuiteReport:
    """cook → α → cook and α → cook → α agree extensionally."""
    cat = Catalog() if cat is None else cat
    rep = SuiteReport(f"algebra-translation:{monad.name}")
    alpha = alpha_from_cook(monad)
    rebuilt = CookFromAlpha(monad, alpha)
    rep.merge(check_algebra(monad, alpha, depth=cat.depth))
    for c in cat.containers:
        cook1, cook2 = monad.cook(c), rebuilt.cook(c)
        shapes = monad.sample_shapes(c, cat.depth)
        for h in cointerpret_assignments(c):
            k1, k2 = cook1(h), cook2(h)
            for t in shapes:
                rep.attempt("cook → α → cook", lambda: _diff(k1(t), k2(t)), {"C": c, "h": h, "t": t})
    again = alpha_from_cook(rebuilt)
    idc_shapes = monad.sample_shapes(identity_container(), cat.depth + 1)
    rep.attempt("α → cook → α", lambda: morphism_difference(again, alpha, idc_shapes))
    return rep


# ----------------------------------------------------------- instances


def monad_instances(sig: IOSignature | None = None) -> dict[str, Callable[[], MonadOnContainers]]:
    return {
        "tree": TreeMonad,
        "identity": lambda: InducedMonad(identity_algebra()),
        "pfin": lambda: InducedMonad(pfin_algebra()),
        "trivial": lambda: InducedMonad(self_rep_instance()),
        "exc": lambda: InducedMonad(exception_instance()),
        "io": lambda: io_single_monad(sig),
        "iotree": lambda: combined_tree_monad(sig),
        "plus": _plus_monad,
    }


def _plus_monad():
    from .pcont import plus_monad

    return plus_monad()


def algebra_instances(sig: IOSignature | None = None) -> dict:
    from .pcont import plus_algebra

    return {
        "pfin": pfin_algebra,
        "identity": identity_algebra,
        "trivial": self_rep_instance,
        "exc": exception_instance,
        "io": lambda: io_mendler_algebra(sig),
        "plus": plus_algebra,
    }


def comodule_instances(sig: IOSignature | None = None) -> dict[str, Callable[[], list[EffectfulComodule]]]:
    """Each entry builds the comodules checked by ``comodule-laws:<name>``."""
    sig = IOSignature() if sig is None else sig
    amb = registered_ambients()

    def over_runners(make):
        return lambda: [make(rn) for rn in runner_zoo()]

    out = {
        name: (lambda name=name: [pure_as_comodule(monad_instances(sig)[name]())])
        for name in ("tree", "identity", "pfin", "trivial", "exc", "plus")
    }
    io_monad = io_single_monad(sig)
    tree_monad = combined_tree_monad(sig)
    out["io"] = over_runners(
        lambda rn: EffectfulComodule(
            f"io[{rn!r}]", io_monad, StateTypeMonad(rn.state), lambda c, rn=rn: stateful_cook_single(rn, c, io_monad), rn
        )
    )
    out["iotree"] = over_runners(
        lambda rn: EffectfulComodule(
            f"iotree[{rn!r}]", tree_monad, StateTypeMonad(rn.state), lambda c, rn=rn: stateful_cook_tree(rn, c, tree_monad), rn
        )
    )
    for key, S in amb.items():
        out[f"pure-{key}"] = lambda S=S: [pure_comodule(S)]
    return out


# ------------------------------------------------------------- suites


@dataclass
class SuiteParams:
    max_shapes: int = 2
    max_depth: int = 2
    budget: int | None = None
    max_kleisli: int | None = None


def _catalog(params: SuiteParams, **kw) -> Catalog:
    return Catalog(max_shapes=params.max_shapes, depth=params.max_depth, max_kleisli=params.max_kleisli, **kw)


def _effect_catalog(params: SuiteParams) -> Catalog:
    # IO shapes grow quickly; the effectful suites use shapes of size ≤ 1 plus Bool◁{𝟙,𝟚}
    cs = Catalog(max_shapes=1).containers + [Container(BOOL, {False: UNIT_T, True: BOOL})]
    return Catalog(max_shapes=params.max_shapes, depth=min(params.max_depth, 2), max_args=16, containers=cs)


def _prop_catalog(params: SuiteParams) -> Catalog:
    # the inhabited powerset only acts on containers whose positions are 𝟘 or 𝟙
    from .pcont import prop_catalog

    cs = [ap.as_container() for ap in prop_catalog(min(params.max_shapes, 2))]
    return Catalog(max_shapes=params.max_shapes, depth=params.max_depth, max_kleisli=params.max_kleisli or 24, containers=cs)


def _suite_monad_laws(inst):
    def go(params: SuiteParams):
        monad = monad_instances()[inst]()
        if inst in ("tree",):
            cat = _catalog(params)
        elif inst == "plus":
            cat = _prop_catalog(params)
        elif inst in ("io", "iotree"):
            cat = _effect_catalog(params)
            cat.depth = 1
            cat.max_kleisli = params.max_kleisli or 8
        else:
            cat = _catalog(params)
            cat.max_kleisli = params.max_kleisli or 24
        return check_monad_laws(monad, cat)

    return go


def _suite_comodule_laws(inst):
    def go(params: SuiteParams):
        rep = SuiteReport(f"comodule-laws:{inst}")
        eff = inst in ("io", "iotree") or inst.startswith("pure-")
        cat = _effect_catalog(params) if eff else _prop_catalog(params) if inst == "plus" else _catalog(params)
        if inst in ("io", "iotree"):
            cat.depth = 1
        for comod in comodule_instances()[inst]():
            rep.merge(check_comodule_laws(comod, cat), prefix=f"{comod.name}: ")
        return rep

    return go


def _suite_coherence(inst):
    def go(params: SuiteParams):
        alg = algebra_instances()[inst]()
        mk = params.max_kleisli or (8 if inst == "io" else 32)
        fams = None
        if inst == "plus":
            fams = {c: families_over(c, [EMPTY, UNIT_T]) for c in default_shape_codes()}
        return check_coherence(alg, families=fams, budget=None, max_kleisli=mk)

    return go


def _suite_representation(params: SuiteParams):
    rep = SuiteReport("representation")
    cat = _catalog(params)
    rep.merge(check_representation_suite(TreeMonad(), cat), prefix="tree: ")
    rep.merge(check_representation_suite(InducedMonad(identity_algebra()), cat), prefix="identity: ")
    return rep


def _suite_io_rho(params: SuiteParams):
    rep = SuiteReport("io-rho")
    depth = min(params.max_depth + 1, 3)
    rep.merge(check_io_monad_laws(depth=depth))
    rep.merge(check_rho_monad_morphism(depth=depth))
    return rep


def _suite_effect_squares(params: SuiteParams):
    from .effects import registered_ambients as amb

    rep = SuiteReport("effect-squares")
    tm = TreeMonad()
    ambients = amb()
    thetas = [identity_theta(S) for S in ambients.values()]
    thetas += [unit_theta(ambients["exception"]), unit_theta(ambients["state2"])]
    for theta in thetas:
        for c in _catalog(params).containers:
            reps = []
            for d in Catalog(max_shapes=1).containers:
                reps += stride_sample(tm.kleisli_morphisms(d, c, depth=1, budget=None), 8)
            rep.merge(check_comodule_morphism_square(theta, c, depth=params.max_depth, reps=reps))
    return rep


def _suite_finite_support(params: SuiteParams):
    from .demos import demo_finite_support_reps

    rep = SuiteReport("finite-support")
    for r in demo_finite_support_reps():
        hs = cointerpret_assignments(r.domain)
        for b in r.codomain.shape_values():
            for h in hs:
                for h2 in hs:
                    rep.attempt(
                        "agree on support ⇒ agree",
                        lambda: None if check_finite_support(r, h, h2, b) else {"b": b, "h": h, "h'": h2},
                    )
    return rep


def _suite_pcont(kind):
    def go(params: SuiteParams):
        from . import pcont

        if kind == "heyting":
            return pcont.check_heyting_suite(max_shapes=min(params.max_shapes, 2))
        return pcont.check_kleisli_suite(max_shapes=min(params.max_shapes, 2))

    return go


def registry() -> dict[str, Callable[[SuiteParams], SuiteReport]]:
    reg = {}
    for inst in monad_instances():
        reg[f"monad-laws:{inst}"] = _suite_monad_laws(inst)
    for inst in comodule_instances():
        reg[f"comodule-laws:{inst}"] = _suite_comodule_laws(inst)
    for inst in algebra_instances():
        reg[f"mendler-coherence:{inst}"] = _suite_coherence(inst)
    reg["representation"] = _suite_representation
    reg["io-rho"] = _suite_io_rho
    reg["effect-squares"] = _suite_effect_squares
    reg["finite-support"] = _suite_finite_support
    reg["pcont-heyting"] = _suite_pcont("heyting")
    reg["pcont-kleisli"] = _suite_pcont("kleisli")
    for fx in mutation_fixtures():
        reg[f"mutant:{fx.name}"] = fx.run
    return reg


def list_suites() -> list[str]:
    return sorted(registry())


def run_suite(name: str, params: SuiteParams | None = None) -> SuiteReport:
    """Run a registered suite; a case budget turns the overflow into SKIPPED cases."""
    params = SuiteParams() if params is None else params
    reg = registry()
    if name not in reg:
        raise UnknownSuite(name)
    if params.budget == 0:
        rep = SuiteReport(name)
        rep.skip(name, 1, "case budget is 0; no cases run")
        return rep
    with case_budget(params.budget):
        rep = reg[name](params)
    rep.name = name
    return rep


# --------------------------------------------------------- seeded bugs


@dataclass
class MutationFixture:
    name: str
    description: str
    suite: Callable[[], SuiteReport]

    def run(self, params: SuiteParams | None = None) -> SuiteReport:
        rep = self.suite()
        rep.name = f"mutant:{self.name}"
        return rep


def _pfst_wrong_base(t, u, composite):
    from .treemonad import Leaf, Step

    if isinstance(t, Leaf):
        return composite  # should be stop
    p = composite.pos
    return Step(p, _pfst_wrong_base(t.child(p), lambda r: u(Step(p, r)), composite.rest))


class _WrongPfstTree(TreeMonad):
    def __init__(self):
        super().__init__()
        self.split = (_pfst_wrong_base, psnd)


class _WrongEtaTree(TreeMonad):
    def eta(self, c):
        m = super().eta(c)
        inner = m.position_map

        def pos(a, pi):
            ps = enumerate_values(c.positions(a))
            return ps[(ps.index(inner(a, pi)) + 1) % len(ps)]  # the neighbouring child

        m.position_map = pos
        return m


class _LostSuffixTree(TreeMonad):
    def __init__(self):
        super().__init__()
        self.split = (pfst, lambda t, u, composite: STOP)


def _cook_trace_stale_state(rn, h, comp, r):
    from .effects import Inp, Ret, TStop, _rewrap, _OUT

    frames = []
    while not isinstance(comp, Ret):
        if isinstance(comp, Inp):
            r, i = rn.co_inp(r)
            frames.append(i)
            comp = comp.kids(i)
        else:
            r = rn.co_out(r, comp.o)
            frames.append(_OUT)
            comp = comp.rest
    _, p = h(comp.value)(r)  # the state left by h is dropped
    return (r, _rewrap(frames, TStop(p)))


def _split_trace_reversed(c, tr):
    from .effects import Inp, Out, Ret, TStop, _rewrap, _OUT

    frames = []
    while not isinstance(c, Ret):
        if isinstance(c, Inp):
            frames.append(tr.i)
            c, tr = c.kids(tr.i), tr.rest
        elif isinstance(c, Out):
            frames.append(_OUT)
            c, tr = c.rest, tr.rest
    return _rewrap(frames[::-1], TStop(tr))  # frames replayed in the wrong order


def _restrict_off_by_one(c, h, s):
    return restrict(h, FiniteSubset(list(s)[:-1]))


def _guarded(name, fn):
    """Run a checker; a crash inside it counts as one failed case."""
    try:
        return fn()
    except Exception as e:
        rep = SuiteReport(name)
        rep.record("checker ran to completion", False, {"error": f"{type(e).__name__}: {e}"})
        return rep


def mutation_fixtures() -> list[MutationFixture]:
    """Seeded bugs, each paired with the suite that must reject it."""
    small = Catalog(max_shapes=2, max_kleisli=16)
    io_rn = runner_zoo()[-1]

    def io_cat():
        return _effect_catalog(SuiteParams(max_depth=1))

    def stale_io_comodule():
        monad = io_single_monad()
        return EffectfulComodule(
            "io-stale-state",
            monad,
            StateTypeMonad(io_rn.state),
            lambda c: stateful_cook_single(io_rn, c, monad, step=_cook_trace_stale_state),
            io_rn,
        )

    def off_by_one_pfin():
        alg = dataclasses.replace(pfin_algebra(), cook=_restrict_off_by_one)
        return pure_as_comodule(InducedMonad(alg))

    def reversed_j():
        alg = io_mendler_algebra()
        return dataclasses.replace(alg, j=lambda q, f, c, tr: _split_trace_reversed(c, tr))

    fixtures = [
        ("tree-pfst-base", "pfst returns the whole path at a leaf", lambda: check_monad_laws(_WrongPfstTree(), small)),
        ("tree-eta-child", "η reports the neighbouring child", lambda: check_monad_laws(_WrongEtaTree(), small)),
        ("tree-mu-suffix", "the second half of a split path is always stop", lambda: check_monad_laws(_LostSuffixTree(), small)),
        (
            "io-cook-state",
            "the single-query cook drops the state change made by the argument",
            lambda: check_comodule_laws(stale_io_comodule(), io_cat()),
        ),
        (
            "io-j-order",
            "j replays the input/output prefix in reverse",
            lambda: check_coherence(reversed_j(), [UNIT_T, BOOL], budget=20_000, max_kleisli=4),
        ),
        (
            "pfin-restrict",
            "cook restricts to the subset minus its last element",
            lambda: check_comodule_laws(off_by_one_pfin(), Catalog(max_shapes=2)),
        ),
    ]
    return [MutationFixture(n, d, lambda n=n, fn=fn: _guarded(f"mutant:{n}", fn)) for n, d, fn in fixtures]


__all__ = [
    "Catalog",
    "MutationFixture",
    "SuiteParams",
    "UnknownSuite",
    "algebra_instances",
    "check_algebra_translation",
    "check_comodule_laws",
    "check_monad_laws",
    "check_representation_suite",
    "comodule_instances",
    "list_suites",
    "monad_instances",
    "mutation_fixtures",
    "pure_as_comodule",
    "registry",
    "run_suite",
]
