"""Monads on containers, comodule representations and the category RFun."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .container import (
    Assignment,
    Container,
    ContainerMorphism,
    SourceTargetMismatch,
    cointerpret_assignments,
    cointerpret_morphism,
    compose_morphisms,
    coproduct,
    identity_container,
    identity_morphism,
    initial_container,
    morphism_difference,
    morphisms_between,
)
from .report import SuiteReport
from .universe import UNIT, TypeMismatch


class MonadMismatch(TypeMismatch):
    pass


class NotAnAlgebra(Exception):
    pass


class MonadOnContainers:
    """A Kleisli triple on Cont, optionally with a comodule structure ``cook``.

    Subclasses implement ``T``, ``eta`` and ``bind``; ``T(C)`` must carry
    ``key == (self.key, C)`` so the base container can be recovered.
    """

    name = "monad"

    @property
    def key(self):
        return self.name

    def T(self, c: Container) -> Container:
        raise NotImplementedError

    def eta(self, c: Container) -> ContainerMorphism:
        raise NotImplementedError

    def bind(self, m: ContainerMorphism) -> ContainerMorphism:
        raise NotImplementedError

    def cook(self, c: Container) -> Callable[[Assignment], Assignment]:
        raise NotImplementedError(f"{self.name} has no comodule structure")

    has_cook = True

    # derived structure

    def base(self, tc: Container) -> Container:
        k = tc.key
        if not (isinstance(k, tuple) and len(k) == 2 and k[0] == self.key):
            raise MonadMismatch(f"{tc!r} is not of the form {self.name}(C)")
        return k[1]

    def mu(self, c: Container) -> ContainerMorphism:
        return self.bind(identity_morphism(self.T(c)))

    def fmap(self, m: ContainerMorphism) -> ContainerMorphism:
        return self.bind(compose_morphisms(self.eta(m.target), m))

    def kleisli_compose(self, g: ContainerMorphism, f: ContainerMorphism) -> ContainerMorphism:
        return compose_morphisms(self.bind(g), f)

    def sample_shapes(self, c: Container, depth: int = 2) -> list:
        return self.T(c).shape_values(depth)

    def kleisli_morphisms(self, c, d, depth: int = 1, budget: int | None = 10_000):
        """Kleisli maps ``c → T(d)`` whose shape map lands in the depth sample."""
        return morphisms_between(c, self.T(d), budget=budget, target_shapes=self.sample_shapes(d, depth))

    def __repr__(self):
        return f"<monad {self.name}>"


# ------------------------------------------------------------ representations


@dataclass
class Representation:
    """A Kleisli map ``codomain → T(domain)``: shape map = tree_F, position map = eat_F."""

    monad: MonadOnContainers
    domain: Container
    codomain: Container
    morphism: ContainerMorphism

    def __post_init__(self):
        if self.morphism.source != self.codomain:
            raise TypeMismatch("representation morphism must start at the codomain")
        if self.morphism.target != self.monad.T(self.domain):
            raise TypeMismatch("representation morphism must land in T(domain)")

    def tree(self, b):
        return self.morphism.shape_map(b)

    def eat(self, b, path):
        return self.morphism.position_map(b, path)


@dataclass
class FunctionalOracle:
    domain: Container
    codomain: Container
    apply: Callable[[Assignment], Assignment]

    def __call__(self, h: Assignment) -> Assignment:
        return self.apply(h)


def evaluate_rep(r: Representation, h: Assignment, b):
    """eat_F(b, cook h (tree_F b))."""
    if h.container != r.domain:
        raise TypeMismatch(f"argument over {h.container!r}, representation expects {r.domain!r}")
    cooked = r.monad.cook(r.domain)(h)
    return r.morphism.position_map(b, cooked(r.morphism.shape_map(b)))


def represented_functional(r: Representation) -> FunctionalOracle:
    return FunctionalOracle(r.domain, r.codomain, lambda h: Assignment(r.codomain, lambda b: evaluate_rep(r, h, b)))


def check_represents(r: Representation, oracle: FunctionalOracle, args=None, shapes=None, budget=None) -> SuiteReport:
    """Compare ``oracle(h)(b)`` with ``evaluate_rep(r, h, b)`` for all h, b."""
    rep = SuiteReport("represents")
    hs = cointerpret_assignments(r.domain) if args is None else list(args)
    bs = r.codomain.shape_values() if shapes is None else list(shapes)
    for h in hs:
        out = oracle(h)
        for b in bs:
            if budget is not None and rep.run >= budget:
                rep.skip("F h b = eat(cook h (tree b))", 1, "budget")
                continue
            lhs, rhs = out(b), evaluate_rep(r, h, b)
            rep.record(
                "F h b = eat(cook h (tree b))",
                lhs == rhs,
                lambda: {"h": h, "b": b, "oracle": lhs, "representation": rhs},
            )
    return rep


def find_representation(monad, oracle: FunctionalOracle, depth: int = 1, budget: int | None = 10_000):
    """First Kleisli map (in enumeration order) representing ``oracle``, or ``None``."""
    hs = cointerpret_assignments(oracle.domain)
    for m in monad.kleisli_morphisms(oracle.codomain, oracle.domain, depth=depth, budget=budget):
        r = Representation(monad, oracle.domain, oracle.codomain, m)
        if check_represents(r, oracle, args=hs).ok:
            return r
    return None


def id_rep(monad: MonadOnContainers, c: Container) -> Representation:
    return Representation(monad, c, c, monad.eta(c))


def compose_reps(g: Representation, f: Representation) -> Representation:
    """Represents ``G ∘ F`` for F : A → B and G : B → C."""
    if g.monad is not f.monad and g.monad.key != f.monad.key:
        raise MonadMismatch("representations over different monads")
    if g.domain != f.codomain:
        raise SourceTargetMismatch("g.domain must equal f.codomain")
    m = compose_morphisms(f.monad.bind(f.morphism), g.morphism)
    return Representation(f.monad, f.domain, g.codomain, m)


def functor_F(monad: MonadOnContainers, m: ContainerMorphism) -> FunctionalOracle:
    """The functional ``⟨⟨m⟩⟩ ∘ cook`` of a Kleisli map ``m : B◁Q → T(A◁P)``."""
    domain = monad.base(m.target)
    cook = monad.cook(domain)
    act = cointerpret_morphism(m)
    return FunctionalOracle(domain, m.source, lambda h: act(cook(h)))


def identity_oracle(c: Container) -> FunctionalOracle:
    return FunctionalOracle(c, c, lambda h: h)


def compose_oracles(g: FunctionalOracle, f: FunctionalOracle) -> FunctionalOracle:
    return FunctionalOracle(f.domain, g.codomain, lambda h: g(f(h)))


@dataclass
class RFunProducts:
    terminal: Container
    bang: Callable[[Container], Representation]
    product: Callable[[Container, Container], Container]
    proj1: Callable[[Container, Container], Representation]
    proj2: Callable[[Container, Container], Representation]
    pair: Callable[[Representation, Representation], Representation]
    split: Callable[[Container, Container, Assignment, Assignment], Assignment]


def rfun_products(monad: MonadOnContainers) -> RFunProducts:
    """Finite products of represented functionals, via coproducts of containers."""
    terminal = initial_container()

    def bang(c):
        tc = monad.T(c)
        m = ContainerMorphism(terminal, tc, _absurd, _absurd, name="!")
        return Representation(monad, c, terminal, m)

    def prod(c, d):
        return coproduct(c, d).obj

    def proj1(c, d):
        cp = coproduct(c, d)
        return Representation(monad, cp.obj, c, compose_morphisms(monad.eta(cp.obj), cp.inl))

    def proj2(c, d):
        cp = coproduct(c, d)
        return Representation(monad, cp.obj, d, compose_morphisms(monad.eta(cp.obj), cp.inr))

    def pair(f, g):
        if f.monad.key != g.monad.key:
            raise MonadMismatch("pairing representations over different monads")
        if f.domain != g.domain:
            raise SourceTargetMismatch("pairing needs a common domain")
        cp = coproduct(f.codomain, g.codomain)
        return Representation(f.monad, f.domain, cp.obj, cp.copair(f.morphism, g.morphism))

    def split(c, d, h, k):
        """The iso ⟨⟨C⟩⟩ × ⟨⟨D⟩⟩ ≅ ⟨⟨C +ᶜ D⟩⟩."""
        from .universe import Inl

        obj = coproduct(c, d).obj
        return Assignment(obj, lambda s: h(s.value) if isinstance(s, Inl) else k(s.value))

    return RFunProducts(terminal, bang, prod, proj1, proj2, pair, split)


def _absurd(*_):
    raise TypeMismatch("no values in the empty type")


# ------------------------------------------------ algebra ↔ comodule


def assignment_to_morphism(h: Assignment) -> ContainerMorphism:
    """⟨⟨C⟩⟩ ≅ Cont(C, Idᶜ)."""
    return ContainerMorphism(h.container, identity_container(), lambda a: UNIT, lambda a, _: h(a))


def morphism_to_assignment(m: ContainerMorphism) -> Assignment:
    return Assignment(m.source, lambda a: m.position_map(a, UNIT))


def alpha_from_cook(monad: MonadOnContainers) -> ContainerMorphism:
    """The algebra ``T(Idᶜ) → Idᶜ`` obtained from ``cook`` at the generic element."""
    idc = identity_container()
    generic = Assignment(idc, lambda _: UNIT)
    return assignment_to_morphism(monad.cook(idc)(generic))


def cook_from_alpha(monad: MonadOnContainers, alpha: ContainerMorphism):
    """``cook_C h = α ∘ T(ĥ)`` read back as an assignment over ``T(C)``."""

    def cook(c: Container):
        def act(h: Assignment) -> Assignment:
            th = monad.fmap(assignment_to_morphism(h))
            return morphism_to_assignment(compose_morphisms(alpha, th))

        return act

    return cook


def check_algebra(monad: MonadOnContainers, alpha: ContainerMorphism, depth: int = 2) -> SuiteReport:
    """Unit and multiplication laws of a T-algebra on Idᶜ."""
    rep = SuiteReport("algebra-laws")
    idc = identity_container()
    unit_side = compose_morphisms(alpha, monad.eta(idc))
    d = morphism_difference(unit_side, identity_morphism(idc))
    rep.record("α ∘ η = id", d is None, d)
    lhs = compose_morphisms(alpha, monad.mu(idc))
    rhs = compose_morphisms(alpha, monad.fmap(alpha))
    shapes = monad.sample_shapes(monad.T(idc), depth)
    for s in shapes:
        d = morphism_difference(lhs, rhs, [s])
        rep.record("α ∘ μ = α ∘ Tα", d is None, d)
    return rep


class CookFromAlpha(MonadOnContainers):
    """A monad whose comodule structure is rebuilt from an algebra on Idᶜ."""

    def __init__(self, inner: MonadOnContainers, alpha: ContainerMorphism):
        self.inner = inner
        self.alpha = alpha
        self._cook = cook_from_alpha(inner, alpha)
        self.name = inner.name

    @property
    def key(self):
        return self.inner.key

    def T(self, c):
        return self.inner.T(c)

    def eta(self, c):
        return self.inner.eta(c)

    def bind(self, m):
        return self.inner.bind(m)

    def sample_shapes(self, c, depth=2):
        return self.inner.sample_shapes(c, depth)

    def cook(self, c):
        return self._cook(c)


__all__ = [
    "CookFromAlpha",
    "FunctionalOracle",
    "MonadMismatch",
    "MonadOnContainers",
    "NotAnAlgebra",
    "RFunProducts",
    "Representation",
    "alpha_from_cook",
    "assignment_to_morphism",
    "check_algebra",
    "check_represents",
    "compose_oracles",
    "compose_reps",
    "cook_from_alpha",
    "evaluate_rep",
    "find_representation",
    "functor_F",
    "id_rep",
    "identity_oracle",
    "morphism_to_assignment",
    "represented_functional",
    "rfun_products",
]
