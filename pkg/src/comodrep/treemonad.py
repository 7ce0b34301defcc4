"""Well-founded dialogue trees over a container and the tree monad on Cont.

A tree over ``A◁P`` is either :data:`LEAF` or a :class:`Node` whose label is a
shape ``a`` and whose children are indexed by ``P a``.  Children are a
:class:`FunTable` when the position type is finite and a plain callable
otherwise (e.g. trees querying ``nat``).  Paths are :data:`STOP` or
:class:`Step` and are checked against a tree by :func:`conforms`.
"""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass
from typing import Callable

from .container import Assignment, Container, ContainerMorphism, identity_morphism
from .representation import MonadOnContainers
from .universe import (
    Budget,
    Derived,
    FunTable,
    NotEnumerable,
    TypeMismatch,
    check,
    enumerate_values,
    is_finite,
    sort_key,
)


class MalformedPath(TypeMismatch):
    pass


# ------------------------------------------------------------------ values


@dataclass(frozen=True)
class Leaf:
    def sort_key(self):
        return (0,)

    def __repr__(self):
        return "leaf"


class Node:
    """``node(label, kids)``; ``kids`` is a FunTable or a callable.

    Finite nodes are hash-consed, so structurally equal finite trees are the
    same object and equality tests are cheap.
    """

    __slots__ = ("label", "kids", "finite", "_hash", "_paths", "__weakref__")
    _interned: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, label, kids):
        finite = isinstance(kids, FunTable)
        if finite:
            # bool and int positions must not be identified
            key = (sort_key(label), tuple((sort_key(p), _child_id(t)) for p, t in kids.items()))
            hit = cls._interned.get(key)
            if hit is not None:
                return hit
        self = object.__new__(cls)
        self.label = label
        self.kids = kids
        self.finite = finite
        self._paths = None
        self._hash = hash(("node", label, kids)) if finite else hash(("node", label, id(kids)))
        if finite:
            cls._interned[key] = self
        return self

    def child(self, p):
        return self.kids(p)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Node) or self.finite or other.finite:
            return False
        return self.label == other.label and self.kids is other.kids

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Node, (self.label, self.kids))

    def sort_key(self):
        if self.finite:
            return (1, sort_key(self.label), sort_key(self.kids))
        return (1, sort_key(self.label), (9, id(self.kids)))

    def __repr__(self):
        if self.finite:
            body = ", ".join(f"{p!r}: {t!r}" for p, t in self.kids.items())
            return f"node({self.label!r}, {{{body}}})"
        return f"node({self.label!r}, <fn>)"


def _child_id(t):
    return 0 if isinstance(t, Leaf) else id(t)


class Stop:
    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, Stop)

    def __hash__(self):
        return 17

    def sort_key(self):
        return (0,)

    def __repr__(self):
        return "stop"


class Step:
    __slots__ = ("pos", "rest", "_hash")

    def __init__(self, pos, rest):
        self.pos = pos
        self.rest = rest
        self._hash = hash((pos, rest))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Step)
            and self._hash == other._hash
            and self.pos == other.pos
            and self.rest == other.rest
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (1, sort_key(self.pos), self.rest.sort_key())

    def __repr__(self):
        return f"step({self.pos!r}, {self.rest!r})"


LEAF = Leaf()
STOP = Stop()


def node(label, kids) -> Node:
    """Build a node; dict children are frozen into a table."""
    if isinstance(kids, dict):
        kids = FunTable(kids)
    return Node(label, kids)


def leaves_node(c: Container, a) -> Node:
    """``node(a, λ_. leaf)``."""
    pa = c.positions(a)
    if is_finite(pa):
        return Node(a, FunTable((p, LEAF) for p in enumerate_values(pa)))
    return Node(a, _const_leaf)


def _const_leaf(_):
    return LEAF


def path(*positions) -> Step | Stop:
    out = STOP
    for p in reversed(positions):
        out = Step(p, out)
    return out


def path_positions(pi) -> list:
    out = []
    while isinstance(pi, Step):
        out.append(pi.pos)
        pi = pi.rest
    return out


# ------------------------------------------------------- conformance


def is_tree(c: Container, t, depth_limit: int = 64) -> bool:
    """Structural well-typedness of a finite-child tree."""
    if isinstance(t, Leaf):
        return True
    if not isinstance(t, Node) or depth_limit <= 0:
        return False
    if not check(c.shapes, t.label):
        return False
    if not t.finite:
        return True
    pa = c.positions(t.label)
    try:
        ps = enumerate_values(pa)
    except NotEnumerable:
        return all(check(pa, p) for p in t.kids.keys()) and all(is_tree(c, s, depth_limit - 1) for s in t.kids.values())
    return list(t.kids.keys()) == ps and all(is_tree(c, s, depth_limit - 1) for s in t.kids.values())


def conforms(t, pi, c: Container | None = None) -> bool:
    """``pi`` is a root-to-leaf path of ``t``."""
    while True:
        if isinstance(t, Leaf):
            return isinstance(pi, Stop)
        if not isinstance(t, Node) or not isinstance(pi, Step):
            return False
        if t.finite:
            if pi.pos not in t.kids:
                return False
        elif c is None or not check(c.positions(t.label), pi.pos):
            return False
        t, pi = t.child(pi.pos), pi.rest


def depth(t) -> int:
    if isinstance(t, Leaf):
        return 0
    if not t.finite:
        raise NotEnumerable(t)
    return 1 + max((depth(s) for s in t.kids.values()), default=0)


# ----------------------------------------------------------------- cook


def cook_pure(c: Container, h, t):
    """Follow ``h`` from the root: the branch at a node labelled ``a`` is ``h a``."""
    steps = []
    while isinstance(t, Node):
        p = h(t.label)
        steps.append(p)
        t = t.child(p)
    return path(*steps)


# ------------------------------------------------------------ grafting


def graft(t, u: Callable):
    """Replace the leaf reached by each path ``π`` of ``t`` with ``u π``."""
    if isinstance(t, Leaf):
        return u(STOP)
    if t.finite:
        return Node(t.label, FunTable((p, graft(s, _under(u, p))) for p, s in t.kids.items()))
    kids = t.kids
    return Node(t.label, lambda p: graft(kids(p), _under(u, p)))


def _under(u, p):
    return lambda rest: u(Step(p, rest))


def pfst(t, u, composite):
    """The part of a path through ``graft t u`` that lies in ``t``."""
    # the split depends only on where t's leaves are, so u is never consulted
    ps = []
    while isinstance(t, Node):
        if not isinstance(composite, Step):
            raise MalformedPath(f"{composite!r} does not pass through {t!r}")
        p = composite.pos
        ps.append(p)
        t, composite = t.child(p), composite.rest
    out = STOP
    for p in reversed(ps):
        out = Step(p, out)
    return out


def psnd(t, u, composite):
    """The part of a path through ``graft t u`` that lies in the grafted tree."""
    while isinstance(t, Node):
        if not isinstance(composite, Step):
            raise MalformedPath(f"{composite!r} does not pass through {t!r}")
        t, composite = t.child(composite.pos), composite.rest
    return composite


def concat_paths(first, second):
    """Inverse of (pfst, psnd): append ``second`` at the leaf ``first`` reaches."""
    ps = path_positions(first)
    out = second
    for p in reversed(ps):
        out = Step(p, out)
    return out


# -------------------------------------------------------- enumeration


DEFAULT_NODE_BUDGET = 10_000


def count_trees(c: Container, max_depth: int, labels=None) -> int:
    """trees(0) = 1, trees(d+1) = 1 + Σ_a trees(d)^|P a|."""
    labels = enumerate_values(c.shapes) if labels is None else labels
    sizes = [len(enumerate_values(c.positions(a))) for a in labels]
    n = 1
    for _ in range(max_depth):
        n = 1 + sum(n**k for k in sizes)
    return n


def enumerate_trees(c: Container, max_depth: int = 2, labels=None, budget: int | None = DEFAULT_NODE_BUDGET) -> list:
    """All trees of depth ``≤ max_depth``: leaf first, then by label and children."""
    labels = c.shape_values(1) if labels is None else list(labels)
    total = count_trees(c, max_depth, labels)
    if budget is not None and total > budget:
        raise Budget(budget, f"{total} trees of depth ≤ {max_depth}")
    pos = [(a, enumerate_values(c.positions(a))) for a in labels]
    level = [LEAF]
    for _ in range(max_depth):
        nxt = [LEAF]
        for a, ps in pos:
            for kids in itertools.product(level, repeat=len(ps)):
                nxt.append(Node(a, FunTable(zip(ps, kids))))
        level = nxt
    return level


def enumerate_paths(t, c: Container | None = None) -> list:
    if isinstance(t, Leaf):
        return [STOP]
    if t.finite:
        if t._paths is None:
            t._paths = tuple(Step(p, r) for p, s in t.kids.items() for r in enumerate_paths(s))
        return list(t._paths)
    if c is None:
        raise NotEnumerable(t)
    items = [(p, t.child(p)) for p in enumerate_values(c.positions(t.label))]
    return [Step(p, r) for p, s in items for r in enumerate_paths(s, c)]


# ------------------------------------------------------------- carriers


class TreeType(Derived):
    """Tree(A,P) as a code; enumerable only when every node is a leaf-parent."""

    def __init__(self, c: Container):
        self.container = c

    def ident(self):
        return ("Tree", self.container)

    def values(self):
        c = self.container
        if not is_finite(c.shapes):
            raise NotEnumerable(self)
        shapes = enumerate_values(c.shapes)
        if all(is_finite(c.positions(a)) and not enumerate_values(c.positions(a)) for a in shapes):
            return enumerate_trees(c, 1)
        if not shapes:
            return [LEAF]
        raise NotEnumerable(self)

    def contains(self, v):
        return is_tree(self.container, v)

    def __repr__(self):
        return f"Tree{self.container!r}"


class PathType(Derived):
    def __init__(self, c: Container, t):
        self.container = c
        self.tree = t

    def ident(self):
        return ("Path", self.container, self.tree)

    def values(self):
        return enumerate_paths(self.tree, self.container)

    def size(self):
        return len(self.values())

    def contains(self, v):
        return conforms(self.tree, v, self.container)

    def __repr__(self):
        return f"Path({self.tree!r})"


def tree_container(c: Container, key_prefix="tree") -> Container:
    """T(C) = Tree(C) ◁ Path."""

    def sampler(d):
        return enumerate_trees(c, d, labels=c.shape_values(max(d - 1, 0)))

    return Container(TreeType(c), lambda t: PathType(c, t), key=(key_prefix, c), sampler=sampler)


# ---------------------------------------------------------- monad structure


def tree_eta(c: Container, tc: Container | None = None) -> ContainerMorphism:
    tc = tree_container(c) if tc is None else tc

    def pos(a, pi):
        if not (isinstance(pi, Step) and isinstance(pi.rest, Stop)):
            raise MalformedPath(f"{pi!r} is not a one-step path")
        return pi.pos

    return ContainerMorphism(c, tc, lambda a: leaves_node(c, a), pos, name="η")


def kleisli_extend(m: ContainerMorphism, source_tc: Container | None = None, split=None) -> ContainerMorphism:
    """The extension ``T C → T D`` of ``m : C → T D`` by recursive grafting."""
    c = m.source
    tc = tree_container(c) if source_tc is None else source_tc
    first, second = (pfst, psnd) if split is None else split

    memo = {}

    def shape(t):
        if isinstance(t, Leaf):
            return LEAF
        if t.finite:
            hit = memo.get(t)
            if hit is None:
                a = t.label
                hit = memo[t] = graft(m.shape_map(a), lambda q: shape(t.child(m.position_map(a, q))))
            return hit
        a = t.label
        return graft(m.shape_map(a), lambda q: shape(t.child(m.position_map(a, q))))

    pos_memo = {}

    def pos(t, q):
        if isinstance(t, Leaf):
            return STOP
        if t.finite:
            hit = pos_memo.get((t, q))
            if hit is not None:
                return hit
        a = t.label
        fa = m.shape_map(a)
        u = lambda r: shape(t.child(m.position_map(a, r)))  # noqa: E731
        p = m.position_map(a, first(fa, u, q))
        out = Step(p, pos(t.child(p), second(fa, u, q)))
        if t.finite:
            pos_memo[(t, q)] = out
        return out

    return ContainerMorphism(tc, m.target, shape, pos, name="ext")


def tree_mu(c: Container) -> ContainerMorphism:
    return kleisli_extend(identity_morphism(tree_container(c)), tree_container(tree_container(c)))


def tree_map_direct(m: ContainerMorphism) -> Callable:
    """Relabel each node by ``f`` and reindex its children by ``g``; an oracle for T(m)."""

    def go(t):
        if isinstance(t, Leaf):
            return LEAF
        a = t.label
        b = m.shape_map(a)
        qs = enumerate_values(m.target.positions(b))
        return Node(b, FunTable((q, go(t.child(m.position_map(a, q)))) for q in qs))

    return go


def flatten_direct(t):
    """Oracle for μ's shape map: graft the inner trees along the outer tree."""
    if isinstance(t, Leaf):
        return LEAF
    return graft(t.label, lambda q: flatten_direct(t.child(q)))


def tree_cook_component(c: Container):
    def act(h: Assignment) -> Assignment:
        return Assignment(tree_container(c), lambda t: cook_pure(c, h, t))

    return act


class TreeMonad(MonadOnContainers):
    """The tree monad with cook as comodule structure.

    The hooks ``split`` and ``eta_position`` exist so that seeded-bug variants
    can replace exactly one clause.
    """

    name = "tree"

    def __init__(self):
        self.split = (pfst, psnd)

    def T(self, c):
        return tree_container(c, self.key)

    def eta(self, c):
        m = tree_eta(c, self.T(c))
        inner = m.position_map
        m.position_map = lambda a, pi: self.eta_position(a, pi, inner)
        return m

    def eta_position(self, a, pi, inner):
        return inner(a, pi)

    def bind(self, m):
        c = m.source
        return kleisli_extend(m, self.T(c), self.split)

    def cook(self, c):
        tc = self.T(c)

        def act(h):
            return Assignment(tc, lambda t: cook_pure(c, h, t))

        return act

    def sample_shapes(self, c, depth=2):
        return enumerate_trees(c, depth, labels=c.shape_values(max(depth - 1, 0)))


__all__ = [
    "LEAF",
    "STOP",
    "Leaf",
    "MalformedPath",
    "Node",
    "PathType",
    "Step",
    "Stop",
    "TreeMonad",
    "TreeType",
    "concat_paths",
    "conforms",
    "cook_pure",
    "count_trees",
    "depth",
    "enumerate_paths",
    "enumerate_trees",
    "flatten_direct",
    "graft",
    "is_tree",
    "kleisli_extend",
    "leaves_node",
    "node",
    "path",
    "path_positions",
    "pfst",
    "psnd",
    "tree_container",
    "tree_cook_component",
    "tree_eta",
    "tree_map_direct",
    "tree_mu",
]

