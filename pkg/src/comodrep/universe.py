"""A small closed universe of types.

Values are plain hashable Python objects:

    unit        ()
    boolean     False / True
    fin index   int
    pair        2-tuple
    inl / inr   :class:`Inl` / :class:`Inr`
    fun-table   :class:`FunTable`
    opaque      any payload accepted by the registered checker (e.g. ``int`` for ``nat``)

Codes are frozen dataclasses.  :class:`Derived` is the escape hatch used by
the other modules for inductive carriers (trees, paths, traces, subsets) that
still need enumeration, cardinality and membership.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields
from typing import Any, Callable, Iterable, Sequence

Value = Any

INFINITE = math.inf
UNIT = ()


class UniverseError(Exception):
    pass


class NotEnumerable(UniverseError):
    def __init__(self, code):
        super().__init__(f"not enumerable: {code!r}")
        self.code = code


class NoComparator(UniverseError):
    def __init__(self, name):
        super().__init__(f"no comparator registered for opaque type {name!r}")
        self.name = name


class TypeMismatch(UniverseError):
    pass


class Budget(UniverseError):
    def __init__(self, limit, what=""):
        super().__init__(f"budget of {limit} exceeded{': ' + what if what else ''}")
        self.limit = limit


# ---------------------------------------------------------------- values


@dataclass(frozen=True)
class Inl:
    value: Value

    def __repr__(self):
        return f"inl({self.value!r})"


@dataclass(frozen=True)
class Inr:
    value: Value

    def __repr__(self):
        return f"inr({self.value!r})"


class FunTable:
    """A finite function given by its graph.

    Entries are stored sorted by the canonical key of their argument, so two
    tables with the same graph compare equal regardless of construction order.
    """

    __slots__ = ("_items", "_lookup", "_hash")

    def __init__(self, items: Iterable[tuple[Value, Value]] = (), presorted: bool = False):
        pairs = list(items.items()) if isinstance(items, dict) else list(items)
        lookup = dict(pairs)
        if len(lookup) != len(pairs):
            raise TypeMismatch("duplicate key in fun-table")
        # presorted: the caller guarantees canonical key order
        self._items = tuple(pairs) if presorted else tuple(sorted(pairs, key=lambda kv: sort_key(kv[0])))
        self._lookup = lookup
        self._hash = None

    def __call__(self, x):
        try:
            return self._lookup[x]
        except KeyError:
            raise TypeMismatch(f"fun-table undefined at {x!r}") from None

    def items(self):
        return self._items

    def keys(self):
        return [k for k, _ in self._items]

    def values(self):
        return [v for _, v in self._items]

    def __contains__(self, x):
        return x in self._lookup

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        return isinstance(other, FunTable) and self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("FunTable", self._items))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k!r}: {v!r}" for k, v in self._items)
        return "{" + body + "}"


def sort_key(v: Value):
    """Structural key realising the canonical enumeration order."""
    if v == () and isinstance(v, tuple):
        return (0,)
    if isinstance(v, bool):
        return (1, int(v))
    if isinstance(v, int):
        return (2, v)
    if isinstance(v, Inl):
        return (3, 0, sort_key(v.value))
    if isinstance(v, Inr):
        return (3, 1, sort_key(v.value))
    if isinstance(v, tuple):
        return (4, tuple(sort_key(x) for x in v))
    if isinstance(v, FunTable):
        return (5, tuple((sort_key(k), sort_key(x)) for k, x in v.items()))
    key = getattr(v, "sort_key", None)
    if key is not None:
        return (6, key())
    return (7, repr(v))


# ----------------------------------------------------------------- codes


class TypeCode:
    """Base class of type codes."""

    def __repr__(self):
        return show_code(self)


@dataclass(frozen=True, repr=False)
class Empty(TypeCode):
    pass


@dataclass(frozen=True, repr=False)
class Unit(TypeCode):
    pass


@dataclass(frozen=True, repr=False)
class Bool(TypeCode):
    pass


@dataclass(frozen=True, repr=False)
class Fin(TypeCode):
    n: int


@dataclass(frozen=True, repr=False)
class Sum(TypeCode):
    left: TypeCode
    right: TypeCode


@dataclass(frozen=True, repr=False)
class Prod(TypeCode):
    left: TypeCode
    right: TypeCode


@dataclass(frozen=True, repr=False)
class Fun(TypeCode):
    dom: TypeCode
    cod: TypeCode


@dataclass(frozen=True, repr=False)
class Opaque(TypeCode):
    name: str


@dataclass(frozen=True, repr=False)
class Listed(TypeCode):
    """A finite code given by an explicit, canonically ordered value list.

    Used for finite Σ- and Π-types whose members are computed by enumeration.
    """

    members: tuple
    label: str = ""

    @staticmethod
    def of(values: Iterable[Value], label: str = "") -> "Listed":
        vals = sorted(set(values), key=sort_key)
        return Listed(tuple(vals), label)


class Derived(TypeCode):
    """Inductive carriers defined by other modules.

    Subclasses provide ``values()`` (raise NotEnumerable when infinite),
    ``size()`` and ``contains(v)``.  Equality goes through ``ident()``.
    """

    def values(self) -> list:
        raise NotEnumerable(self)

    def size(self):
        try:
            return len(self.values())
        except NotEnumerable:
            return INFINITE

    def contains(self, v) -> bool:
        raise NotImplementedError

    def ident(self):
        return id(self)

    def __eq__(self, other):
        return type(self) is type(other) and self.ident() == other.ident()

    def __hash__(self):
        return hash((type(self).__name__, self.ident()))


def _code_hash(self):
    return hash((type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self)))


# field-less codes would otherwise all hash to hash(())
for _cls in (Empty, Unit, Bool, Fin, Sum, Prod, Fun, Opaque, Listed):
    _cls.__hash__ = _code_hash

EMPTY, UNIT_T, BOOL = Empty(), Unit(), Bool()
NAT = Opaque("nat")


def show_code(c: TypeCode) -> str:
    if isinstance(c, Empty):
        return "Empty"
    if isinstance(c, Unit):
        return "Unit"
    if isinstance(c, Bool):
        return "Bool"
    if isinstance(c, Fin):
        return f"Fin({c.n})"
    if isinstance(c, Sum):
        return f"Sum({show_code(c.left)}, {show_code(c.right)})"
    if isinstance(c, Prod):
        return f"Prod({show_code(c.left)}, {show_code(c.right)})"
    if isinstance(c, Fun):
        return f"Fun({show_code(c.dom)}, {show_code(c.cod)})"
    if isinstance(c, Opaque):
        return f"Opaque({c.name!r})"
    if isinstance(c, Listed):
        return f"Listed[{c.label or len(c.members)}]"
    return object.__repr__(c)


# ------------------------------------------------------ opaque registry


@dataclass
class OpaqueInfo:
    check: Callable[[Value], bool]
    eq: Callable[[Value, Value], bool] | None = None
    sampler: Sequence[Value] = ()


_OPAQUE: dict[str, OpaqueInfo] = {}


def register_opaque(name, check, eq=None, sampler=()):
    _OPAQUE[name] = OpaqueInfo(check, eq, tuple(sampler))


def opaque_info(name) -> OpaqueInfo:
    try:
        return _OPAQUE[name]
    except KeyError:
        raise NoComparator(name) from None


register_opaque(
    "nat",
    check=lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 0,
    eq=lambda a, b: a == b,
    sampler=range(6),
)


def samples(code: TypeCode) -> list:
    """All values when enumerable, otherwise the registered probe values."""
    try:
        return enumerate_values(code)
    except NotEnumerable:
        if isinstance(code, Opaque):
            return list(opaque_info(code.name).sampler)
        raise


# ----------------------------------------------------------- operations


def cardinality(code: TypeCode):
    if isinstance(code, Empty):
        return 0
    if isinstance(code, Unit):
        return 1
    if isinstance(code, Bool):
        return 2
    if isinstance(code, Fin):
        return code.n
    if isinstance(code, Sum):
        return cardinality(code.left) + cardinality(code.right)
    if isinstance(code, Prod):
        a, b = cardinality(code.left), cardinality(code.right)
        if a == 0 or b == 0:
            return 0
        return a * b
    if isinstance(code, Fun):
        d, c = cardinality(code.dom), cardinality(code.cod)
        if d == 0:
            return 1
        if c == 0:
            return 0
        if d == INFINITE or c == INFINITE:
            return INFINITE
        return c**d
    if isinstance(code, Opaque):
        return INFINITE
    if isinstance(code, Listed):
        return len(code.members)
    if isinstance(code, Derived):
        return code.size()
    raise TypeMismatch(f"unknown code {code!r}")


def is_finite(code: TypeCode) -> bool:
    return cardinality(code) != INFINITE


def enumerate_values(code: TypeCode) -> list:
    """All values of ``code`` exactly once, in canonical order."""
    if isinstance(code, Empty):
        return []
    if isinstance(code, Unit):
        return [UNIT]
    if isinstance(code, Bool):
        return [False, True]
    if isinstance(code, Fin):
        return list(range(code.n))
    if isinstance(code, Sum):
        return [Inl(v) for v in enumerate_values(code.left)] + [
            Inr(v) for v in enumerate_values(code.right)
        ]
    if isinstance(code, Prod):
        return list(itertools.product(enumerate_values(code.left), enumerate_values(code.right)))
    if isinstance(code, Fun):
        if not is_finite(code.dom) or not is_finite(code.cod):
            raise NotEnumerable(code)
        dom = enumerate_values(code.dom)
        cod = enumerate_values(code.cod)
        return [FunTable(zip(dom, out)) for out in itertools.product(cod, repeat=len(dom))]
    if isinstance(code, Opaque):
        raise NotEnumerable(code)
    if isinstance(code, Listed):
        return list(code.members)
    if isinstance(code, Derived):
        return code.values()
    raise TypeMismatch(f"unknown code {code!r}")


def check(code: TypeCode, v: Value) -> bool:
    """Does ``v`` typecheck against ``code``?"""
    if isinstance(code, Empty):
        return False
    if isinstance(code, Unit):
        return v == () and isinstance(v, tuple)
    if isinstance(code, Bool):
        return isinstance(v, bool)
    if isinstance(code, Fin):
        return isinstance(v, int) and not isinstance(v, bool) and 0 <= v < code.n
    if isinstance(code, Sum):
        if isinstance(v, Inl):
            return check(code.left, v.value)
        if isinstance(v, Inr):
            return check(code.right, v.value)
        return False
    if isinstance(code, Prod):
        return (
            isinstance(v, tuple)
            and len(v) == 2
            and check(code.left, v[0])
            and check(code.right, v[1])
        )
    if isinstance(code, Fun):
        if not isinstance(v, FunTable):
            return False
        dom = enumerate_values(code.dom)
        return len(v) == len(dom) and all(k in v and check(code.cod, v(k)) for k in dom)
    if isinstance(code, Opaque):
        return opaque_info(code.name).check(v)
    if isinstance(code, Listed):
        return v in code.members
    if isinstance(code, Derived):
        return code.contains(v)
    raise TypeMismatch(f"unknown code {code!r}")


def value_eq(code: TypeCode, v: Value, w: Value) -> bool:
    if isinstance(code, Opaque):
        info = opaque_info(code.name)
        if info.eq is None:
            raise NoComparator(code.name)
        return info.eq(v, w)
    if isinstance(code, Sum):
        if isinstance(v, Inl) and isinstance(w, Inl):
            return value_eq(code.left, v.value, w.value)
        if isinstance(v, Inr) and isinstance(w, Inr):
            return value_eq(code.right, v.value, w.value)
        return False
    if isinstance(code, Prod):
        return value_eq(code.left, v[0], w[0]) and value_eq(code.right, v[1], w[1])
    if isinstance(code, Fun):
        return all(value_eq(code.cod, v(k), w(k)) for k in enumerate_values(code.dom))
    return v == w


def enumerate_dependent(index: Sequence[tuple[Value, TypeCode]]) -> list[FunTable]:
    """All choice tables for Π over an explicit finite index."""
    keys = [k for k, _ in index]
    ordered = keys == sorted(keys, key=sort_key)
    pools = [enumerate_values(c) for _, c in index]
    return [FunTable(zip(keys, choice), presorted=ordered) for choice in itertools.product(*pools)]


def sorted_values(values: Iterable[Value]) -> list:
    return sorted(values, key=sort_key)
