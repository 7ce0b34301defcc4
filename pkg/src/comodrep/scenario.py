"""JSON scenario files: codes, values, containers, trees, runners and representations.

Values are decoded against their type code.  Trees and position readers are
kept as a small syntax tree so that infinitely branching trees can be written
down and emitted again unchanged.  The format is described in docs/format.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .container import Assignment, Container, ContainerMorphism, container
from .effects import (
    EffectfulComodule,
    Inp,
    IOPathType,
    IOSignature,
    IStep,
    OStep,
    Out,
    Ret,
    Runner,
    StateTypeMonad,
    TraceType,
    TStop,
    combined_tree_monad,
    evaluate_rep_S,
    io_single_monad,
    runner_from_tables,
    stateful_cook_single,
    stateful_cook_tree,
    stateful_function,
)
from .mendler import (
    DepProduct,
    FiniteSubset,
    InducedMonad,
    PfinCode,
    exception_instance,
    identity_algebra,
    pfin_algebra,
)
from .representation import Representation, evaluate_rep
from .treemonad import LEAF, STOP, Leaf, Node, PathType, Step, Stop, TreeMonad
from .universe import (
    BOOL,
    EMPTY,
    NAT,
    UNIT,
    UNIT_T,
    Bool,
    Empty,
    Fin,
    FunTable,
    Fun,
    Inl,
    Inr,
    NotEnumerable,
    Opaque,
    Prod,
    Sum,
    TypeMismatch,
    Unit,
    check,
    enumerate_values,
    is_finite,
)

FORMAT = "comodrep/1"


class SchemaError(ValueError):
    pass


def _expect(cond, msg):
    if not cond:
        raise SchemaError(msg)


# -------------------------------------------------------------------- codes


_NAMED = {"empty": EMPTY, "unit": UNIT_T, "bool": BOOL, "nat": NAT}


def code_from_json(j):
    if isinstance(j, str):
        _expect(j in _NAMED, f"unknown type code {j!r}")
        return _NAMED[j]
    _expect(isinstance(j, dict) and len(j) == 1, f"malformed type code {j!r}")
    (tag, arg), = j.items()
    if tag == "fin":
        _expect(isinstance(arg, int) and not isinstance(arg, bool) and arg >= 0, f"fin needs a natural number, got {arg!r}")
        return Fin(arg)
    if tag in ("sum", "prod", "fun"):
        _expect(isinstance(arg, list) and len(arg) == 2, f"{tag} needs two codes")
        left, right = code_from_json(arg[0]), code_from_json(arg[1])
        return {"sum": Sum, "prod": Prod, "fun": Fun}[tag](left, right)
    raise SchemaError(f"unknown type code {tag!r}")


def code_to_json(c):
    if isinstance(c, Empty):
        return "empty"
    if isinstance(c, Unit):
        return "unit"
    if isinstance(c, Bool):
        return "bool"
    if c == NAT:
        return "nat"
    if isinstance(c, Fin):
        return {"fin": c.n}
    if isinstance(c, Sum):
        return {"sum": [code_to_json(c.left), code_to_json(c.right)]}
    if isinstance(c, Prod):
        return {"prod": [code_to_json(c.left), code_to_json(c.right)]}
    if isinstance(c, Fun):
        return {"fun": [code_to_json(c.dom), code_to_json(c.cod)]}
    raise SchemaError(f"code {c!r} has no JSON form")


# ------------------------------------------------------------------- values


def value_from_json(code, j):
    """Decode ``j`` as a value of ``code``; raises SchemaError when ill-typed."""
    v = _decode(code, j)
    if not isinstance(code, (PathType, IOPathType, TraceType)):
        _expect(check(code, v), f"{j!r} is not a value of {code!r}")
    return v


def _decode(code, j):
    if isinstance(code, Unit):
        _expect(j is None, f"unit value must be null, got {j!r}")
        return UNIT
    if isinstance(code, Bool):
        _expect(isinstance(j, bool), f"expected a boolean, got {j!r}")
        return j
    if isinstance(code, (Fin, Opaque)):
        _expect(isinstance(j, int) and not isinstance(j, bool), f"expected an integer, got {j!r}")
        return j
    if isinstance(code, Empty):
        raise SchemaError("the empty type has no values")
    if isinstance(code, Sum):
        _expect(isinstance(j, dict) and len(j) == 1 and next(iter(j)) in ("inl", "inr"), f"expected inl/inr, got {j!r}")
        if "inl" in j:
            return Inl(_decode(code.left, j["inl"]))
        return Inr(_decode(code.right, j["inr"]))
    if isinstance(code, Prod):
        _expect(isinstance(j, list) and len(j) == 2, f"expected a pair, got {j!r}")
        return (_decode(code.left, j[0]), _decode(code.right, j[1]))
    if isinstance(code, Fun):
        return _table(j, lambda k: _decode(code.dom, k), lambda v: _decode(code.cod, v))
    if isinstance(code, DepProduct):
        index = dict(code.index)
        _expect(isinstance(j, list), f"expected a table, got {j!r}")
        rows = []
        for row in j:
            _expect(isinstance(row, list) and len(row) == 2, f"malformed table row {row!r}")
            k = _find_in(list(index), row[0])
            rows.append((k, _decode(index[k], row[1])))
        return FunTable(rows)
    if isinstance(code, (PfinCode,)) or type(code).__name__ == "InhabitedCode":
        _expect(isinstance(j, list), f"expected a list of elements, got {j!r}")
        return FiniteSubset([_decode(code.base, x) for x in j])
    if isinstance(code, PathType):
        return _decode_path(code.container, code.tree, j)
    if isinstance(code, IOPathType):
        return _decode_iopath(code.container, code.tree, j)
    if isinstance(code, TraceType):
        return _decode_trace(code.family, code.comp, j)
    raise SchemaError(f"values of {code!r} have no JSON form")


def _loose(v):
    """Code-free encoding used only to match keys of an explicit index."""
    if v == UNIT and isinstance(v, tuple):
        return None
    if isinstance(v, (bool, int)):
        return v
    if isinstance(v, Inl):
        return {"inl": _loose(v.value)}
    if isinstance(v, Inr):
        return {"inr": _loose(v.value)}
    if isinstance(v, tuple):
        return [_loose(x) for x in v]
    raise SchemaError(f"no loose encoding for {v!r}")


def _table(j, key, val):
    _expect(isinstance(j, list), f"expected a table, got {j!r}")
    rows = []
    for row in j:
        _expect(isinstance(row, list) and len(row) == 2, f"malformed table row {row!r}")
        rows.append((key(row[0]), val(row[1])))
    try:
        return FunTable(rows)
    except TypeMismatch as e:
        raise SchemaError(str(e)) from None


def value_to_json(code, v):
    if isinstance(code, Unit):
        return None
    if isinstance(code, Bool):
        return bool(v)
    if isinstance(code, (Fin, Opaque)):
        return int(v)
    if isinstance(code, Sum):
        return {"inl": value_to_json(code.left, v.value)} if isinstance(v, Inl) else {"inr": value_to_json(code.right, v.value)}
    if isinstance(code, Prod):
        return [value_to_json(code.left, v[0]), value_to_json(code.right, v[1])]
    if isinstance(code, Fun):
        return [[value_to_json(code.dom, k), value_to_json(code.cod, x)] for k, x in v.items()]
    if isinstance(code, DepProduct):
        index = dict(code.index)
        return [[_loose(k), value_to_json(index[k], x)] for k, x in v.items()]
    if isinstance(code, PfinCode) or type(code).__name__ == "InhabitedCode":
        return [value_to_json(code.base, x) for x in v]
    if isinstance(code, PathType):
        out, t = [], code.tree
        while isinstance(v, Step):
            out.append(value_to_json(code.container.positions(t.label), v.pos))
            t, v = t.child(v.pos), v.rest
        return out
    if isinstance(code, IOPathType):
        return _iopath_to_json(code.container, code.tree, v)
    if isinstance(code, TraceType):
        return _trace_to_json(code.family, code.comp, v)
    raise SchemaError(f"values of {code!r} have no JSON form")


def _decode_path(c, t, j):
    _expect(isinstance(j, list), f"a path is a list of positions, got {j!r}")
    steps = []
    for x in j:
        _expect(isinstance(t, Node), f"path {j!r} is longer than its branch")
        p = value_from_json(c.positions(t.label), x)
        steps.append(p)
        t = t.child(p)
    _expect(isinstance(t, Leaf), f"path {j!r} stops before a leaf")
    out = STOP
    for p in reversed(steps):
        out = Step(p, out)
    return out


def _decode_iopath(c, t, j):
    _expect(isinstance(j, list), f"an IO path is a list of steps, got {j!r}")
    frames = []
    for x in j:
        if isinstance(t, Node):
            _expect(isinstance(x, dict) and set(x) == {"q"}, f"expected a query step, got {x!r}")
            p = value_from_json(c.positions(t.label), x["q"])
            frames.append(("q", p))
            t = t.child(p)
        elif isinstance(t, Inp):
            _expect(isinstance(x, dict) and set(x) == {"i"}, f"expected an input step, got {x!r}")
            i = _find_in(t.kids.keys(), x["i"])
            frames.append(("i", i))
            t = t.kids(i)
        elif isinstance(t, Out):
            _expect(x == "o", f"expected an output step, got {x!r}")
            frames.append(("o", None))
            t = t.rest
        else:
            raise SchemaError(f"IO path {j!r} is longer than its branch")
    _expect(isinstance(t, Leaf), f"IO path {j!r} stops before a leaf")
    out = STOP
    for tag, v in reversed(frames):
        out = Step(v, out) if tag == "q" else IStep(v, out) if tag == "i" else OStep(out)
    return out


def _iopath_to_json(c, t, v):
    out = []
    while not isinstance(v, Stop):
        if isinstance(v, Step):
            out.append({"q": value_to_json(c.positions(t.label), v.pos)})
            t = t.child(v.pos)
        elif isinstance(v, IStep):
            out.append({"i": _loose(v.i)})
            t = t.kids(v.i)
        else:
            out.append("o")
            t = t.rest
        v = v.rest
    return out


def _find_in(keys, j):
    for k in keys:
        if _loose(k) == j:
            return k
    raise SchemaError(f"{j!r} is not one of {keys!r}")


def _decode_trace(p, comp, j):
    _expect(isinstance(j, dict) and set(j) == {"steps", "answer"}, f"a trace is {{steps, answer}}, got {j!r}")
    frames = []
    for x in j["steps"]:
        if isinstance(comp, Inp):
            _expect(isinstance(x, dict) and set(x) == {"i"}, f"expected an input step, got {x!r}")
            i = _find_in(comp.kids.keys(), x["i"])
            frames.append(i)
            comp = comp.kids(i)
        elif isinstance(comp, Out):
            _expect(x == "o", f"expected an output step, got {x!r}")
            frames.append(None)
            comp = comp.rest
        else:
            raise SchemaError(f"trace {j!r} is longer than its computation")
    _expect(isinstance(comp, Ret), f"trace {j!r} stops before the computation returns")
    out = TStop(value_from_json(p.positions(comp.value), j["answer"]))
    for fr in reversed(frames):
        out = OStep(out) if fr is None else IStep(fr, out)
    return out


def _trace_to_json(p, comp, v):
    steps = []
    while not isinstance(v, TStop):
        if isinstance(v, IStep):
            steps.append({"i": _loose(v.i)})
            comp = comp.kids(v.i)
        else:
            steps.append("o")
            comp = comp.rest
        v = v.rest
    return {"steps": steps, "answer": value_to_json(p.positions(comp.value), v.p)}


# --------------------------------------------------------------- containers


def container_from_json(j, env: dict | None = None) -> Container:
    env = {} if env is None else env
    if isinstance(j, str):
        _expect(j in env, f"unknown container reference {j!r}")
        return env[j]
    _expect(isinstance(j, dict) and {"shapes", "positions"} <= set(j) <= {"shapes", "positions", "name"}, f"malformed container {j!r}")
    shapes = code_from_json(j["shapes"])
    name = j.get("name", "")
    pos = j["positions"]
    if isinstance(pos, list):
        _expect(is_finite(shapes), "a position table needs finitely many shapes")
        table = _table(pos, lambda a: value_from_json(shapes, a), code_from_json)
        _expect(table.keys() == enumerate_values(shapes), "position table must list every shape once")
        return Container(shapes, dict(table.items()), name=name)
    return container(shapes, code_from_json(pos), name=name)


def container_to_json(c: Container, names: dict | None = None):
    if names and c.name in names and names[c.name] == c:
        return c.name
    out = {"shapes": code_to_json(c.shapes)}
    if is_finite(c.shapes):
        out["positions"] = [[value_to_json(c.shapes, a), code_to_json(p)] for a, p in c.table()]
    else:
        k = c.key
        _expect(isinstance(k, tuple) and k[0] == "const", f"{c!r} has no JSON form")
        out["positions"] = code_to_json(k[2])
    if c.name:
        out["name"] = c.name
    return out


# --------------------------------------------------------- tree expressions


@dataclass(frozen=True)
class Answer:
    """The ``index``-th answer recorded so far (negative counts from the end)."""

    index: int


@dataclass(frozen=True)
class TreeExpr:
    """``kind`` is one of leaf, node, inp, out, ret."""

    kind: str
    label: object = None
    kids: tuple | None = None
    every: "TreeExpr | None" = None


def tree_from_json(c: Container, j, allow=("leaf", "node")) -> TreeExpr:
    if j == "leaf" and "leaf" in allow:
        return TreeExpr("leaf")
    _expect(isinstance(j, dict), f"malformed tree {j!r}")
    if "node" in j and "node" in allow:
        _expect(set(j) in ({"node", "kids"}, {"node", "all"}), f"a node has kids or all, got {sorted(j)}")
        label = _label_from_json(c, j["node"])
        if "all" in j:
            return TreeExpr("node", label, None, tree_from_json(c, j["all"], allow))
        _expect(not isinstance(label, Answer), "a node with explicit kids needs a literal label")
        pcode = c.positions(label)
        kids = _table(j["kids"], lambda p: value_from_json(pcode, p), lambda t: tree_from_json(c, t, allow))
        _expect(kids.keys() == enumerate_values(pcode), f"kids of {label!r} must list every position once")
        return TreeExpr("node", label, tuple(kids.items()))
    if "inp" in j and "inp" in allow:
        _expect(set(j) == {"inp"}, "inp takes only its branches")
        sig = _SIG.get()
        kids = _table(j["inp"], lambda i: value_from_json(sig.inputs, i), lambda t: tree_from_json(c, t, allow))
        _expect(kids.keys() == sig.input_values(), "inp must list every input once")
        return TreeExpr("inp", None, tuple(kids.items()))
    if "out" in j and "out" in allow:
        _expect(set(j) == {"out"} and isinstance(j["out"], list) and len(j["out"]) == 2, "out is [value, rest]")
        sig = _SIG.get()
        return TreeExpr("out", value_from_json(sig.outputs, j["out"][0]), None, tree_from_json(c, j["out"][1], allow))
    if "ret" in j and "ret" in allow:
        _expect(set(j) == {"ret"}, "ret takes only its value")
        return TreeExpr("ret", value_from_json(c.shapes, j["ret"]))
    raise SchemaError(f"malformed tree {j!r}")


def _label_from_json(c, j):
    if isinstance(j, dict) and set(j) == {"answer"}:
        _expect(isinstance(j["answer"], int), "answer index must be an integer")
        return Answer(j["answer"])
    return value_from_json(c.shapes, j)


def tree_to_json(c: Container, e: TreeExpr):
    if e.kind == "leaf":
        return "leaf"
    if e.kind == "ret":
        return {"ret": value_to_json(c.shapes, e.label)}
    sig = _SIG.get()
    if e.kind == "inp":
        return {"inp": [[value_to_json(sig.inputs, i), tree_to_json(c, t)] for i, t in e.kids]}
    if e.kind == "out":
        return {"out": [value_to_json(sig.outputs, e.label), tree_to_json(c, e.every)]}
    label = {"answer": e.label.index} if isinstance(e.label, Answer) else value_to_json(c.shapes, e.label)
    if e.every is not None:
        return {"node": label, "all": tree_to_json(c, e.every)}
    pcode = c.positions(e.label)
    return {"node": label, "kids": [[value_to_json(pcode, p), tree_to_json(c, t)] for p, t in e.kids]}


def build_tree(c: Container, e: TreeExpr, answers=()):
    """Realise an expression; ``answers`` are the query answers on the way down."""
    if e.kind == "leaf":
        return LEAF
    if e.kind == "ret":
        return Ret(e.label)
    if e.kind == "inp":
        return Inp(FunTable(((i, build_tree(c, t, answers)) for i, t in e.kids), presorted=True))
    if e.kind == "out":
        return Out(e.label, build_tree(c, e.every, answers))
    label = answers[e.label.index] if isinstance(e.label, Answer) else e.label
    if e.every is None:
        return Node(label, FunTable((p, build_tree(c, t, answers + (p,))) for p, t in e.kids))
    pcode = c.positions(label)
    sub = e.every
    if is_finite(pcode):
        return Node(label, FunTable((p, build_tree(c, sub, answers + (p,))) for p in enumerate_values(pcode)))
    return Node(label, lambda p: build_tree(c, sub, answers + (p,)))


class _SigVar:
    """The IO signature in force while a document is read or written."""

    def __init__(self):
        self.sig = IOSignature()

    def get(self):
        return self.sig


_SIG = _SigVar()


# ------------------------------------------------------ position readers


@dataclass(frozen=True)
class Eat:
    """Reads an answer off a position of ``T(domain)``: ``answer``, ``const`` or ``table``."""

    kind: str
    arg: object


def answers_of(pos) -> list:
    """Query answers recorded in a position of ``T(C)``, in order."""
    out = []
    while isinstance(pos, (Step, IStep, OStep)):
        if isinstance(pos, Step):
            out.append(pos.pos)
        pos = pos.rest
    if isinstance(pos, TStop):
        out.append(pos.p)
    elif isinstance(pos, FunTable):
        out.extend(pos.values())
    elif not isinstance(pos, (Stop,)):
        out.append(pos)
    return out


def _finite(code) -> bool:
    try:
        return is_finite(code)
    except NotEnumerable:
        return False


def eat_from_json(j, pos_code, out_code) -> Eat:
    _expect(isinstance(j, dict) and len(j) == 1, f"malformed eat {j!r}")
    (tag, arg), = j.items()
    if tag == "answer":
        _expect(isinstance(arg, int) and not isinstance(arg, bool), "answer index must be an integer")
        return Eat("answer", arg)
    if tag == "const":
        return Eat("const", value_from_json(out_code, arg))
    if tag == "table":
        table = _table(arg, lambda x: value_from_json(pos_code, x), lambda q: value_from_json(out_code, q))
        if _finite(pos_code):
            _expect(len(table) == len(enumerate_values(pos_code)), "eat table must cover every position")
        return Eat("table", table)
    raise SchemaError(f"unknown eat form {tag!r}")


def eat_to_json(e: Eat, pos_code, out_code):
    if e.kind == "answer":
        return {"answer": e.arg}
    if e.kind == "const":
        return {"const": value_to_json(out_code, e.arg)}
    return {"table": [[value_to_json(pos_code, k), value_to_json(out_code, v)] for k, v in e.arg.items()]}


def run_eat(e: Eat, pos):
    if e.kind == "answer":
        ans = answers_of(pos)
        try:
            return ans[e.arg]
        except IndexError:
            raise TypeMismatch(f"position {pos!r} has no answer #{e.arg}") from None
    if e.kind == "const":
        return e.arg
    return e.arg(pos)


# ------------------------------------------------------------ monads by name


def monad_by_name(name: str, sig: IOSignature):
    table = {
        "tree": TreeMonad,
        "identity": lambda: InducedMonad(identity_algebra()),
        "exc": lambda: InducedMonad(exception_instance()),
        "pfin": lambda: InducedMonad(pfin_algebra()),
        "io": lambda: io_single_monad(sig),
        "iotree": lambda: combined_tree_monad(sig),
    }
    _expect(name in table, f"unknown monad {name!r}; expected one of {sorted(table)}")
    return table[name]()


_TREE_FORMS = {"tree": ("leaf", "node"), "iotree": ("leaf", "node", "inp", "out"), "io": ("ret", "inp", "out")}


# --------------------------------------------------------- representations


@dataclass
class RepSpec:
    monad: str
    domain: Container
    codomain: Container
    branches: tuple  # (b, shape-or-tree-expression, Eat)
    sig: IOSignature = field(default_factory=IOSignature)

    def build(self) -> Representation:
        mon = monad_by_name(self.monad, self.sig)
        tc = mon.T(self.domain)
        shapes, eats = {}, {}
        for b, shape, eat in self.branches:
            shapes[b] = build_tree(self.domain, shape) if isinstance(shape, TreeExpr) else shape
            eats[b] = eat
        m = ContainerMorphism(
            self.codomain,
            tc,
            lambda b: shapes[b],
            lambda b, pos: run_eat(eats[b], pos),
            name=f"rep[{self.monad}]",
        )
        return Representation(mon, self.domain, self.codomain, m)


def rep_from_json(j, env, sig) -> RepSpec:
    _expect(isinstance(j, dict) and set(j) == {"monad", "domain", "codomain", "branches"}, "representation needs monad, domain, codomain, branches")
    name = j["monad"]
    mon = monad_by_name(name, sig)
    dom, cod = container_from_json(j["domain"], env), container_from_json(j["codomain"], env)
    _expect(is_finite(cod.shapes), "the codomain needs finitely many shapes")
    tc = mon.T(dom)
    _expect(isinstance(j["branches"], list), "branches is a list")
    rows, seen = [], []
    for row in j["branches"]:
        _expect(isinstance(row, list) and len(row) == 2 and isinstance(row[1], dict), f"malformed branch {row!r}")
        _expect(set(row[1]) == {"tree", "eat"}, "a branch has tree and eat")
        b = value_from_json(cod.shapes, row[0])
        if name in _TREE_FORMS:
            expr = tree_from_json(dom, row[1]["tree"], _TREE_FORMS[name])
            pos_code = tc.positions(build_tree(dom, expr))
        else:
            expr = value_from_json(tc.shapes, row[1]["tree"])
            pos_code = tc.positions(expr)
        eat = eat_from_json(row[1]["eat"], pos_code, cod.positions(b))
        rows.append((b, expr, eat))
        seen.append(b)
    _expect(sorted(map(repr, seen)) == sorted(map(repr, enumerate_values(cod.shapes))), "branches must list every codomain shape once")
    return RepSpec(name, dom, cod, tuple(rows), sig)


def rep_to_json(r: RepSpec, names=None):
    mon = monad_by_name(r.monad, r.sig)
    tc = mon.T(r.domain)
    branches = []
    for b, shape, eat in r.branches:
        if isinstance(shape, TreeExpr):
            tree_j = tree_to_json(r.domain, shape)
            pos_code = tc.positions(build_tree(r.domain, shape))
        else:
            tree_j = value_to_json(tc.shapes, shape)
            pos_code = tc.positions(shape)
        branches.append([value_to_json(r.codomain.shapes, b), {"tree": tree_j, "eat": eat_to_json(eat, pos_code, r.codomain.positions(b))}])
    return {
        "monad": r.monad,
        "domain": container_to_json(r.domain, names),
        "codomain": container_to_json(r.codomain, names),
        "branches": branches,
    }


# ------------------------------------------------------------- arguments


BUILTINS = {
    "succ": lambda a: a + 1,
    "id": lambda a: a,
    "zero": lambda a: 0,
    "not": lambda a: not a,
}


@dataclass
class ArgSpec:
    container: Container
    builtin: str | None = None
    table: FunTable | None = None
    state: object = None  # a state code makes the argument stateful

    def build(self):
        if self.state is not None:
            tbl = self.table
            return stateful_function(StateTypeMonad(self.state), self.container, lambda a, r: tbl(a)(r))
        if self.builtin is not None:
            return Assignment(self.container, BUILTINS[self.builtin])
        return Assignment(self.container, self.table)


def arg_from_json(j, env) -> ArgSpec:
    _expect(isinstance(j, dict) and "container" in j, "argument needs a container")
    c = container_from_json(j["container"], env)
    keys = set(j) - {"container"}
    if keys == {"builtin"}:
        _expect(j["builtin"] in BUILTINS, f"unknown builtin {j['builtin']!r}; expected one of {sorted(BUILTINS)}")
        return ArgSpec(c, builtin=j["builtin"])
    if keys == {"table"}:
        t = _table(j["table"], lambda a: value_from_json(c.shapes, a), lambda p: p)
        rows = [(a, value_from_json(c.positions(a), p)) for a, p in t.items()]
        _expect(len(rows) == len(enumerate_values(c.shapes)), "argument table must cover every shape")
        return ArgSpec(c, table=FunTable(rows))
    if keys == {"state", "table"}:
        r_code = code_from_json(j["state"])
        rows = []
        for a_j, per in j["table"]:
            a = value_from_json(c.shapes, a_j)
            inner = _table(per, lambda r: value_from_json(r_code, r), lambda rp: rp)
            _expect(inner.keys() == enumerate_values(r_code), "stateful argument must cover every state")
            vals = []
            for r, rp in inner.items():
                _expect(isinstance(rp, list) and len(rp) == 2, "stateful entries are [state, position]")
                vals.append((r, (value_from_json(r_code, rp[0]), value_from_json(c.positions(a), rp[1]))))
            rows.append((a, FunTable(vals)))
        _expect(len(rows) == len(enumerate_values(c.shapes)), "argument table must cover every shape")
        return ArgSpec(c, table=FunTable(rows), state=r_code)
    raise SchemaError("argument has builtin, table, or state+table")


def arg_to_json(a: ArgSpec, names=None):
    out = {"container": container_to_json(a.container, names)}
    if a.builtin is not None:
        out["builtin"] = a.builtin
    elif a.state is None:
        out["table"] = [[value_to_json(a.container.shapes, k), value_to_json(a.container.positions(k), p)] for k, p in a.table.items()]
    else:
        out["state"] = code_to_json(a.state)
        out["table"] = [
            [
                value_to_json(a.container.shapes, k),
                [[value_to_json(a.state, r), [value_to_json(a.state, r2), value_to_json(a.container.positions(k), p)]] for r, (r2, p) in per.items()],
            ]
            for k, per in a.table.items()
        ]
    return out


# ----------------------------------------------------------------- runners


@dataclass
class RunnerSpec:
    state: object
    init: object
    co_inp: FunTable
    co_out: FunTable
    name: str = ""

    def build(self) -> Runner:
        return runner_from_tables(self.state, dict(self.co_inp.items()), dict(self.co_out.items()), self.init, self.name or "runner")


def runner_from_json(j, sig) -> RunnerSpec:
    _expect(isinstance(j, dict) and {"state", "init", "co_inp", "co_out"} <= set(j) <= {"state", "init", "co_inp", "co_out", "name"}, "runner needs state, init, co_inp, co_out")
    r = code_from_json(j["state"])
    co_inp = _table(j["co_inp"], lambda x: value_from_json(r, x), lambda v: value_from_json(Prod(r, sig.inputs), v))
    co_out = _table(j["co_out"], lambda x: value_from_json(Prod(r, sig.outputs), x), lambda v: value_from_json(r, v))
    _expect(co_inp.keys() == enumerate_values(r), "co_inp must cover every state")
    _expect(len(co_out) == len(enumerate_values(Prod(r, sig.outputs))), "co_out must cover every (state, output)")
    return RunnerSpec(r, value_from_json(r, j["init"]), co_inp, co_out, j.get("name", ""))


def runner_to_json(s: RunnerSpec, sig):
    out = {
        "state": code_to_json(s.state),
        "init": value_to_json(s.state, s.init),
        "co_inp": [[value_to_json(s.state, k), value_to_json(Prod(s.state, sig.inputs), v)] for k, v in s.co_inp.items()],
        "co_out": [[value_to_json(Prod(s.state, sig.outputs), k), value_to_json(s.state, v)] for k, v in s.co_out.items()],
    }
    if s.name:
        out["name"] = s.name
    return out


# --------------------------------------------------------- prop containers


def prop_from_json(j):
    from .pcont import PropContainer

    _expect(isinstance(j, dict) and {"shapes", "pred"} <= set(j) <= {"shapes", "pred", "name"}, "prop container needs shapes and pred")
    shapes = code_from_json(j["shapes"])
    pred = _table(j["pred"], lambda a: value_from_json(shapes, a), lambda p: value_from_json(BOOL, p))
    _expect(pred.keys() == enumerate_values(shapes), "pred must cover every shape once")
    return PropContainer(shapes, pred, j.get("name", ""))


def prop_to_json(p):
    out = {"shapes": code_to_json(p.shapes), "pred": [[value_to_json(p.shapes, a), v] for a, v in p.pred.items()]}
    if p.name:
        out["name"] = p.name
    return out


# --------------------------------------------------------------- documents


_KEYS = ("format", "description", "containers", "io", "runner", "representation", "argument", "at", "prop_container")


@dataclass
class Scenario:
    description: str = ""
    containers: dict = field(default_factory=dict)
    io: IOSignature | None = None
    runner: RunnerSpec | None = None
    representation: RepSpec | None = None
    argument: ArgSpec | None = None
    at: object = None
    has_at: bool = False
    prop_container: object = None

    def signature(self) -> IOSignature:
        return IOSignature() if self.io is None else self.io


def parse_document(j) -> Scenario:
    _expect(isinstance(j, dict), "a scenario document is a JSON object")
    extra = set(j) - set(_KEYS)
    _expect(not extra, f"unknown keys {sorted(extra)}")
    _expect(j.get("format") == FORMAT, f"format must be {FORMAT!r}")
    s = Scenario(description=j.get("description", ""))
    if "io" in j:
        io = j["io"]
        _expect(isinstance(io, dict) and set(io) == {"inputs", "outputs"}, "io needs inputs and outputs")
        s.io = IOSignature(code_from_json(io["inputs"]), code_from_json(io["outputs"]))
    sig = s.signature()
    old, _SIG.sig = _SIG.sig, sig
    try:
        for name, cj in j.get("containers", {}).items():
            _expect(isinstance(cj, dict), f"container {name!r} must be written out")
            c = container_from_json({**cj, "name": name}, s.containers)
            s.containers[name] = c
        if "runner" in j:
            s.runner = runner_from_json(j["runner"], sig)
        if "representation" in j:
            s.representation = rep_from_json(j["representation"], s.containers, sig)
        if "argument" in j:
            s.argument = arg_from_json(j["argument"], s.containers)
        if "at" in j:
            _expect(s.representation is not None, "at needs a representation")
            s.at = value_from_json(s.representation.codomain.shapes, j["at"])
            s.has_at = True
        if "prop_container" in j:
            s.prop_container = prop_from_json(j["prop_container"])
    finally:
        _SIG.sig = old
    return s


def emit_document(s: Scenario) -> dict:
    sig = s.signature()
    old, _SIG.sig = _SIG.sig, sig
    try:
        out = {"format": FORMAT}
        if s.description:
            out["description"] = s.description
        names = dict(s.containers)
        if s.containers:
            out["containers"] = {}
            for n, c in s.containers.items():
                cj = container_to_json(c, None)
                cj.pop("name", None)
                out["containers"][n] = cj
        if s.io is not None:
            out["io"] = {"inputs": code_to_json(s.io.inputs), "outputs": code_to_json(s.io.outputs)}
        if s.runner is not None:
            out["runner"] = runner_to_json(s.runner, sig)
        if s.representation is not None:
            out["representation"] = rep_to_json(s.representation, names)
        if s.argument is not None:
            out["argument"] = arg_to_json(s.argument, names)
        if s.has_at:
            out["at"] = value_to_json(s.representation.codomain.shapes, s.at)
        if s.prop_container is not None:
            out["prop_container"] = prop_to_json(s.prop_container)
        return out
    finally:
        _SIG.sig = old


def load(path) -> Scenario:
    with open(path, encoding="utf-8") as f:
        try:
            j = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: {e}") from None
    return parse_document(j)


def dumps(s: Scenario) -> str:
    return json.dumps(emit_document(s), indent=2, ensure_ascii=False) + "\n"


# -------------------------------------------------------------- evaluation


def evaluate(rep_doc: Scenario, arg: ArgSpec, b, init=None):
    """Evaluate a representation at ``b``; stateful scenarios return ``(final state, value)``."""
    spec = rep_doc.representation
    r = spec.build()
    h = arg.build()
    if spec.monad in ("io", "iotree"):
        _expect(rep_doc.runner is not None, "an IO representation needs a runner")
        rn = rep_doc.runner.build()
        _expect(arg.state == rn.state, "the argument's state type must match the runner's")
        S = StateTypeMonad(rn.state)
        cook = (lambda c: stateful_cook_single(rn, c, r.monad)) if spec.monad == "io" else (lambda c: stateful_cook_tree(rn, c, r.monad))
        comod = EffectfulComodule(spec.monad, r.monad, S, cook, rn)
        start = rn.init if init is None else init
        _expect(check(rn.state, start), f"{start!r} is not a state")
        return evaluate_rep_S(comod, r, h, b, init=start)
    _expect(arg.state is None, "a stateful argument needs an IO representation")
    if h.container != r.domain:
        raise TypeMismatch(f"argument over {h.container!r}, representation expects {r.domain!r}")
    return evaluate_rep(r, h, b)


__all__ = [
    "Answer",
    "ArgSpec",
    "BUILTINS",
    "Eat",
    "FORMAT",
    "RepSpec",
    "RunnerSpec",
    "Scenario",
    "SchemaError",
    "TreeExpr",
    "answers_of",
    "build_tree",
    "code_from_json",
    "code_to_json",
    "container_from_json",
    "container_to_json",
    "dumps",
    "emit_document",
    "evaluate",
    "load",
    "parse_document",
    "prop_from_json",
    "prop_to_json",
    "tree_from_json",
    "tree_to_json",
    "value_from_json",
    "value_to_json",
]
