"""Command-line front end.

Exit status: 0 when everything passed, 1 on a law failure or a failed demo,
2 on usage, schema or type errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .demos import DEMOS, UnknownDemo, run_demo
from .lawcheck import SuiteParams, UnknownSuite, list_suites, run_suite
from .scenario import SchemaError, evaluate, load, value_from_json, value_to_json
from .universe import Budget, TypeMismatch

BUDGET_ENV = "COMODULE_BUDGET"


class UsageError(Exception):
    pass


def _env_budget():
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError(f"{BUDGET_ENV} must be non-negative")
    return n


def cmd_check_laws(args, out) -> int:
    budget = args.budget if args.budget is not None else _env_budget()
    if budget is not None and budget < 0:
        raise UsageError("--budget must be non-negative")
    params = SuiteParams(max_shapes=args.max_shapes, max_depth=args.max_depth, budget=budget)
    names = list_suites() if args.suite == ["all"] else args.suite
    unknown = [n for n in names if n not in list_suites()]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; see list-suites")
    if budget == 0:
        print("warning: case budget is 0, no cases were run", file=sys.stderr)
    reports = [run_suite(n, params) for n in names]
    if args.format == "json":
        body = [r.to_dict() for r in reports]
        print(json.dumps(body[0] if len(body) == 1 else body, indent=2, sort_keys=True, ensure_ascii=False), file=out)
    else:
        for r in reports:
            print(r.to_text(), file=out)
    return 0 if all(r.ok for r in reports) else 1


def cmd_eval(args, out) -> int:
    rep_doc = load(args.rep)
    if rep_doc.representation is None:
        raise SchemaError(f"{args.rep}: no representation")
    arg_doc = load(args.arg) if args.arg else rep_doc
    if arg_doc.argument is None:
        raise SchemaError(f"{args.arg or args.rep}: no argument")
    spec = rep_doc.representation
    if args.at is not None:
        at = value_from_json(spec.codomain.shapes, _json_arg(args.at, "--at"))
    elif rep_doc.has_at:
        at = rep_doc.at
    else:
        raise UsageError("--at is required when the file has no 'at'")
    init = None
    if args.state is not None:
        if rep_doc.runner is None:
            raise UsageError("--state needs a scenario with a runner")
        init = value_from_json(rep_doc.runner.state, _json_arg(args.state, "--state"))
    result = evaluate(rep_doc, arg_doc.argument, at, init=init)
    pos = spec.codomain.positions(at)
    if spec.monad in ("io", "iotree"):
        st = rep_doc.runner.state
        print(f"(final state, value) = ({_show(st, result[0])}, {_show(pos, result[1])})", file=out)
    else:
        print(_show(pos, result), file=out)
    return 0


def _show(code, v) -> str:
    return json.dumps(value_to_json(code, v), ensure_ascii=False)


def _json_arg(text, flag):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"{flag} takes a JSON value, got {text!r}") from None


def cmd_reduce(args, out) -> int:
    from .pcont import functional_instance_reduce, instance_reducible

    src, dst = load(args.from_file), load(args.to_file)
    for path, doc in ((args.from_file, src), (args.to_file, dst)):
        if doc.prop_container is None:
            raise SchemaError(f"{path}: no prop_container")
    bq, ap = src.prop_container, dst.prop_container
    t = functional_instance_reduce(ap, bq)
    if args.functional:
        if t is None:
            print("irreducible", file=out)
            return 0
        print("functional reduction found:", file=out)
    else:
        if not instance_reducible(ap, bq):
            print("irreducible", file=out)
            return 0
        print("instance reducible; witnesses per instance:", file=out)
    ident = ap.shapes == bq.shapes and all(t(b) == b for b in t.keys())
    if ident:
        print("  identity", file=out)
    for b, a in t.items():
        print(f"  {_show(bq.shapes, b)} ↦ {_show(ap.shapes, a)}", file=out)
    return 0


def cmd_demo(args, out) -> int:
    if args.name not in DEMOS:
        raise UnknownDemo(args.name)
    rep = run_demo(args.name, with_laws=not args.no_laws)
    print(rep.text(), file=out)
    return 0 if rep.ok else 1


def cmd_list_suites(args, out) -> int:
    for n in list_suites():
        print(n, file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="comodrep", description="Containers, comodules and representations of second-order functionals.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-laws", help="run law suites")
    c.add_argument("--suite", action="append", required=True, help="suite name (repeatable), or 'all'")
    c.add_argument("--max-shapes", type=int, default=2)
    c.add_argument("--max-depth", type=int, default=2)
    c.add_argument("--budget", type=int, default=None, help=f"case budget per suite (default: ${BUDGET_ENV} or unlimited)")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(fn=cmd_check_laws)

    e = sub.add_parser("eval", help="evaluate a representation on an argument")
    e.add_argument("--rep", required=True)
    e.add_argument("--arg", help="file holding the argument (default: the --rep file)")
    e.add_argument("--at", help="codomain shape as JSON (default: the file's 'at')")
    e.add_argument("--state", help="initial runner state as JSON")
    e.set_defaults(fn=cmd_eval)

    r = sub.add_parser("reduce", help="search an instance reduction between prop containers")
    r.add_argument("--from", dest="from_file", required=True, help="problem to reduce (B ◁ Q)")
    r.add_argument("--to", dest="to_file", required=True, help="problem reduced to (A ◁ P)")
    r.add_argument("--functional", action="store_true", help="ask for a map B → A")
    r.set_defaults(fn=cmd_reduce)

    d = sub.add_parser("demo", help="run a worked example")
    d.add_argument("name", help=", ".join(DEMOS))
    d.add_argument("--no-laws", action="store_true", help="skip the law-suite verdict")
    d.set_defaults(fn=cmd_demo)

    ls = sub.add_parser("list-suites", help="list registered law suites")
    ls.set_defaults(fn=cmd_list_suites)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return args.fn(args, out)
    except (UsageError, UnknownSuite) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except UnknownDemo as e:
        print(f"error: unknown demo {e.args[0]!r}; expected one of {', '.join(DEMOS)}", file=sys.stderr)
        return 2
    except (SchemaError, TypeMismatch) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except Budget as e:
        print(f"error: search budget exceeded: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
