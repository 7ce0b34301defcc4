"""Case tallies and counterexample reports shared by every checker."""

from __future__ import annotations

import contextvars
import json
from contextlib import contextmanager
from dataclasses import dataclass, field


class _Allowance:
    __slots__ = ("remaining",)

    def __init__(self, n):
        self.remaining = n


_ALLOWANCE: contextvars.ContextVar = contextvars.ContextVar("case_allowance", default=None)


@contextmanager
def case_budget(n: int | None):
    """Cap the number of cases recorded by every report created inside the block."""
    token = _ALLOWANCE.set(None if n is None else _Allowance(n))
    try:
        yield
    finally:
        _ALLOWANCE.reset(token)


def show(v) -> str:
    return repr(v)


@dataclass
class SuiteReport:
    name: str
    run: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexamples: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    skip_counts: dict = field(default_factory=dict)
    allowance: _Allowance | None = field(default_factory=_ALLOWANCE.get, repr=False, compare=False)

    def all_notes(self) -> list:
        out = list(self.notes)
        for (check, reason), n in self.skip_counts.items():
            out.append(f"skipped {n} case(s) of {check}" + (f": {reason}" if reason else ""))
        return out

    def record(self, check: str, ok: bool, detail=None):
        """Count one case; keep the first counterexample per check name.

        Past the case budget the case is counted as skipped instead.
        """
        allow = self.allowance
        if allow is not None:
            if allow.remaining <= 0:
                self.skip(check, 1, "case budget exhausted")
                return True
            allow.remaining -= 1
        self.run += 1
        if ok:
            self.passed += 1
            return True
        self.failed += 1
        if check not in self.counterexamples:
            d = detail() if callable(detail) else detail
            self.counterexamples[check] = {k: show(v) for k, v in (d or {}).items()}
        return False

    def skip(self, check: str, count: int = 1, reason: str = ""):
        self.skipped += count
        key = (check, reason)
        self.skip_counts[key] = self.skip_counts.get(key, 0) + count

    def attempt(self, check: str, fn, detail=None):
        """Record ``fn()``, which returns a difference (``None`` when equal); exceptions fail the case."""
        try:
            diff = fn()
        except Exception as e:  # a crash is a counterexample too
            diff = {"error": f"{type(e).__name__}: {e}"}
        if diff is None:
            return self.record(check, True)
        return self.record(check, False, lambda: {**(detail() if callable(detail) else detail or {}), **diff})

    def merge(self, other: "SuiteReport", prefix: str = ""):
        self.run += other.run
        self.passed += other.passed
        self.failed += other.failed
        self.skipped += other.skipped
        for k, v in other.counterexamples.items():
            self.counterexamples.setdefault(prefix + k, v)
        for n in other.notes:
            if n not in self.notes:
                self.notes.append(n)
        for (check, reason), n in other.skip_counts.items():
            key = (prefix + check, reason)
            self.skip_counts[key] = self.skip_counts.get(key, 0) + n
        return self

    @property
    def ok(self) -> bool:
        return self.failed == 0

    @property
    def status(self) -> str:
        if self.failed:
            return "FAIL"
        if self.skipped and not self.passed:
            return "SKIPPED"
        return "PASS"

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "status": self.status,
            "run": self.run,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "counterexamples": self.counterexamples,
            "notes": self.all_notes(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [
            f"{self.status}  {self.name}: {self.passed}/{self.run} passed, "
            f"{self.failed} failed, {self.skipped} skipped"
        ]
        for check, ce in self.counterexamples.items():
            lines.append(f"  counterexample [{check}]")
            for k, v in ce.items():
                lines.append(f"    {k} = {v}")
        for n in self.all_notes():
            lines.append(f"  note: {n}")
        return "\n".join(lines)
