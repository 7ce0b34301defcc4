"""Suite runs shared between test modules, so each heavy suite runs once per session."""

import time
from functools import lru_cache

from comodrep.lawcheck import SuiteParams, run_suite


@lru_cache(maxsize=None)
def timed(name):
    t0 = time.perf_counter()
    rep = run_suite(name, SuiteParams())
    return rep, time.perf_counter() - t0


def report(name):
    return timed(name)[0]
