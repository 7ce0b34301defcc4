import itertools

import pytest

from comodrep.container import Container, container
from comodrep.effects import (
    IOSignature,
    Inp,
    IStep,
    MonadMorphism,
    NotAMonadMorphism,
    OStep,
    Out,
    Ret,
    StateTypeMonad,
    TStop,
    check_comodule_morphism_square,
    check_io_monad_laws,
    check_monad_morphism,
    count_io,
    count_runners,
    counter_runner,
    echo_runner,
    enumerate_io,
    enumerate_runners,
    enumerate_traces,
    io_bind,
    io_single_monad,
    registered_ambients,
    rho,
    run,
    runner_zoo,
    stubborn_runner,
    unit_theta,
)
from comodrep.demos import io_scenario
from comodrep.scenario import evaluate
from comodrep.universe import BOOL, UNIT, UNIT_T, Fin, FunTable

SIG = IOSignature()
READ_THEN_ECHO = Inp(FunTable([(False, Out(False, Ret(0))), (True, Out(True, Ret(1)))]))


def _brute_io_count(n, depth):
    # direct recursion: ret v | inp (one kid per input) | out o then a computation
    if depth == 0:
        return n
    sub = _brute_io_count(n, depth - 1)
    return n + sub**2 + 2 * sub


@pytest.mark.parametrize("depth", [0, 1, 2])
def test_io_enumeration_counts(depth):
    comps = enumerate_io([0, 1], SIG, depth)
    assert len(comps) == count_io(2, SIG, depth) == _brute_io_count(2, depth)
    assert len(set(comps)) == len(comps)


def test_runner_count_formula():
    rs = enumerate_runners(Fin(2), SIG)
    # co_inp: (|R||I|)^|R| choices, co_out: |R|^(|R||O|) choices
    assert len(rs) == count_runners(Fin(2), SIG) == 4**2 * 2**4


def test_run_hand_traces():
    # counter3 from 0: read -> (1, False); write False adds 1 -> 2
    assert run(counter_runner(3), READ_THEN_ECHO, 0) == (2, 0)
    # from 1: read -> (2, True); write True adds 2 -> 1
    assert run(counter_runner(3), READ_THEN_ECHO, 1) == (1, 1)
    # echo: reads the state, writing replaces it
    assert run(echo_runner(), READ_THEN_ECHO, True) == (True, 1)
    assert run(stubborn_runner(), READ_THEN_ECHO, UNIT) == (UNIT, 0)


def test_rho_tabulates_every_state():
    t = rho(counter_runner(3), READ_THEN_ECHO)
    assert t.keys() == [0, 1, 2]
    assert t(2) == run(counter_runner(3), READ_THEN_ECHO, 2)


def test_rho_preserves_bind_for_every_zoo_runner():
    comps = enumerate_io([0, 1], SIG, 1)
    f = {0: Out(True, Ret(False)), 1: Ret(True)}
    for rn in runner_zoo():
        S = StateTypeMonad(rn.state)
        for c in comps:
            lhs = rho(rn, io_bind(f.__getitem__, c))
            rhs = S.bind(lambda v: rho(rn, f[v]), rho(rn, c))
            assert lhs == rhs


def test_io_monad_laws_at_depth_two():
    rep = check_io_monad_laws(depth=2)
    assert rep.ok and rep.passed > 0


def test_traces_follow_the_computation():
    cod = container(Fin(2), BOOL)
    traces = enumerate_traces(READ_THEN_ECHO, cod)
    assert len(traces) == 4
    assert IStep(False, OStep(TStop(True))) in traces


def test_io_single_monad_carrier():
    m = io_single_monad(SIG)
    tc = m.T(container(BOOL, BOOL))
    assert tc.positions(Ret(True)).values() == [TStop(False), TStop(True)]


def test_stateful_demo_hand_trace():
    sc = io_scenario()
    # from 0: counter reads False (state 1); h False 1 = (2, False)
    assert evaluate(sc, sc.argument, UNIT, init=0) == (2, False)
    # from 1: reads True (state 2); writing True moves to 1; h True 1 = (2, True)
    assert evaluate(sc, sc.argument, UNIT, init=1) == (2, True)
    # from 2: reads False (state 0); h False 0 = (1, False)
    assert evaluate(sc, sc.argument, UNIT, init=2) == (1, False)


def test_unit_theta_is_a_monad_morphism():
    for name in ("exception", "state2"):
        assert check_monad_morphism(unit_theta(registered_ambients()[name])).ok


def test_square_rejects_a_non_morphism():
    S = StateTypeMonad(Fin(2))

    def reset(v):
        # forgets the incoming state: not compatible with bind
        return FunTable((r, (0, v(0)[1])) for r in S.states)

    theta = MonadMorphism("reset", S, S, reset)
    assert not check_monad_morphism(theta).ok
    with pytest.raises(NotAMonadMorphism):
        check_comodule_morphism_square(theta, container(BOOL, BOOL), depth=1)


def test_squares_commute_for_exception_and_state():
    c = Container(BOOL, {False: UNIT_T, True: BOOL})
    for name in ("exception", "state2"):
        rep = check_comodule_morphism_square(unit_theta(registered_ambients()[name]), c, depth=2)
        assert rep.ok and rep.passed > 0
