import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from comodrep.container import container
from comodrep.demos import load_shipped, shipped_scenarios
from comodrep.effects import combined_tree_monad, io_single_monad
from comodrep.lawcheck import Catalog
from comodrep.mendler import InducedMonad, exception_instance, pfin_algebra
from comodrep.scenario import (
    FORMAT,
    SchemaError,
    code_from_json,
    code_to_json,
    dumps,
    emit_document,
    evaluate,
    parse_document,
    value_from_json,
    value_to_json,
)
from comodrep.treemonad import TreeMonad
from comodrep.universe import BOOL, NAT, UNIT, Fin, cardinality, enumerate_values

from strategies import codes


@given(codes())
def test_code_round_trip(code):
    j = code_to_json(code)
    assert code_from_json(json.loads(json.dumps(j))) == code


@given(st.data())
def test_value_round_trip(data):
    code = data.draw(codes().filter(lambda c: cardinality(c) > 0))
    vals = enumerate_values(code)
    v = vals[data.draw(st.integers(0, len(vals) - 1))]
    j = json.loads(json.dumps(value_to_json(code, v)))
    back = value_from_json(code, j)
    assert back == v
    assert type(back) is type(v)


@pytest.mark.parametrize(
    "monad",
    [TreeMonad(), io_single_monad(), combined_tree_monad(), InducedMonad(pfin_algebra()), InducedMonad(exception_instance())],
    ids=lambda m: m.name,
)
def test_positions_of_monad_shapes_round_trip(monad):
    seen = 0
    for c in Catalog(max_shapes=2).containers[:6]:
        tc = monad.T(c)
        for t in monad.sample_shapes(c, 1)[:20]:
            pos = tc.positions(t)
            for q in enumerate_values(pos):
                assert value_from_json(pos, json.loads(json.dumps(value_to_json(pos, q)))) == q
                seen += 1
    assert seen > 0


@pytest.mark.parametrize("name", sorted(shipped_scenarios()))
def test_shipped_files_round_trip(name):
    from comodrep.demos import data_dir

    text = (data_dir() / name).read_text(encoding="utf-8")
    j = json.loads(text)
    assert emit_document(parse_document(j)) == j
    # the files are exactly what the generators produce
    assert text == dumps(shipped_scenarios()[name])


def test_baire_file_evaluates_to_two():
    sc = load_shipped("baire.json")
    # succ(succ(0))
    assert evaluate(sc, sc.argument, UNIT) == 2


def test_identity_file_returns_the_argument():
    sc = load_shipped("identity.json")
    for b in (False, True):
        assert evaluate(sc, sc.argument, b) == (not b)


def _doc(**kw):
    base = {
        "format": FORMAT,
        "containers": {"Flag": {"shapes": "bool", "positions": [[False, "bool"], [True, "bool"]]}},
    }
    base.update(kw)
    return base


@pytest.mark.parametrize(
    "bad",
    [
        {"format": "other/1"},
        _doc(extra=1),
        _doc(containers={"X": {"shapes": {"fin": -1}, "positions": "unit"}}),
        _doc(containers={"X": {"shapes": "bool", "positions": [[False, "unit"]]}}),
        _doc(containers={"X": {"shapes": "colour", "positions": "unit"}}),
        _doc(argument={"container": "Flag", "builtin": "launch"}),
        _doc(argument={"container": "Flag", "table": [[False, 1], [True, True]]}),
        _doc(argument={"container": "Nope", "builtin": "id"}),
        _doc(
            representation={
                "monad": "tree",
                "domain": "Flag",
                "codomain": "Flag",
                "branches": [[False, {"tree": "leaf", "eat": {"const": True}}]],
            }
        ),
        _doc(
            representation={
                "monad": "state",
                "domain": "Flag",
                "codomain": "Flag",
                "branches": [],
            }
        ),
        _doc(at=True),
    ],
)
def test_schema_errors(bad):
    with pytest.raises(SchemaError):
        parse_document(bad)


def test_ill_typed_values_are_rejected():
    with pytest.raises(SchemaError):
        value_from_json(BOOL, 0)
    with pytest.raises(SchemaError):
        value_from_json(Fin(2), 2)
    with pytest.raises(SchemaError):
        value_from_json(Fin(2), True)
    with pytest.raises(SchemaError):
        value_from_json(code_from_json("empty"), None)


def test_infinite_containers_use_a_constant_position_code():
    c = container(NAT, NAT, name="Baire")
    j = emit_document(shipped_scenarios()["baire.json"])
    assert j["containers"]["Baire"] == {"shapes": "nat", "positions": "nat"}
    assert parse_document(j).containers["Baire"] == c
