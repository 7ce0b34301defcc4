import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from comodrep.universe import (
    BOOL,
    EMPTY,
    NAT,
    UNIT,
    UNIT_T,
    Fin,
    Fun,
    FunTable,
    Inl,
    Inr,
    NotEnumerable,
    Prod,
    Sum,
    TypeMismatch,
    cardinality,
    check,
    enumerate_dependent,
    enumerate_values,
    is_finite,
    samples,
    sort_key,
)

from strategies import codes


@given(codes())
def test_enumeration_matches_cardinality(code):
    vals = enumerate_values(code)
    assert len(vals) == cardinality(code)
    assert len(set(vals)) == len(vals)
    assert all(check(code, v) for v in vals)


@given(codes())
def test_enumeration_is_canonically_sorted(code):
    vals = enumerate_values(code)
    assert vals == sorted(vals, key=sort_key)


@pytest.mark.parametrize("d,c", [(0, 0), (0, 3), (2, 0), (1, 2), (2, 3), (3, 2)])
def test_function_space_size_by_brute_force(d, c):
    brute = sum(1 for _ in itertools.product(range(c), repeat=d))
    assert cardinality(Fun(Fin(d), Fin(c))) == brute
    assert len(enumerate_values(Fun(Fin(d), Fin(c)))) == brute


def test_sum_and_product_sizes():
    assert cardinality(Sum(BOOL, Fin(3))) == 5
    assert cardinality(Prod(BOOL, Fin(3))) == 6
    assert cardinality(Prod(EMPTY, NAT)) == 0
    assert not is_finite(NAT)
    assert not is_finite(Fun(BOOL, NAT))


def test_nat_is_opaque_but_sampled():
    with pytest.raises(NotEnumerable):
        enumerate_values(NAT)
    assert samples(NAT) == list(range(6))
    assert check(NAT, 7) and not check(NAT, -1) and not check(NAT, True)


def test_check_rejects_ill_typed_values():
    assert not check(BOOL, 0)
    assert not check(Fin(2), False)
    assert not check(Fin(2), 2)
    assert not check(UNIT_T, None)
    assert check(UNIT_T, UNIT)
    assert not check(EMPTY, UNIT)
    assert check(Sum(BOOL, UNIT_T), Inr(UNIT))
    assert not check(Sum(BOOL, UNIT_T), Inr(True))
    assert not check(Fun(BOOL, BOOL), FunTable([(False, True)]))


@given(st.lists(st.tuples(st.integers(0, 9), st.booleans()), unique_by=lambda kv: kv[0]))
def test_funtable_graph_equality_ignores_order(pairs):
    assert FunTable(pairs) == FunTable(list(reversed(pairs)))
    assert hash(FunTable(pairs)) == hash(FunTable(list(reversed(pairs))))


def test_funtable_rejects_duplicates_and_missing_keys():
    with pytest.raises(TypeMismatch):
        FunTable([(0, 1), (0, 2)])
    with pytest.raises(TypeMismatch):
        FunTable([(0, 1)])(1)


def test_bool_and_int_values_sort_apart():
    assert sort_key(False) != sort_key(0)
    assert sort_key(True) < sort_key(0)


def test_dependent_product_counts():
    index = [(0, BOOL), (1, Fin(3)), (2, UNIT_T)]
    tables = enumerate_dependent(index)
    assert len(tables) == 2 * 3 * 1
    assert len(set(tables)) == len(tables)


def test_sum_order_puts_left_first():
    assert enumerate_values(Sum(UNIT_T, BOOL)) == [Inl(UNIT), Inr(False), Inr(True)]
