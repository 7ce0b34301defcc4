"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from comodrep.universe import BOOL, EMPTY, UNIT_T, Fin, Fun, Prod, Sum, cardinality

LEAVES = st.sampled_from([EMPTY, UNIT_T, BOOL, Fin(0), Fin(1), Fin(3)])


def _small(code):
    return cardinality(code) <= 64


def codes(max_leaves=6):
    def extend(inner):
        return st.one_of(
            st.builds(Sum, inner, inner),
            st.builds(Prod, inner, inner),
            st.builds(Fun, inner, inner),
        )

    return st.recursive(LEAVES, extend, max_leaves=max_leaves).filter(_small)
