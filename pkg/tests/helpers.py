"""Shared strategies and small oracles for the test modules."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from matgen.exactfield import GF, QQ
from matgen.linalg import Matrix, Subspace

SMALL_FIELDS = [GF(2), GF(3), GF(5), GF(7), GF(2, 2), GF(3, 2), QQ]
FINITE_FIELDS = [f for f in SMALL_FIELDS if f.is_finite]


def element(f):
    """Strategy for raw field elements."""
    if f.is_finite:
        elems = f.elements()
        return st.integers(0, f.order - 1).map(lambda i: elems[i])
    return st.fractions(min_value=-6, max_value=6, max_denominator=4)


def matrices(f, n, m=None):
    m = n if m is None else m
    return st.lists(st.lists(element(f), min_size=m, max_size=m), min_size=n, max_size=n).map(
        lambda rows: Matrix._raw(f, rows)
    )


def subspaces(f, n):
    vec = st.lists(element(f), min_size=n, max_size=n)
    return st.lists(vec, max_size=n).map(lambda vs: Subspace(f, n, vs))


def seeds():
    return st.integers(0, 2**32 - 1)


def rng(seed):
    return random.Random(seed)
