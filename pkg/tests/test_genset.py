from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import seeds
from matgen.classify import s_alpha
from matgen.errors import BadSize, CapExceeded, NotGenerating, NotIrredundant
from matgen.exactfield import GF, QQ
from matgen.genset import (
    BlockShape,
    CornerShape,
    block_algebra_basis,
    canonical_irredundant,
    complete_from_corner,
    corner_basis,
    extract_irredundant,
    hat_A,
    hat_matrix,
    hat_set,
    is_irredundant_generating,
    laffey_equiv_check,
    witness_candidates,
    witness_invariant_subspaces,
)
from matgen.linalg import Matrix, Subspace, block_compose, direct_sum
from matgen.matalg import generates, span_close
from matgen.subspace import Pattern, gl_independent, pattern_classify, perp

F5, F7 = GF(5), GF(7)


def u(f, n, i, j):
    return Matrix.unit(f, n, i, j)


def test_canonical_examples():
    assert canonical_irredundant(2, QQ) == [
        Matrix(QQ, [[1, 1], [0, 0]]),
        Matrix(QQ, [[0, 0], [1, 1]]),
        Matrix(QQ, [[1, 0], [0, 0]]),
    ]
    s0 = list(s_alpha(0, F7))
    assert set(canonical_irredundant(3, F7)) == set(s0)
    with pytest.raises(BadSize):
        canonical_irredundant(1, QQ)


@pytest.mark.parametrize("f", [GF(2), GF(3), F7, QQ], ids=str)
@pytest.mark.parametrize("n", range(2, 7))
def test_canonical_is_irredundant_generating(f, n):
    S = canonical_irredundant(n, f)
    assert len(S) == 2 * n - 1
    assert generates(S) and is_irredundant_generating(S)


def test_irredundancy_examples():
    assert is_irredundant_generating(list(s_alpha(3, F7)))
    assert not is_irredundant_generating(canonical_irredundant(3, QQ) + [u(QQ, 3, 0, 0)])


def test_extract_examples():
    units = [u(QQ, 2, i, j) for i in range(2) for j in range(2)]
    T = extract_irredundant(units)
    assert len(T) <= 3 and is_irredundant_generating(T)
    S = canonical_irredundant(3, QQ)
    assert extract_irredundant(S) == S
    assert extract_irredundant([Matrix.identity(QQ, 3)] + S) == S
    with pytest.raises(NotGenerating):
        extract_irredundant([u(QQ, 2, 0, 0)])


def test_golden_block_closure():
    f = QQ
    X11, Y11 = Matrix(f, [[0, 0], [0, 1]]), Matrix.identity(f, 2)
    X1, X2 = Matrix(f, [[1, -1], [0, 0]]), Matrix(f, [[0, 0], [-1, 1]])
    X12, Y21 = Matrix(f, [[0], [-1]]), Matrix(f, [[0, 1]])
    z21, z12, z11 = Matrix.zeros(f, 2, 1), Matrix.zeros(f, 1, 2), Matrix.zeros(f, 1, 1)
    gens = [
        block_compose([[X1, z21], [z12, z11]]),
        block_compose([[X2, z21], [z12, z11]]),
        block_compose([[X11, X12], [z12, z11]]),
        block_compose([[Y11, z21], [Y21, z11]]),
        Matrix.identity(f, 3),
    ]
    A = span_close(gens)
    query = block_compose([[X12 @ Y21, z21], [z12, z11]])
    assert not A.contains(query)
    ones = (1, 1, 1)
    line = Subspace(f, 3, [ones])
    for m in A.matrices():
        assert line.contains(m.apply(ones))
    assert not line.contains(query.apply(ones))


def test_corner_examples():
    S = canonical_irredundant(2, QQ)
    assert complete_from_corner(CornerShape(2, 2, 2), S) == []
    T = complete_from_corner(CornerShape(1, 1, 2), S)
    assert len(T) <= 2 and generates(corner_basis(CornerShape(1, 1, 2), QQ) + T)
    S3 = canonical_irredundant(3, QQ)
    T3 = complete_from_corner(CornerShape(1, 2, 3), S3)
    assert len(T3) <= 3 and generates(corner_basis(CornerShape(1, 2, 3), QQ) + T3)
    with pytest.raises(NotGenerating):
        complete_from_corner(CornerShape(1, 1, 2), [u(QQ, 2, 0, 0)])
    with pytest.raises(BadSize):
        CornerShape(3, 1, 2)


def test_witness_examples():
    W = witness_invariant_subspaces(canonical_irredundant(2, F7))
    fam = W.family
    assert len(set(fam)) == 3 and all(V.dim == 1 for V in fam)
    assert set(fam) == {Subspace(F7, 2, [[0, 1]]), Subspace(F7, 2, [[1, 0]]), Subspace(F7, 2, [[1, -1]])}
    assert gl_independent(fam)[0]
    W3 = witness_invariant_subspaces(list(s_alpha(3, F7)))
    m = pattern_classify(W3.family)
    assert m is not None
    if m.pattern is Pattern.PATTERN2:
        assert pattern_classify([perp(V) for V in W3.family]).pattern is Pattern.PATTERN1
    with pytest.raises(NotIrredundant):
        witness_invariant_subspaces(canonical_irredundant(2, F7) + [Matrix.identity(F7, 2)])


def test_witness_candidates_cover_witness():
    S = list(s_alpha(2, F7))
    W = witness_invariant_subspaces(S)
    for V, cands in zip(W.family, witness_candidates(S)):
        assert V in cands


def test_hat_examples():
    f = F5
    single = BlockShape([(2, 1)])
    x = Matrix(f, [[1, 2], [3, 4]])
    assert hat_matrix(single, x) == [Matrix(f, [[1]])]
    assert hat_matrix(single, Matrix.zeros(f, 2)) == [Matrix(f, [[0]])]
    shape = BlockShape([(1, 2), (1, 1)])
    x = u(f, 3, 0, 1) + u(f, 3, 1, 0)
    assert hat_matrix(shape, x) == [Matrix(f, [[0, 1, 0], [1, 0, 0], [0, 0, 0]])]
    # one block of M_2 repeated twice: cells e11, e12, 0, e11+e12
    two = BlockShape([(2, 2)])
    e11, e12, z = Matrix(f, [[1, 0], [0, 0]]), Matrix(f, [[0, 1], [0, 0]]), Matrix.zeros(f, 2)
    x = block_compose([[e11, e12], [z, e11 + e12]])
    assert hat_matrix(two, x) == [Matrix(f, [[1, 0], [0, 1]]), Matrix(f, [[0, 1], [0, 1]])]


def test_hat_of_block_algebra():
    f = F5
    shape = BlockShape([(1, 2), (2, 1)])
    A = block_algebra_basis(shape, f)
    assert len(A) == 1 + 4 and A[0] == direct_sum(Matrix.identity(f, 2), Matrix.zeros(f, 2))
    hats = hat_set(shape, A)
    assert set(hats) <= set(hat_A(shape, f))
    assert set(hat_A(shape, f)) == {
        direct_sum(Matrix.identity(f, 2) if a else Matrix.zeros(f, 2), Matrix.identity(f, 1) if b else Matrix.zeros(f, 1))
        for a, b in itertools.product((0, 1), repeat=2)
    }


def test_hat_cap():
    shape = BlockShape([(1, 1), (1, 1)])
    x = Matrix(F5, [[1, 2], [3, 4]])
    assert len(hat_matrix(shape, x)) == 1
    wide = BlockShape([(2, 1), (2, 1)])
    y = Matrix(F5, [[1, 2, 1, 2], [3, 4, 3, 0], [1, 0, 1, 1], [0, 1, 2, 3]])
    assert len(hat_matrix(wide, y)) == 1
    big = BlockShape([(1, 2), (1, 2)])
    z = Matrix(F5, [[1, 2, 1, 2], [3, 4, 3, 0], [1, 0, 1, 1], [0, 1, 2, 3]])
    with pytest.raises(CapExceeded):
        hat_matrix(big, z, cap=0)


def test_laffey_examples():
    f = F5
    scal = BlockShape([(1, 3)])
    S = canonical_irredundant(3, f)
    lhs, rhs = laffey_equiv_check(scal, S)
    assert lhs == rhs
    shape = BlockShape([(1, 2), (1, 1)])
    assert laffey_equiv_check(shape, S) == (True, True)
    assert laffey_equiv_check(shape, [Matrix.zeros(f, 3)]) == (False, False)


# properties


@given(n=st.integers(2, 5), seed=seeds())
@settings(max_examples=25)
def test_extract_bound(n, seed):
    rng = random.Random(seed)
    S = canonical_irredundant(n, F5) + [Matrix.random(F5, n, n, rng, density=0.4) for _ in range(rng.randint(0, 4))]
    rng.shuffle(S)
    T = extract_irredundant(S)
    assert len(T) <= 2 * n - 1 and is_irredundant_generating(T)
    assert all(t in S for t in T)


@given(data=st.data(), seed=seeds())
@settings(max_examples=30)
def test_corner_completion_property(data, seed):
    n = data.draw(st.integers(1, 4))
    p, q = data.draw(st.integers(1, n)), data.draw(st.integers(1, n))
    rng = random.Random(seed)
    shape = CornerShape(p, q, n)
    if n == 1:
        S = [Matrix.random(F5, 1, 1, rng)]
    else:
        S = canonical_irredundant(n, F5) + [Matrix.random(F5, n, n, rng, density=0.5) for _ in range(2)]
    rng.shuffle(S)
    T = complete_from_corner(shape, S)
    assert len(T) <= 2 * n - p - q
    assert generates(corner_basis(shape, F5) + T)


@given(alpha=st.integers(0, 6))
def test_witness_family_is_independent(alpha):
    S = list(s_alpha(alpha, F7))
    if not is_irredundant_generating(S):
        return
    W = witness_invariant_subspaces(S)
    assert gl_independent(W.family)[0]
