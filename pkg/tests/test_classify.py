from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import seeds
from matgen.classify import (
    TransformRecord,
    alpha_candidates,
    alpha_class,
    apply_transform,
    canonical_m2_triple,
    classify_m2_triple,
    classify_m3_quintuple,
    eigen_multiset_invariant,
    equivalent_m3,
    random_record,
    s_alpha,
)
from matgen.errors import DegenerateAlpha, NotIrredundant, SingularConjugator, ZeroScale
from matgen.exactfield import GF, QQ, Scalar
from matgen.genset import is_irredundant_generating
from matgen.linalg import Matrix, eigen_data

F7, F11 = GF(7), GF(11)


def antidiag(f):
    return Matrix(f, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def test_s_alpha_examples():
    assert [eigen_data(m).values() for m in s_alpha(1, F7)][4] == [F7(0), F7(1)]
    ed = eigen_data(s_alpha(1, F7)[4])
    assert sorted(p.multiplicity for p in ed) == [1, 2]
    for a in range(7):
        assert is_irredundant_generating(list(s_alpha(a, F7)))
    with pytest.raises(TypeError):
        s_alpha(3)


def test_record_identity_and_double_transpose():
    S = s_alpha(3, F7)
    assert apply_transform(S, TransformRecord.identity(F7, 3, 5)) == S
    t = TransformRecord(Matrix.identity(F7, 3), True, tuple(range(5)), ((1, 0),) * 5)
    assert apply_transform(apply_transform(S, t), t) == S
    with pytest.raises(SingularConjugator):
        TransformRecord(Matrix.zeros(F7, 3), False, tuple(range(5)), ((1, 0),) * 5)
    with pytest.raises(ZeroScale):
        TransformRecord(Matrix.identity(F7, 3), False, tuple(range(5)), ((0, 0),) + ((1, 0),) * 4)


@pytest.mark.parametrize("f", [F7, F11, QQ], ids=str)
def test_inverse_pair_by_explicit_transform(f):
    alpha = f(3)
    ainv = alpha.inv()
    J = antidiag(f)
    aff = tuple((f.one, f.zero) for _ in range(4)) + ((ainv.value, f.zero),)
    t = TransformRecord(J, False, tuple(range(5)), aff)
    assert set(apply_transform(s_alpha(alpha), t)) == set(s_alpha(ainv))


@given(seed=seeds())
def test_record_compose_and_inverse(seed):
    rng = random.Random(seed)
    S = s_alpha(rng.randrange(7), F7)
    t = random_record(F7, 3, 5, rng)
    u = random_record(F7, 3, 5, rng)
    assert apply_transform(apply_transform(S, t), t.inverse()) == S
    assert apply_transform(apply_transform(S, t), u) == apply_transform(S, t.compose(u))


@given(seed=seeds())
def test_transform_preserves_irredundancy_and_signature(seed):
    rng = random.Random(seed)
    S = s_alpha(rng.randrange(7), F7)
    T = apply_transform(S, random_record(F7, 3, 5, rng))
    assert is_irredundant_generating(list(T))
    assert eigen_multiset_invariant(T) == eigen_multiset_invariant(S)


def test_classify_m2_examples():
    canon = canonical_m2_triple(F7)
    rec, target = classify_m2_triple(*canon)
    assert target == canon and apply_transform(canon, rec) == canon
    with pytest.raises(NotIrredundant):
        classify_m2_triple(Matrix.unit(F7, 2, 0, 1), Matrix.unit(F7, 2, 1, 0), Matrix.identity(F7, 2))


@pytest.mark.parametrize("f", [F7, F11, GF(2, 2), GF(3, 2)], ids=str)
@given(seed=seeds())
@settings(max_examples=20)
def test_classify_m2_round_trip(f, seed):
    rng = random.Random(seed)
    canon = canonical_m2_triple(f)
    S = apply_transform(canon, random_record(f, 2, 3, rng))
    rec, target = classify_m2_triple(*S)
    assert target == canon
    assert apply_transform(S, rec) == canon


def test_classify_m3_examples():
    c = classify_m3_quintuple(s_alpha(3, F7))
    assert {x.value for x in c.reachable} == {3, 5}
    assert apply_transform(s_alpha(3, F7), c.record) == s_alpha(c.alpha)
    assert F7(0) in classify_m3_quintuple(s_alpha(0, F7)).reachable
    js = c.to_json()
    assert js["alpha"] in ("3", "5") and len(js["witnesses"]) == 5


@pytest.mark.parametrize("f", [F7, F11, GF(2, 2), GF(2, 3), GF(3, 2)], ids=str)
@given(seed=seeds())
@settings(max_examples=10)
def test_classify_m3_round_trip(f, seed):
    rng = random.Random(seed)
    elems = f.elements()
    a = Scalar._raw(f, rng.choice(elems))
    S = apply_transform(s_alpha(a), random_record(f, 3, 5, rng))
    c = classify_m3_quintuple(S)
    expected = {a} | ({a.inv()} if a else set())
    assert set(c.reachable) == expected
    assert apply_transform(S, c.record) == s_alpha(c.alpha)
    for delta, rec in c.records.items():
        assert apply_transform(S, rec) == s_alpha(Scalar._raw(f, delta))


@pytest.mark.parametrize("f", [F7, F11], ids=str)
def test_reachable_sets_are_inverse_pairs(f):
    # frozen from exhaustive classification of every s_alpha over the field
    for a in f.elements():
        reach = {x.value for x in classify_m3_quintuple(s_alpha(a, f)).reachable}
        assert reach == ({a, f.inv(a)} if a else {a})


@pytest.mark.parametrize("f", [F7, F11], ids=str)
def test_zero_and_one_are_not_equivalent(f):
    assert not equivalent_m3(s_alpha(0, f), s_alpha(1, f))
    assert equivalent_m3(s_alpha(0, f), s_alpha(0, f))


def test_equivalence_examples():
    assert equivalent_m3(s_alpha(3, F7), s_alpha(5, F7))
    assert not equivalent_m3(s_alpha(2, F7), s_alpha(0, F7))
    rng = random.Random(9)
    S = s_alpha(4, F7)
    assert equivalent_m3(S, apply_transform(S, random_record(F7, 3, 5, rng)))


def _brute_classes(p):
    """Equivalence of s_alpha over GF(p) by scanning GL_3 x transpose x affine maps."""
    codes = np.arange(p**9)
    G = np.stack([(codes // p**k) % p for k in range(9)], axis=1).reshape(-1, 3, 3)
    det = np.round(np.linalg.det(G)).astype(np.int64) % p
    G = G[det != 0]
    # inverse via adjugate
    adj = np.round(np.linalg.inv(G) * np.linalg.det(G)[:, None, None]).astype(np.int64)
    dinv = np.array([pow(int(d), -1, p) for d in np.round(np.linalg.det(G)).astype(np.int64) % p])
    Gi = (adj * dinv[:, None, None]) % p
    I = np.eye(3, dtype=np.int64)
    weights = p ** np.arange(9)

    def sal(a):
        return [m.astype(np.int64) % p for m in (
            np.array([[1, 1, 0], [0, 0, 0], [0, 0, 0]]),
            np.array([[0, 0, 0], [1, 1, 0], [0, 0, 0]]),
            np.array([[0, 0, 0], [0, 1, 1], [0, 0, 0]]),
            np.array([[0, 0, 0], [0, 0, 0], [0, 1, 1]]),
            np.array([[1, 0, 0], [0, 0, 0], [0, 0, a]]),
        )]

    def orbit_code(M):
        # smallest code in the affine orbit {s M + t I}
        best = None
        for s in range(1, p):
            for t in range(p):
                c = (((s * M + t * I) % p).reshape(M.shape[:-2] + (9,)) * weights).sum(-1)
                best = c if best is None else np.minimum(best, c)
        return best

    def equivalent(a, b):
        target = np.sort([int(orbit_code(m)) for m in sal(a)])
        for tr in (False, True):
            mats = [m.T if tr else m for m in sal(b)]
            conj = np.stack([orbit_code(G @ m @ Gi % p) for m in mats], axis=1)
            if (np.sort(conj, axis=1) == target).all(axis=1).any():
                return True
        return False

    return {(a, b): equivalent(a, b) for a in range(p) for b in range(p)}


def test_equivalence_against_group_scan_gf3():
    f = GF(3)
    brute = _brute_classes(3)
    for (a, b), expect in brute.items():
        assert equivalent_m3(s_alpha(a, f), s_alpha(b, f)) == expect
    assert not brute[0, 1]


def test_alpha_candidates_examples():
    assert [x.value for x in alpha_candidates(2, QQ)] == [Fraction(-1), Fraction(1, 2), Fraction(2)]
    ac = alpha_class(2, QQ)
    assert {x.value for x in ac.verified} == {Fraction(2), Fraction(1, 2)}
    with pytest.raises(DegenerateAlpha):
        alpha_candidates(1, F7)
    with pytest.raises(DegenerateAlpha):
        alpha_class(0, F7)


@pytest.mark.parametrize("f", [F7, F11, GF(13)], ids=str)
def test_alpha_class_properties(f):
    for a in f.elements()[2:]:
        ac = alpha_class(a, f)
        vals = {x.value for x in ac.candidates}
        assert len(vals) <= 6 and {a, f.inv(a)} <= vals
        assert {x.value for x in ac.verified} == {a, f.inv(a)}
        assert set(ac.verified) <= set(ac.candidates)


def test_eigen_signature_examples():
    sig = eigen_multiset_invariant(s_alpha(3, F7))
    assert sum(1 for count, _, _ in sig if count == 3) == 1
    sig0 = eigen_multiset_invariant(s_alpha(0, F7))
    assert all(count == 2 for count, _, _ in sig0)


@pytest.mark.parametrize("a", range(7))
def test_eigen_structure_of_classified_sets(a):
    S = s_alpha(a, F7)
    classify_m3_quintuple(S)  # checks the eigen structure internally
    two = sum(1 for m in S if len(eigen_data(m)) == 2)
    assert two >= 4
    for m in S:
        ed = eigen_data(m)
        assert ed.split and sum(p.space.dim for p in ed) == 3

