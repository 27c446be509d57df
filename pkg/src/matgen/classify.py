"""Canonical forms of maximal irredundant generating sets under simultaneous
conjugation, simultaneous transposition and per-matrix affine changes
a -> alpha*a + beta*I.

Triples in M_2 normalize to a single canonical triple.  Quintuples in M_3
normalize to the one-parameter family ``s_alpha``; since the normal form is
not unique, :func:`classify_m3_quintuple` follows every admissible
normalization path and reports the whole set of reachable parameters.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .errors import (
    DegenerateAlpha,
    DimensionMismatch,
    Inconclusive,
    InternalPatternFailure,
    NotIrredundant,
    NotSplit,
    SingularConjugator,
    ZeroScale,
)
from .exactfield import Field, Scalar, random_element
from .genset import canonical_irredundant, is_irredundant_generating, witness_candidates, witness_invariant_subspaces
from .linalg import Matrix, eigen_data, solve_raw
from .matalg import _common_shape
from .subspace import Pattern, gl_independent, intersect, pattern_labelings, perp

__all__ = [
    "AlphaClass",
    "M3Classification",
    "TransformRecord",
    "alpha_candidates",
    "alpha_class",
    "apply_transform",
    "canonical_m2_triple",
    "classify_m2_triple",
    "classify_m3_quintuple",
    "eigen_multiset_invariant",
    "equivalent_m3",
    "random_record",
    "s_alpha",
]


def s_alpha(alpha, field: Field | None = None) -> tuple[Matrix, ...]:
    """The five-element family with diag(1, 0, alpha) last."""
    if field is None:
        if not isinstance(alpha, Scalar):
            raise TypeError("pass a Scalar or an explicit field")
        field = alpha.field
    a = field.convert(alpha)
    o, z = field.one, field.zero
    return (
        Matrix._raw(field, [[o, o, z], [z, z, z], [z, z, z]]),
        Matrix._raw(field, [[z, z, z], [o, o, z], [z, z, z]]),
        Matrix._raw(field, [[z, z, z], [z, o, o], [z, z, z]]),
        Matrix._raw(field, [[z, z, z], [z, z, z], [z, o, o]]),
        Matrix._raw(field, [[o, z, z], [z, z, z], [z, z, a]]),
    )


def canonical_m2_triple(field: Field) -> tuple[Matrix, ...]:
    return tuple(canonical_irredundant(2, field))


@dataclass(frozen=True)
class TransformRecord:
    """m_k -> C (alpha_k * m_{perm[k]} + beta_k I)^(t if transpose) C^{-1}.

    The order is fixed: permute, then affine, then transpose, then conjugate.
    Affine pairs are indexed by output position and stored as raw values.
    """

    conjugator: Matrix
    transpose: bool
    perm: tuple
    affine: tuple

    def __post_init__(self):
        f = self.conjugator.field
        if not self.conjugator.is_square or not self.conjugator.det():
            raise SingularConjugator("conjugator must be invertible")
        if sorted(self.perm) != list(range(len(self.perm))) or len(self.affine) != len(self.perm):
            raise DimensionMismatch("perm must be a permutation matching the affine pairs")
        if any(not a for a, _ in self.affine):
            raise ZeroScale("affine scale must be nonzero")

    @property
    def field(self) -> Field:
        return self.conjugator.field

    @classmethod
    def identity(cls, field: Field, n: int, r: int) -> TransformRecord:
        return cls(Matrix.identity(field, n), False, tuple(range(r)), tuple((field.one, field.zero) for _ in range(r)))

    def compose(self, other: TransformRecord) -> TransformRecord:
        """The record applying ``self`` first, then ``other``."""
        f = self.field
        perm = tuple(self.perm[other.perm[k]] for k in range(len(other.perm)))
        affine = []
        for k, (a2, b2) in enumerate(other.affine):
            a1, b1 = self.affine[other.perm[k]]
            affine.append((f.mul(a2, a1), f.add(f.mul(a2, b1), b2)))
        c1 = self.conjugator.inverse().T if other.transpose else self.conjugator
        return TransformRecord(other.conjugator @ c1, self.transpose != other.transpose, perm, tuple(affine))

    def inverse(self) -> TransformRecord:
        f = self.field
        inv_perm = [0] * len(self.perm)
        for k, j in enumerate(self.perm):
            inv_perm[j] = k
        affine = []
        for j in range(len(self.perm)):
            a, b = self.affine[inv_perm[j]]
            ai = f.inv(a)
            affine.append((ai, f.neg(f.mul(b, ai))))
        c = self.conjugator.T if self.transpose else self.conjugator.inverse()
        return TransformRecord(c, self.transpose, tuple(inv_perm), tuple(affine))

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "order": "permute, affine, transpose, conjugate",
            "conjugator": self.conjugator.to_strings(),
            "transpose": self.transpose,
            "perm": list(self.perm),
            "affine": [[fmt(a), fmt(b)] for a, b in self.affine],
        }


def apply_transform(S, t: TransformRecord) -> tuple[Matrix, ...]:
    S = list(S)
    if len(S) != len(t.perm):
        raise DimensionMismatch(f"record for {len(t.perm)} matrices applied to {len(S)}")
    C = t.conjugator
    Ci = C.inverse()
    out = []
    for k, j in enumerate(t.perm):
        a, b = t.affine[k]
        m = S[j]._affine_raw(a, b)
        if t.transpose:
            m = m.T
        out.append(C @ m @ Ci)
    return tuple(out)


def random_record(field: Field, n: int, r: int, rng: random.Random) -> TransformRecord:
    perm = list(range(r))
    rng.shuffle(perm)
    affine = tuple((random_element(field, rng, nonzero=True), random_element(field, rng)) for _ in range(r))
    return TransformRecord(Matrix.random_invertible(field, n, rng), rng.random() < 0.5, tuple(perm), affine)


def _eigenvalue(m: Matrix, v) -> object:
    """The eigenvalue of m on v; InternalPatternFailure if v is not an eigenvector."""
    f = m.field
    w = m.apply(v)
    i = next(k for k, x in enumerate(v) if x)
    lam = f.div(w[i], v[i])
    if any(f.sub(wk, f.mul(lam, vk)) for wk, vk in zip(w, v)):
        raise InternalPatternFailure("expected an eigenvector")
    return lam


def _normalizer(m: Matrix, zero_vec, one_vec):
    """(alpha, beta) with alpha*m + beta*I killing zero_vec and fixing one_vec."""
    f = m.field
    lz, lo = _eigenvalue(m, zero_vec), _eigenvalue(m, one_vec)
    d = f.sub(lo, lz)
    if not d:
        raise InternalPatternFailure("normalizing eigenvalues coincide")
    alpha = f.inv(d)
    return alpha, f.neg(f.mul(lz, alpha))


def _unit(f, n, i):
    return tuple(f.one if j == i else f.zero for j in range(n))


def classify_m2_triple(a1: Matrix, a2: Matrix, a3: Matrix) -> tuple[TransformRecord, tuple[Matrix, ...]]:
    """Record t with apply_transform((a1, a2, a3), t) equal to the canonical triple."""
    S = [a1, a2, a3]
    S, n, f = _common_shape(S)
    if n != 2:
        raise DimensionMismatch("classify_m2_triple needs 2x2 matrices")
    if not is_irredundant_generating(S):
        raise NotIrredundant("input is not an irredundant generating triple")
    W = witness_invariant_subspaces(S)
    v1, v2, v3 = (V.basis[0] for V in W.subspaces)
    # v3 = x v2 + y v1; h = [x v2 | -y v1] sends e1, e2, e1 - e2 to V2, V1, V3
    cols = [list(v2), list(v1)]
    x, y = solve_raw(f, [list(r) for r in zip(*cols)], v3, 2)
    h = Matrix.from_columns(f, [[f.mul(x, c) for c in v2], [f.neg(f.mul(y, c)) for c in v1]])
    g = h.inverse()
    conj = [g @ a @ h for a in S]
    e1, e2 = _unit(f, 2, 0), _unit(f, 2, 1)
    d = (f.one, f.neg(f.one))
    affine = (_normalizer(conj[0], d, e1), _normalizer(conj[1], d, e2), _normalizer(conj[2], e2, e1))
    t = TransformRecord(g, False, (0, 1, 2), affine)
    target = canonical_m2_triple(f)
    out = apply_transform(S, t)
    if out != target:
        raise InternalPatternFailure("M_2 normalization did not reach the canonical triple")
    return t, target


@dataclass
class M3Classification:
    alpha: Scalar
    reachable: list
    record: TransformRecord
    witnesses: tuple
    paths: int = 0
    records: dict = dc_field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "reachable": [str(a) for a in self.reachable],
            "record": self.record.to_json(),
            "witnesses": [[[self.alpha.field.format(x) for x in r] for r in V.basis] for V in self.witnesses],
            "paths": self.paths,
        }


_TARGET_SPECS = {
    # role -> (vector killed, vector fixed) in the frame e1 = L1, e2 = L2, e3 = P1 ∩ P2
    "L1": (1, 2),
    "L2": (0, 2),
    "P1": (0, 1),
    "P2": (1, 0),
}


def _frame_paths(S, family, match, f):
    """Yield (record, delta) for every normalization path through one labeled family."""
    n = 3
    transpose = match.pattern is Pattern.PATTERN2
    mats = [a.T for a in S] if transpose else list(S)
    fam = [perp(V) for V in family] if transpose else list(family)
    if transpose:
        lab = pattern_labelings(fam)
        # the perp family inherits the labeling with lines and planes swapped
        r = match.roles
        roles = (r[2], r[3], r[4], r[0], r[1])
        if not any(m.roles == roles for m in lab):
            raise InternalPatternFailure("perp of a Pattern2 labeling is not a Pattern1 labeling")
    else:
        roles = match.roles
    iL1, iL2, iL3, iP1, iP2 = roles
    v1, v2, v3 = fam[iL1].basis[0], fam[iL2].basis[0], fam[iL3].basis[0]
    v0 = intersect(fam[iP1], fam[iP2])
    if v0.dim != 1:
        raise InternalPatternFailure("the two planes must meet in a line")
    v0 = v0.basis[0]
    coeffs = solve_raw(f, [list(r) for r in zip(v1, v2, v0)], v3, 3)
    if coeffs is None or not all(coeffs):
        raise InternalPatternFailure("the frame vectors are not in general position")
    M = Matrix.from_columns(f, [[f.mul(c, x) for x in v] for c, v in zip(coeffs, (v1, v2, v0))])
    g = M.inverse()
    conj = [g @ a @ M for a in mats]
    affine = [None] * 5
    for role, idx in zip(("L1", "L2", "P1", "P2"), (iL1, iL2, iP1, iP2)):
        z, o = _TARGET_SPECS[role]
        affine[idx] = _normalizer(conj[idx], _unit(f, n, z), _unit(f, n, o))
    d = conj[iL3]
    if any(d.rows[i][j] for i in range(3) for j in range(3) if i != j) or d.is_scalar():
        raise InternalPatternFailure("the matrix attached to the third line must be diagonal, non-scalar")
    P = Matrix(f, [[1, 0, 0], [0, 0, -1], [0, 1, 0]])
    J = Matrix(f, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    da, db, dc = d.rows[0][0], d.rows[1][1], d.rows[2][2]  # P conjugation gives diag(da, dc, db)
    branches = []
    if da != dc:
        branches.append((P @ g, da, dc, db))
    if db != dc:
        branches.append((J @ P @ g, db, dc, da))
    for C, x, y, z in branches:
        # diag(x, y, z) -> diag(1, 0, delta) via (m - y I) / (x - y)
        s = f.inv(f.sub(x, y))
        delta = f.mul(f.sub(z, y), s)
        aff = list(affine)
        aff[iL3] = (s, f.neg(f.mul(s, y)))
        # match transformed matrices with the positions of s_alpha(delta)
        target = s_alpha(Scalar._raw(f, delta))
        Ci = C.inverse()
        outs = []
        for j in range(5):
            m = mats[j]._affine_raw(*aff[j])
            outs.append(C @ m @ Ci)
        perm = []
        for tm in target:
            hits = [j for j, m in enumerate(outs) if m == tm]
            if len(hits) != 1:
                raise InternalPatternFailure("normalized set does not match the canonical family")
            perm.append(hits[0])
        rec = TransformRecord(C, transpose, tuple(perm), tuple(aff[j] for j in perm))
        yield rec, delta


def _assert_eigen_structure(S, f):
    """Each member diagonalizable over f; at least four with exactly two eigenvalues."""
    two = 0
    for a in S:
        ed = eigen_data(a)
        if not ed.split or sum(p.space.dim for p in ed) != a.nrows:
            raise InternalPatternFailure("a member of a classified set is not diagonalizable")
        if len(ed) == 2:
            two += 1
    if two < 4:
        raise InternalPatternFailure("fewer than four members with exactly two eigenvalues")


def classify_m3_quintuple(S, check: bool = True) -> M3Classification:
    """Normalize a 5-element irredundant generating set of M_3 to s_alpha.

    Every witness family (one invariant subspace per member), every pattern
    labeling, and both branches of the final swap are followed; the recorded
    transform is the one from the first path, and ``reachable`` collects all
    parameters reached.
    """
    S, n, f = _common_shape(S)
    if n != 3 or len(S) != 5:
        raise DimensionMismatch("classify_m3_quintuple needs five 3x3 matrices")
    if not is_irredundant_generating(S):
        raise NotIrredundant("input is not an irredundant generating set")
    cands = witness_candidates(S)
    if any(not c for c in cands):
        raise NotSplit("a proper subset acts irreducibly; the field does not split it")
    reached = {}
    first = None
    paths = 0
    for family in itertools.product(*cands):
        if len(set(family)) != 5:
            continue
        labelings = pattern_labelings(family)
        if not labelings:
            if gl_independent(family)[0]:
                raise InternalPatternFailure("independent witness family matches no pattern")
            continue
        for match in labelings:
            for rec, delta in _frame_paths(S, family, match, f):
                paths += 1
                if check and apply_transform(S, rec) != s_alpha(Scalar._raw(f, delta)):
                    raise InternalPatternFailure("recorded transform does not reproduce s_alpha")
                if delta not in reached:
                    reached[delta] = rec
                if first is None:
                    first = (delta, rec, family)
    if first is None:
        raise Inconclusive(f"no witness family admits a normalization path over {f}")
    if check:
        _assert_eigen_structure(S, f)
    delta, rec, family = first
    reachable = [Scalar._raw(f, x) for x in sorted(reached)]
    return M3Classification(Scalar._raw(f, delta), reachable, rec, tuple(family), paths, reached)


def alpha_candidates(alpha, field: Field | None = None) -> list[Scalar]:
    """All beta with {x+y, y, alpha*x+y} = {1, 0, beta} for some x != 0 (alpha not in {0, 1})."""
    if field is None:
        field = alpha.field
    f = field
    a = f.convert(alpha)
    if not a or a == f.one:
        raise DegenerateAlpha("alpha must differ from 0 and 1")
    # expressions as (coefficient of x, coefficient of y)
    exprs = [(f.one, f.one), (f.zero, f.one), (a, f.one)]
    out = []
    for iz, io in itertools.permutations(range(3), 2):
        rows = [list(exprs[iz]), list(exprs[io])]
        sol = solve_raw(f, rows, (f.zero, f.one), 2)
        if sol is None:
            continue
        x, y = sol
        if not x:
            continue
        k = 3 - iz - io
        beta = f.add(f.mul(exprs[k][0], x), f.mul(exprs[k][1], y))
        if beta not in out:
            out.append(beta)
    return [Scalar._raw(f, b) for b in sorted(out)]


@dataclass(frozen=True)
class AlphaClass:
    base: Scalar
    verified: tuple
    candidates: tuple

    def to_json(self) -> dict:
        return {
            "alpha": str(self.base),
            "verified": [str(x) for x in self.verified],
            "candidates": [str(x) for x in self.candidates],
        }


def alpha_class(alpha, field: Field | None = None) -> AlphaClass:
    """Candidate parameters equivalent to alpha, and those confirmed by classification."""
    if field is None:
        field = alpha.field
    a = Scalar(field, alpha)
    cands = alpha_candidates(a, field)
    reach = classify_m3_quintuple(s_alpha(a, field)).reachable
    verified = tuple(x for x in cands if x in reach)
    assert a in verified and a.inv() in verified, "alpha and its inverse must be verified"
    assert set(reach) <= set(cands), "a reachable parameter is not a candidate"
    return AlphaClass(a, verified, tuple(cands))


def eigen_multiset_invariant(S) -> tuple:
    """Sorted per-matrix (in-field eigenvalue count, multiplicity partition, split)."""
    sig = []
    for a in S:
        ed = eigen_data(a)
        sig.append((len(ed), tuple(sorted((p.multiplicity for p in ed), reverse=True)), ed.split))
    return tuple(sorted(sig))


def equivalent_m3(S, T) -> bool:
    """S ~ T for 5-element irredundant generating sets of M_3 (reachable sets intersect)."""
    if eigen_multiset_invariant(S) != eigen_multiset_invariant(T):
        return False
    rs = set(classify_m3_quintuple(S).reachable)
    rt = set(classify_m3_quintuple(T).reachable)
    return bool(rs & rt)
