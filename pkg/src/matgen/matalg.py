"""Subalgebras of M_n as linear spans: closure, generation, centralizers,
invariant subspaces and simultaneous triangularization."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .errors import DimensionMismatch, FieldMismatch, Inconclusive, NotSplit
from .exactfield import Field, random_element
from .linalg import EchelonBasis, Matrix, SpanBasis, Subspace, eigen_data, kernel_rows
from .subspace import all_subspaces, intersect, perp, stabilizes

__all__ = [
    "SpanBasis",
    "centralizer",
    "common_invariant_subspace",
    "contains",
    "generates",
    "invariant_lines",
    "invariant_subspaces",
    "is_triangularizable",
    "span_close",
]


def _common_shape(S, n=None, field=None):
    S = list(S)
    if not S:
        if n is None or field is None:
            raise DimensionMismatch("an empty set needs explicit n and field")
        return S, n, field
    field, n = S[0].field, S[0].nrows
    for a in S:
        if a.field != field:
            raise FieldMismatch(f"{a.field} vs {field}")
        if a.shape != (n, n):
            raise DimensionMismatch(f"expected {n}x{n}, got {a.shape[0]}x{a.shape[1]}")
    return S, n, field


def _integral_rows(a: Matrix):
    """Rows of a nonzero integer multiple of a rational matrix (same span)."""
    den = 1
    for r in a.rows:
        for x in r:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // gcd(den, x.denominator)
    return tuple(tuple(int(x * den) for x in r) for r in a.rows)


def span_close(S, unital: bool = False, n: int | None = None, field: Field | None = None) -> SpanBasis:
    """Smallest multiplicatively closed subspace of M_n containing S (and I if unital).

    Each new basis element is multiplied on the left by every generator; the
    span of all words is closed under left multiplication by generators, so
    this reaches the closure with |S| * dim products.
    """
    S, n, field = _common_shape(S, n, field)
    gens = list(S)
    if unital:
        gens.append(Matrix.identity(field, n))
    integral = field.p == 0
    gen_rows = [_integral_rows(g) if integral else g.rows for g in gens]
    e = EchelonBasis(field, n * n)
    queue = []
    for rows in gen_rows:
        new = e.add([x for r in rows for x in r])
        if new is not None:
            queue.append(new)
    matmul = field.matmul
    while queue and not e.full:
        v = queue.pop()
        m = [v[i * n:(i + 1) * n] for i in range(n)]
        for g in gen_rows:
            prod = matmul(g, m)
            new = e.add([x for r in prod for x in r])
            if new is not None:
                queue.append(new)
                if e.full:
                    break
    return SpanBasis(field, n, e, closed_under_mult=True)


def generates(S, unital: bool = False, n: int | None = None, field: Field | None = None) -> bool:
    S, n, field = _common_shape(S, n, field)
    return span_close(S, unital, n, field).dim == n * n


def contains(A: SpanBasis, a: Matrix) -> bool:
    return A.contains(a)


def centralizer(S, n: int | None = None, field: Field | None = None) -> SpanBasis:
    """All x with x a = a x for every a in S."""
    S, n, field = _common_shape(S, n, field)
    f = field
    eqs = []
    for a in S:
        A = a.rows
        for i in range(n):
            for j in range(n):
                row = [f.zero] * (n * n)
                # (x a)_ij = sum_q x_iq a_qj ; (a x)_ij = sum_p a_ip x_pj
                for q in range(n):
                    row[i * n + q] = f.add(row[i * n + q], A[q][j])
                for p in range(n):
                    row[p * n + j] = f.sub(row[p * n + j], A[i][p])
                eqs.append(row)
    basis = kernel_rows(f, eqs, n * n)
    return SpanBasis.from_vectors(f, n, basis, closed_under_mult=True, contains_identity=True)


def _basis_mats(A: SpanBasis):
    n = A.n
    return [[row[i * n:(i + 1) * n] for i in range(n)] for row in A.echelon.rows()]


def _cyclic_dim(f, mats, v) -> tuple[int, list]:
    e = EchelonBasis(f, len(v))
    for m in mats:
        e.add([f.dot(r, v) for r in m])
    return len(e), e.rows()


def _lines(f: Field, n: int):
    """All projective points of F^n as normalized vectors (first nonzero entry 1)."""
    for V in all_subspaces(f, n, dims=[1]):
        yield V.basis[0]


def common_invariant_subspace(S, n: int | None = None, field: Field | None = None, seed: int = 0):
    """A nonzero proper subspace invariant under every member of S.

    Returns ``None`` when span_close(S ∪ {I}) is all of M_n (irreducible).
    Over a finite field the search is complete; if the algebra is a proper
    irreducible subalgebra (possible only over non-closed fields) NotSplit is
    raised.  Over the rationals the search is heuristic and ends in
    Inconclusive.
    """
    S, n, field = _common_shape(S, n, field)
    f = field
    A = span_close(S, unital=True, n=n, field=f)
    if A.dim == n * n:
        return None
    mats = _basis_mats(A)
    mats_t = [[list(c) for c in zip(*m)] for m in mats]

    def check(v):
        d, rows = _cyclic_dim(f, mats, v)
        if 0 < d < n:
            return Subspace(f, n, rows)
        d, rows = _cyclic_dim(f, mats_t, v)
        if 0 < d < n:
            return perp(Subspace(f, n, rows))
        return None

    def candidates():
        for i in range(n):
            yield tuple(f.one if j == i else f.zero for j in range(n))
        for a in S:
            for pair in eigen_data(a):
                yield from pair.space.basis
            for pair in eigen_data(a.T):
                yield from pair.space.basis
        rng = random.Random(seed)
        for _ in range(4 * n):
            yield tuple(random_element(f, rng) for _ in range(n))
        if f.is_finite:
            yield from _lines(f, n)

    for v in candidates():
        if not any(v):
            continue
        V = check(v)
        if V is not None:
            assert all(stabilizes(a, V) for a in S)
            return V
    if f.is_finite:
        raise NotSplit(
            f"span_close(S ∪ {{I}}) has dimension {A.dim} < {n * n} but no invariant subspace over {f}"
        )
    raise Inconclusive("no invariant subspace found by the rational heuristics")


def invariant_lines(S, n: int | None = None, field: Field | None = None) -> list[Subspace]:
    """All lines invariant under every member of S, in deterministic order.

    Over a finite field every common eigenvector is enumerated; over the
    rationals an eigenspace intersection of dimension >= 2 would give
    infinitely many lines and raises Inconclusive.
    """
    S, n, field = _common_shape(S, n, field)
    f = field
    if f.is_finite:
        return [V for V in all_subspaces(f, n, dims=[1]) if all(stabilizes(a, V) for a in S)]
    if not S:
        raise Inconclusive("every line is invariant under the empty set")
    spaces = [Subspace.full(f, n)]
    for a in S:
        nxt = []
        for E in spaces:
            for pair in eigen_data(a):
                X = intersect(E, pair.space)
                if X.dim:
                    nxt.append(X)
        spaces = nxt
    out = []
    for E in spaces:
        if E.dim > 1:
            raise Inconclusive("a common eigenspace of dimension >= 2 has infinitely many lines")
        out.append(E)
    return sorted(set(out), key=lambda V: V.key())


def invariant_subspaces(S, n: int | None = None, field: Field | None = None, dims=None) -> list[Subspace]:
    """All nonzero proper invariant subspaces of the requested dimensions.

    Finite fields: exhaustive over Sub(F^n).  Rationals: dimensions 1 and n-1
    only (lines, and perps of lines invariant under the transposes).
    """
    S, n, field = _common_shape(S, n, field)
    dims = list(range(1, n)) if dims is None else list(dims)
    if field.is_finite:
        return [V for V in all_subspaces(field, n, dims=dims) if all(stabilizes(a, V) for a in S)]
    out = []
    for d in dims:
        if d == 1:
            out.extend(invariant_lines(S, n, field))
        elif d == n - 1:
            planes = [perp(L) for L in invariant_lines([a.T for a in S], n, field)]
            out.extend(sorted(planes, key=lambda V: V.key()))
        else:
            raise Inconclusive(f"invariant subspaces of dimension {d} are not enumerated over {field}")
    return out


def _common_eigenvector(S, n, f):
    """A common eigenvector of S or None; NotSplit if some member does not split."""
    datas = []
    for a in S:
        ed = eigen_data(a)
        if not ed.split:
            raise NotSplit("a characteristic polynomial does not split over the ground field")
        datas.append(ed)

    def search(k, E):
        if k == len(datas):
            return E.basis[0]
        for pair in datas[k]:
            X = intersect(E, pair.space)
            if X.dim:
                v = search(k + 1, X)
                if v is not None:
                    return v
        return None

    return search(0, Subspace.full(f, n))


def is_triangularizable(S, n: int | None = None, field: Field | None = None) -> bool:
    """True iff some basis makes every member of S upper triangular."""
    S, n, field = _common_shape(S, n, field)
    f = field
    while n > 1 and S:
        v = _common_eigenvector(S, n, f)
        if v is None:
            return False
        # basis with v first, completed by standard vectors
        e = EchelonBasis(f, n)
        cols = [v]
        e.add(v)
        for i in range(n):
            u = tuple(f.one if j == i else f.zero for j in range(n))
            if e.add(u) is not None:
                cols.append(u)
        g = Matrix.from_columns(f, cols)
        gi = g.inverse()
        S = [Matrix._raw(f, [r[1:] for r in (gi @ a @ g).rows[1:]]) for a in S]
        n -= 1
    return True
