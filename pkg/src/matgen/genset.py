"""Irredundant generating sets of M_n: the explicit (2n-1)-element family,
irredundancy tests, greedy extraction, corner completion, invariant-subspace
witnesses, and the block "hat" transcription relative to a semisimple
block-scalar subalgebra."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BadSize, CapExceeded, DimensionMismatch, NotGenerating, NotIrredundant
from .exactfield import Field
from .linalg import EchelonBasis, Matrix, Subspace, direct_sum, solve_raw, tensor
from .matalg import _common_shape, common_invariant_subspace, generates, invariant_subspaces, span_close
from .subspace import gl_independent, stabilizes

__all__ = [
    "BlockShape",
    "CornerShape",
    "WitnessFamily",
    "block_algebra_basis",
    "canonical_irredundant",
    "complete_from_corner",
    "corner_basis",
    "extract_irredundant",
    "hat_A",
    "hat_matrix",
    "hat_set",
    "is_irredundant_generating",
    "laffey_equiv_check",
    "witness_candidates",
    "witness_invariant_subspaces",
]

DEFAULT_HAT_CAP = 4096


def canonical_irredundant(n: int, field: Field) -> list[Matrix]:
    """a_1..a_{n-1}, a'_1..a'_{n-1}, b with a_i = e_ii + e_i,i+1, a'_i = e_i+1,i + e_i+1,i+1, b = e_11."""
    if n < 2:
        raise BadSize(f"n must be at least 2, got {n}")
    e = lambda i, j: Matrix.unit(field, n, i, j)  # noqa: E731
    a = [e(i, i) + e(i, i + 1) for i in range(n - 1)]
    a2 = [e(i + 1, i) + e(i + 1, i + 1) for i in range(n - 1)]
    return a + a2 + [e(0, 0)]


def is_irredundant_generating(S) -> bool:
    """S generates M_n and dropping any single entry (by position) breaks generation."""
    S, n, field = _common_shape(S)
    if not S or not generates(S):
        return False
    return not any(generates(S[:i] + S[i + 1:], n=n, field=field) for i in range(len(S)))


def extract_irredundant(S) -> list[Matrix]:
    """Greedily drop entries (input order) whose removal keeps S generating."""
    S, n, field = _common_shape(S)
    if not S or not generates(S):
        raise NotGenerating("input set does not generate M_n")
    T = list(S)
    i = 0
    while i < len(T):
        rest = T[:i] + T[i + 1:]
        if rest and generates(rest, n=n, field=field):
            T = rest
        else:
            i += 1
    assert len(T) <= max(2 * n - 1, 1), f"irredundant generating set of size {len(T)} > 2n-1"
    return T


@dataclass(frozen=True)
class CornerShape:
    p: int
    q: int
    n: int

    def __post_init__(self):
        if not (1 <= self.p <= self.n and 1 <= self.q <= self.n):
            raise BadSize(f"need 1 <= p, q <= n; got p={self.p}, q={self.q}, n={self.n}")


def corner_basis(shape: CornerShape, field: Field) -> list[Matrix]:
    """Matrix units spanning the upper-left p x q corner of M_n."""
    return [Matrix.unit(field, shape.n, i, j) for i in range(shape.p) for j in range(shape.q)]


def _completion_matrix(f, v, as_rows):
    """Invertible matrix whose first row (or column) is v, completed by unit vectors."""
    m = len(v)
    pivot = next(i for i, x in enumerate(v) if x)
    vecs = [list(v)] + [[f.one if j == k else f.zero for j in range(m)] for k in range(m) if k != pivot]
    M = Matrix._raw(f, vecs)
    return M if as_rows else M.T


def _complete(p, q, n, mats, f):
    """Indices into ``mats`` of a completing subset (recursion on 2n - p - q)."""
    if p == n and q == n:
        return set()
    if p > q:
        return _complete(q, p, n, [m.T for m in mats], f)
    if q < n:
        # find a outside the block lower-triangular algebra L_{q, n-q}
        for idx, a in enumerate(mats):
            hit = next(((i, j) for i in range(q) for j in range(q, n) if a.rows[i][j]), None)
            if hit is not None:
                break
        else:
            raise AssertionError("no element outside L_{q,n-q}; precondition violated")
        i, _ = hit
        v = a.rows[i][q:]
        M = _completion_matrix(f, v, as_rows=True)  # M = Q^{-1}, so v Q = e_1
        x = direct_sum(Matrix.identity(f, q), M)
        x_inv = direct_sum(Matrix.identity(f, q), M.inverse())
        step = (p, q + 1)
    else:
        # q == n > p: find a outside the block upper-triangular algebra U_{p, n-p}
        for idx, a in enumerate(mats):
            hit = next(((i, j) for i in range(p, n) for j in range(p) if a.rows[i][j]), None)
            if hit is not None:
                break
        else:
            raise AssertionError("no element outside U_{p,n-p}; precondition violated")
        _, j = hit
        v = [a.rows[i][j] for i in range(p, n)]
        M = _completion_matrix(f, v, as_rows=False)  # M = P^{-1}, so P v = e_1
        x = direct_sum(Matrix.identity(f, p), M.inverse())
        x_inv = direct_sum(Matrix.identity(f, p), M)
        step = (p + 1, q)
    conj = [x @ m @ x_inv for m in mats]
    return {idx} | _complete(step[0], step[1], n, conj, f)


def complete_from_corner(shape: CornerShape, S) -> list[Matrix]:
    """A subset T of S, |T| <= 2n - p - q, with the p x q corner and T generating M_n."""
    S = list(S)
    if not S:
        if shape.p == shape.q == shape.n:
            return []
        raise NotGenerating("empty S cannot complete a proper corner")
    S, n, field = _common_shape(S)
    if n != shape.n:
        raise DimensionMismatch(f"shape is for n={shape.n}, matrices are {n}x{n}")
    corner = corner_basis(shape, field)
    if not generates(corner + S, n=n, field=field):
        raise NotGenerating("corner together with S does not generate M_n")
    idx = sorted(_complete(shape.p, shape.q, n, S, field))
    T = [S[i] for i in idx]
    assert len(T) <= 2 * n - shape.p - shape.q
    assert generates(corner + T, n=n, field=field)
    return T


# Invariant-subspace witnesses.


@dataclass(frozen=True)
class WitnessFamily:
    """``subspaces[i]`` is invariant under every member of S except ``matrices[i]``."""

    matrices: tuple
    subspaces: tuple

    @property
    def mapping(self) -> dict:
        return dict(zip(self.matrices, self.subspaces))

    @property
    def family(self) -> list[Subspace]:
        return list(self.subspaces)


def witness_invariant_subspaces(S, seed: int = 0, check: bool = True) -> WitnessFamily:
    """For each a in an irredundant generating set, a subspace fixed by S - {a} and moved by a."""
    S, n, field = _common_shape(S)
    if not is_irredundant_generating(S):
        raise NotIrredundant("input is not an irredundant generating set")
    spaces = []
    for i, a in enumerate(S):
        V = common_invariant_subspace(S[:i] + S[i + 1:], n=n, field=field, seed=seed)
        assert V is not None, "a proper subset generates M_n"
        assert not stabilizes(a, V), "witness subspace is invariant under the whole set"
        spaces.append(V)
    if check:
        ok, _ = gl_independent(spaces)
        assert ok, "witness family is not GL-independent"
    return WitnessFamily(tuple(S), tuple(spaces))


def witness_candidates(S) -> list[list[Subspace]]:
    """For each position i, every subspace invariant under S - {a_i} (hence moved by a_i)."""
    S, n, field = _common_shape(S)
    out = []
    for i, a in enumerate(S):
        cands = invariant_subspaces(S[:i] + S[i + 1:], n=n, field=field)
        assert all(not stabilizes(a, V) for V in cands), "S has a common invariant subspace"
        out.append(cands)
    return out


# Block-scalar subalgebras and the hat transcription.


@dataclass(frozen=True)
class BlockShape:
    """Blocks (r_i, k_i): A = (M_{r_1})_{k_1} ⊕ ... with (M_r)_k = {a ⊕ ... ⊕ a (k copies)}."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((int(r), int(k)) for r, k in self.blocks)
        if not blocks or any(r < 1 or k < 1 for r, k in blocks):
            raise BadSize("block shape needs t >= 1 blocks with r_i, k_i >= 1")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(r * k for r, k in self.blocks)

    @property
    def g(self) -> int:
        return sum(k for _, k in self.blocks)

    @property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for r, k in self.blocks:
            out.append(acc)
            acc += r * k
        return out

    @property
    def hat_offsets(self) -> list[int]:
        out, acc = [], 0
        for _, k in self.blocks:
            out.append(acc)
            acc += k
        return out


def block_algebra_basis(shape: BlockShape, field: Field) -> list[Matrix]:
    """Basis of A: I_{k_i} ⊗ e_st placed in diagonal block i."""
    n, out = shape.n, []
    for (r, k), off in zip(shape.blocks, shape.offsets):
        for s in range(r):
            for t in range(r):
                blk = tensor(Matrix.identity(field, k), Matrix.unit(field, r, s, t))
                rows = [[field.zero] * n for _ in range(n)]
                for i, row in enumerate(blk.rows):
                    rows[off + i][off:off + r * k] = row
                out.append(Matrix._raw(field, rows))
    return out


def _hat_block(f, x: Matrix, shape: BlockShape, i: int, j: int) -> list[Matrix]:
    (ri, ki), (rj, kj) = shape.blocks[i], shape.blocks[j]
    oi, oj = shape.offsets[i], shape.offsets[j]
    cells = {}
    for u in range(ki):
        for v in range(kj):
            cells[u, v] = [
                x.rows[oi + u * ri + s][oj + v * rj + t] for s in range(ri) for t in range(rj)
            ]
    # greedy basis B in row-major cell order
    e = EchelonBasis(f, ri * rj)
    basis = []
    for uv in sorted(cells):
        if e.add(cells[uv]) is not None:
            basis.append(cells[uv])
    if not basis:
        return [Matrix.zeros(f, ki, kj)]
    cols = list(zip(*basis))
    coords = {uv: solve_raw(f, cols, c, len(basis)) for uv, c in cells.items()}
    out = []
    for ell in range(len(basis)):
        m = Matrix._raw(f, [[coords[u, v][ell] for v in range(kj)] for u in range(ki)])
        if m not in out:
            out.append(m)
    return out


def hat_matrix(shape: BlockShape, x: Matrix, cap: int = DEFAULT_HAT_CAP) -> list[Matrix]:
    """All g x g assemblies w with w_ij drawn from the coordinate matrices of block x_ij."""
    if x.shape != (shape.n, shape.n):
        raise DimensionMismatch(f"{x.shape} matrix for a shape with n={shape.n}")
    f, t = x.field, len(shape.blocks)
    choices = {(i, j): _hat_block(f, x, shape, i, j) for i in range(t) for j in range(t)}
    total = 1
    for c in choices.values():
        total *= len(c)
    if total > cap:
        raise CapExceeded(f"hat assembly has {total} members (cap {cap})")
    g, ho = shape.g, shape.hat_offsets
    keys = sorted(choices)
    out = []
    for pick in itertools.product(*(choices[k] for k in keys)):
        rows = [[f.zero] * g for _ in range(g)]
        for (i, j), blk in zip(keys, pick):
            for u, row in enumerate(blk.rows):
                rows[ho[i] + u][ho[j]:ho[j] + blk.ncols] = row
        w = Matrix._raw(f, rows)
        if w not in out:
            out.append(w)
    return out


def hat_set(shape: BlockShape, S, cap: int = DEFAULT_HAT_CAP) -> list[Matrix]:
    out = []
    for x in S:
        for w in hat_matrix(shape, x, cap):
            if w not in out:
                out.append(w)
    return out


def hat_A(shape: BlockShape, field: Field) -> list[Matrix]:
    """{a_1 ⊕ ... ⊕ a_t : a_i ∈ {0, I_{k_i}}}."""
    out = []
    for picks in itertools.product((0, 1), repeat=len(shape.blocks)):
        blocks = [
            Matrix.identity(field, k) if c else Matrix.zeros(field, k) for c, (_, k) in zip(picks, shape.blocks)
        ]
        out.append(direct_sum(*blocks))
    return out


def laffey_equiv_check(shape: BlockShape, S, cap: int = DEFAULT_HAT_CAP) -> tuple[bool, bool]:
    """(S ∪ A generates M_n, hat S ∪ hat A generates M_g), both non-unital."""
    S = list(S)
    if not S:
        raise DimensionMismatch("S must be nonempty")
    field = S[0].field
    for x in S:
        if x.shape != (shape.n, shape.n):
            raise DimensionMismatch(f"{x.shape} matrix for a shape with n={shape.n}")
    lhs = generates(S + block_algebra_basis(shape, field))
    rhs = generates(hat_set(shape, S, cap) + hat_A(shape, field))
    return lhs, rhs
