"""The subspace lattice of F^n: lattice operations, stabilizer algebras, and
GL- / monoid-independence of families of subspaces."""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass

from .errors import AmbientMismatch, CapExceeded, InternalPatternFailure
from .exactfield import Field, Scalar
from .linalg import EchelonBasis, Matrix, SpanBasis, Subspace, _rref_rows, kernel_rows

__all__ = [
    "IndepWitness",
    "Pattern",
    "PatternMatch",
    "Subspace",
    "all_subspaces",
    "gl_independent",
    "image",
    "intersect",
    "lattice_closure",
    "m_independent",
    "pattern_classify",
    "pattern_labelings",
    "perp",
    "stabilizer_algebra",
    "stabilizes",
    "sum",
]


def _same_ambient(*spaces):
    f, n = spaces[0].field, spaces[0].n
    for s in spaces[1:]:
        if s.field != f or s.n != n:
            raise AmbientMismatch(f"F^{n} over {f} vs F^{s.n} over {s.field}")
    return f, n


def sum(U: Subspace, V: Subspace) -> Subspace:  # noqa: A001 - lattice join
    _same_ambient(U, V)
    return Subspace(U.field, U.n, U.basis + V.basis)


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """Zassenhaus: echelonize [u | u] and [v | 0]; rows starting with n zeros span U ∩ V."""
    f, n = _same_ambient(U, V)
    if not U.dim or not V.dim:
        return Subspace.zero(f, n)
    rows = [list(u) + list(u) for u in U.basis] + [list(v) + [f.zero] * n for v in V.basis]
    red, pivots = _rref_rows(f, rows)
    out = [r[n:] for r, c in zip(red, pivots) if c >= n]
    return Subspace(f, n, out)


def perp(V: Subspace) -> Subspace:
    """Orthogonal complement for the standard symmetric pairing."""
    return Subspace._from_rref(V.field, V.n, kernel_rows(V.field, list(V.basis), V.n))


def image(g: Matrix, V: Subspace) -> Subspace:
    if g.field != V.field or g.ncols != V.n:
        raise AmbientMismatch("matrix does not act on this ambient space")
    return Subspace(V.field, g.nrows, [g.apply(b) for b in V.basis])


def stabilizes(a: Matrix, V: Subspace) -> bool:
    """True iff a V ⊆ V."""
    if a.field != V.field or a.shape != (V.n, V.n):
        raise AmbientMismatch(f"{a.shape} matrix on F^{V.n}")
    return all(V.contains(a.apply(b)) for b in V.basis)


def _stab_equations(U: Subspace):
    """Linear equations on flattened a expressing a U ⊆ U: c^t a b = 0 for b in U, c in U-perp."""
    f, n = U.field, U.n
    eqs = []
    for c in kernel_rows(f, list(U.basis), n) if U.basis else []:
        for b in U.basis:
            eqs.append([f.mul(ci, bj) for ci in c for bj in b])
    return eqs


def stabilizer_algebra(family, n: int | None = None, field: Field | None = None, check: bool = True) -> SpanBasis:
    """All a with a U ⊆ U for each U in ``family`` (a unital subalgebra of M_n)."""
    family = list(family)
    if family:
        field, n = _same_ambient(*family)
    elif n is None or field is None:
        raise ValueError("an empty family needs explicit n and field")
    eqs = []
    for U in family:
        eqs.extend(_stab_equations(U))
    basis = kernel_rows(field, eqs, n * n)
    e = EchelonBasis(field, n * n)
    for v in basis:
        e.add(v)
    W = SpanBasis(field, n, e, closed_under_mult=True)
    assert W.contains_identity, "stabilizer algebra must contain the identity"
    if check:
        mats = [Matrix.from_flat(field, n, v) for v in basis]
        for x in mats:
            for y in mats:
                assert e.contains((x @ y).flat()), "stabilizer algebra not closed"
    return W


def all_subspaces(field: Field, n: int, dims=None) -> list[Subspace]:
    """Every subspace of F^n (finite field) of the requested dimensions, by shape of RREF."""
    dims = tuple(range(n + 1)) if dims is None else tuple(dims)
    return list(_all_subspaces(field, n, dims))


@functools.lru_cache(maxsize=64)
def _all_subspaces(field, n, dims):
    elems = field.elements()
    out = []
    for k in dims:
        for pivots in itertools.combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
            for values in itertools.product(elems, repeat=len(free)):
                rows = [[field.zero] * n for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = field.one
                for (r, c), x in zip(free, values):
                    rows[r][c] = x
                out.append(Subspace._from_rref(field, n, rows))
    return tuple(out)


@dataclass(frozen=True)
class WitnessEntry:
    subspace: Subspace
    matrix: Matrix
    invertible: bool
    moves: bool


@dataclass(frozen=True)
class IndepWitness:
    """For each member V, a matrix stabilizing the other members but not V."""

    entries: tuple

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def matrix_for(self, V: Subspace) -> Matrix:
        for e in self.entries:
            if e.subspace == V:
                return e.matrix
        raise KeyError(V)

    def verify(self, family) -> bool:
        family = list(family)
        for e in self.entries:
            others = [U for U in family if U != e.subspace]
            if not all(stabilizes(e.matrix, U) for U in others):
                return False
            if stabilizes(e.matrix, e.subspace):
                return False
            if e.invertible != bool(e.matrix.det()):
                return False
        return True


def _trivially_dependent(family) -> bool:
    if len(set(family)) != len(family):
        return True
    return any(V.dim == 0 or V.dim == V.n for V in family)


def _movers(family):
    """Per member V: the stabilizer algebra of the others and a basis element moving V (or None)."""
    for i, V in enumerate(family):
        others = family[:i] + family[i + 1:]
        W = stabilizer_algebra(others, n=V.n, field=V.field, check=False)
        mover = next((m for m in W.matrices() if not stabilizes(m, V)), None)
        yield V, W, mover


def _invertible_mover(V, W: SpanBasis, w: Matrix):
    f, n = V.field, V.n
    if f.order is None or f.order > n:
        # w + alpha*I is invertible unless -alpha is an eigenvalue; at most n exclusions
        for alpha in f.elements() if f.is_finite else range(n + 1):
            cand = w.shift(Scalar._raw(f, alpha) if f.is_finite else alpha)
            if cand.det():
                return cand
        raise AssertionError("unreachable: more field elements than eigenvalues")
    mats = W.matrices()
    for coeffs in itertools.product(f.elements(), repeat=len(mats)):
        if not any(coeffs):
            continue
        cand = Matrix.zeros(f, n)
        for c, m in zip(coeffs, mats):
            if c:
                cand = cand + m.scale(Scalar._raw(f, c))
        if cand.det() and not stabilizes(cand, V):
            return cand
    return None


def gl_independent(family) -> tuple[bool, IndepWitness | None]:
    """GL-independence: each member is moved by an invertible matrix fixing all the others."""
    family = list(family)
    if not family:
        return True, IndepWitness(())
    _same_ambient(*family)
    if _trivially_dependent(family):
        return False, None
    entries = []
    for V, W, w in _movers(family):
        if w is None:
            return False, None
        g = _invertible_mover(V, W, w)
        if g is None:
            return False, None
        entries.append(WitnessEntry(V, g, True, True))
    return True, IndepWitness(tuple(entries))


def m_independent(family) -> tuple[bool, IndepWitness | None]:
    """Independence for the multiplicative monoid of M_n (no invertibility required)."""
    family = list(family)
    if not family:
        return True, IndepWitness(())
    _same_ambient(*family)
    if _trivially_dependent(family):
        return False, None
    entries = []
    for V, _, w in _movers(family):
        if w is None:
            return False, None
        entries.append(WitnessEntry(V, w, bool(w.det()), True))
    return True, IndepWitness(tuple(entries))


def lattice_closure(family, cap: int = 512) -> set[Subspace]:
    """Closure under + and ∩; raises CapExceeded past ``cap`` subspaces."""
    family = list(family)
    if not family:
        return set()
    _same_ambient(*family)
    seen = set(family)
    frontier = list(seen)
    while frontier:
        new = []
        current = list(seen)
        for U in frontier:
            for V in current:
                for W in (sum(U, V), intersect(U, V)):
                    if W not in seen:
                        seen.add(W)
                        new.append(W)
                        if len(seen) > cap:
                            raise CapExceeded(f"lattice closure exceeded {cap} subspaces")
        frontier = new
    return seen


class Pattern(enum.Enum):
    PATTERN1 = "Pattern1"  # three lines, two planes
    PATTERN2 = "Pattern2"  # two lines, three planes

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PatternMatch:
    """A labeling of a 5-family; ``roles`` holds family indices.

    Pattern1: roles = (L1, L2, L3, P1, P2).  Pattern2: roles = (L1, L2, P1, P2, P3).
    """

    pattern: Pattern
    roles: tuple

    @property
    def lines(self):
        return self.roles[:3] if self.pattern is Pattern.PATTERN1 else self.roles[:2]

    @property
    def planes(self):
        return self.roles[3:] if self.pattern is Pattern.PATTERN1 else self.roles[2:]


def _check_pattern1(L, P) -> bool:
    f, n = L[0].field, L[0].n
    if not (L[0] <= P[0] and L[1] <= P[1]):
        return False
    if sum(sum(L[0], L[1]), L[2]).dim != n:
        return False
    return all(not L[i] <= P[j] for i in range(3) for j in range(2) if i != j)


def _check_pattern2(L, P) -> bool:
    if not (L[0] <= P[0] and L[1] <= P[1]):
        return False
    if intersect(intersect(P[0], P[1]), P[2]).dim != 0:
        return False
    return all(not L[i] <= P[j] for i in range(2) for j in range(3) if i != j)


def pattern_labelings(family) -> list[PatternMatch]:
    """Every role assignment (over all 5! orderings) satisfying one of the two patterns."""
    family = list(family)
    if len(family) != 5:
        return []
    f, n = _same_ambient(*family)
    if n != 3:
        raise AmbientMismatch("patterns are defined for subspaces of F^3")
    dims = [V.dim for V in family]
    if sorted(dims) == [1, 1, 1, 2, 2]:
        pattern, check, nlines = Pattern.PATTERN1, _check_pattern1, 3
    elif sorted(dims) == [1, 1, 2, 2, 2]:
        pattern, check, nlines = Pattern.PATTERN2, _check_pattern2, 2
    else:
        return []
    out = []
    for perm in itertools.permutations(range(5)):
        spaces = [family[i] for i in perm]
        if any(V.dim != 1 for V in spaces[:nlines]) or any(V.dim != 2 for V in spaces[nlines:]):
            continue
        if check(spaces[:nlines], spaces[nlines:]):
            out.append(PatternMatch(pattern, perm))
    return out


def pattern_classify(family) -> PatternMatch | None:
    """The first matching labeling in permutation order, or None."""
    matches = pattern_labelings(family)
    return matches[0] if matches else None


def perp_labeling(match: PatternMatch) -> PatternMatch:
    """The labeling of the perp family induced by ``match`` (lines and planes swap roles)."""
    r = match.roles
    if match.pattern is Pattern.PATTERN2:
        # perp of (L1, L2, P1, P2, P3) is lines P1^, P2^, P3^ and planes L1^, L2^
        return PatternMatch(Pattern.PATTERN1, (r[2], r[3], r[4], r[0], r[1]))
    raise InternalPatternFailure("only Pattern2 labelings are dualized")
