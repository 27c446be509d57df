"""Dense exact matrices and the echelon machinery shared by the other modules.

Matrices store raw field values (see :mod:`matgen.exactfield`) in row-major
tuples.  Indices are 0-based throughout the code: ``unit(f, n, 0, 1)`` is the
matrix unit usually written e_{1,2}.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DimensionMismatch, FieldMismatch, NotSquare, SingularMatrix
from .exactfield import Field, Scalar, random_element, roots_with_multiplicity

__all__ = [
    "EchelonBasis",
    "EchelonForm",
    "EigenData",
    "Eigenpair",
    "Matrix",
    "SpanBasis",
    "Subspace",
    "block_compose",
    "block_extract",
    "char_poly",
    "direct_sum",
    "eigen_data",
    "embed_corner",
    "kernel",
    "rank",
    "rref",
    "solve",
    "tensor",
    "transpose",
]


class Matrix:
    """An immutable m x n matrix over an exact field."""

    __slots__ = ("field", "rows", "nrows", "ncols", "_hash")

    def __init__(self, field: Field, rows):
        conv = field.convert
        data = tuple(tuple(conv(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise DimensionMismatch("matrices need at least one row and one column")
        if any(len(r) != len(data[0]) for r in data):
            raise DimensionMismatch("ragged rows")
        self._set(field, data)

    def _set(self, field, data):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", len(data[0]))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, field, rows) -> Matrix:
        m = object.__new__(cls)
        m._set(field, tuple(tuple(r) for r in rows))
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix._raw, (self.field, self.rows))

    # constructors

    @classmethod
    def zeros(cls, field, m, n=None):
        n = m if n is None else n
        return cls._raw(field, [[field.zero] * n for _ in range(m)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls._raw(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, field, n, i, j, m=None):
        """The matrix unit with a single 1 at (i, j), 0-based; shape n x n or n x m."""
        m = n if m is None else m
        rows = [[field.zero] * m for _ in range(n)]
        rows[i][j] = field.one
        return cls._raw(field, rows)

    @classmethod
    def diag(cls, field, entries):
        entries = [field.convert(x) for x in entries]
        n = len(entries)
        return cls._raw(field, [[entries[i] if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, field, entries):
        return cls._raw(field, [[field.convert(x)] for x in entries])

    @classmethod
    def from_columns(cls, field, columns):
        cols = [[field.convert(x) for x in c] for c in columns]
        return cls._raw(field, list(zip(*cols)))

    @classmethod
    def from_flat(cls, field, n, flat):
        flat = list(flat)
        return cls._raw(field, [flat[i * n:(i + 1) * n] for i in range(n)])

    @classmethod
    def random(cls, field, m, n, rng, density: float = 1.0):
        return cls._raw(
            field,
            [
                [random_element(field, rng) if rng.random() < density else field.zero for _ in range(n)]
                for _ in range(m)
            ],
        )

    @classmethod
    def random_invertible(cls, field, n, rng):
        while True:
            g = cls.random(field, n, n, rng)
            if g.det():
                return g

    # access

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self):
        return self.nrows == self.ncols

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return Scalar._raw(self.field, self.rows[i][j])

    def flat(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def column_vector(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def to_strings(self) -> list[list[str]]:
        fmt = self.field.format
        return [[fmt(x) for x in r] for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.rows)))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(r) for r in self.to_strings())
        return f"Matrix({self.field!r}, [{body}])"

    # arithmetic

    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        add = self.field.add
        return Matrix._raw(self.field, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        sub = self.field.sub
        return Matrix._raw(self.field, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        neg = self.field.neg
        return Matrix._raw(self.field, [[neg(a) for a in r] for r in self.rows])

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        return Matrix._raw(self.field, self.field.matmul(self.rows, other.rows))

    def scale(self, c) -> Matrix:
        c = self.field.convert(c)
        return Matrix._raw(self.field, [self.field.row_scale(c, r) for r in self.rows])

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def affine(self, alpha, beta) -> Matrix:
        """``alpha*self + beta*I``."""
        f = self.field
        return self._affine_raw(f.convert(alpha), f.convert(beta))

    def _affine_raw(self, alpha, beta) -> Matrix:
        f = self.field
        rows = [f.row_scale(alpha, r) for r in self.rows]
        for i in range(min(self.nrows, self.ncols)):
            rows[i][i] = f.add(rows[i][i], beta)
        return Matrix._raw(f, rows)

    def shift(self, beta) -> Matrix:
        return self.affine(self.field.one, beta)

    @property
    def T(self) -> Matrix:
        return Matrix._raw(self.field, list(zip(*self.rows)))

    def conjugate(self, g: Matrix, g_inv: Matrix | None = None) -> Matrix:
        """``g @ self @ g^-1``."""
        return g @ self @ (g.inverse() if g_inv is None else g_inv)

    def trace(self) -> Scalar:
        f = self.field
        acc = f.zero
        for i in range(min(self.nrows, self.ncols)):
            acc = f.add(acc, self.rows[i][i])
        return Scalar._raw(f, acc)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_scalar(self) -> bool:
        if not self.is_square:
            return False
        d = self.rows[0][0]
        return all((x == d) if i == j else not x for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def det(self) -> Scalar:
        if not self.is_square:
            raise NotSquare(f"det of {self.shape} matrix")
        f = self.field
        rows = [list(r) for r in self.rows]
        n = len(rows)
        det = f.one
        for c in range(n):
            piv = next((i for i in range(c, n) if rows[i][c]), None)
            if piv is None:
                return Scalar._raw(f, f.zero)
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                det = f.neg(det)
            pv = rows[c][c]
            det = f.mul(det, pv)
            inv = f.inv(pv)
            for i in range(c + 1, n):
                if rows[i][c]:
                    rows[i] = f.row_sub(rows[i], f.mul(rows[i][c], inv), rows[c])
        return Scalar._raw(f, det)

    def inverse(self) -> Matrix:
        if not self.is_square:
            raise NotSquare(f"inverse of {self.shape} matrix")
        n = self.nrows
        f = self.field
        aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(self.rows)]
        red, pivots = _rref_rows(f, aug, limit=n)
        if pivots[:n] != list(range(n)):
            raise SingularMatrix("matrix is not invertible")
        return Matrix._raw(f, [r[n:] for r in red[:n]])

    def rank(self) -> int:
        return len(_rref_rows(self.field, [list(r) for r in self.rows])[1])

    def apply(self, vec) -> tuple:
        """Matrix times a column vector given as a raw sequence."""
        dot = self.field.dot
        return tuple(dot(r, vec) for r in self.rows)


def transpose(a: Matrix) -> Matrix:
    return a.T


# Echelon forms on raw row lists.


def _rref_rows(f: Field, rows, limit=None):
    """Gauss-Jordan elimination in place; returns (rows, pivot columns).

    Pivots are found by scanning columns left to right and taking the first row
    (top to bottom) with a nonzero entry.  ``limit`` restricts pivot columns.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0]) if limit is None else limit
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = f.row_scale(inv, rows[r])
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = f.row_sub(rows[i], rows[i][c], rows[r])
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


@dataclass(frozen=True)
class EchelonForm:
    rref: Matrix
    pivots: tuple
    rank: int


def rref(a: Matrix) -> EchelonForm:
    red, pivots = _rref_rows(a.field, a.rows)
    return EchelonForm(Matrix._raw(a.field, red), tuple(pivots), len(pivots))


def rank(a: Matrix) -> int:
    return a.rank()


def kernel_rows(f: Field, rows, ncols: int) -> list[tuple]:
    """Basis of {x : rows . x = 0} in reduced echelon form, as raw tuples."""
    if not rows:
        return [tuple(f.one if i == j else f.zero for i in range(ncols)) for j in range(ncols)]
    red, pivots = _rref_rows(f, rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [f.zero] * ncols
        v[fc] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(red[r][fc])
        basis.append(v)
    return [tuple(r) for r in _rref_rows(f, basis)[0]]


def kernel(a: Matrix) -> list[Matrix]:
    """Echelonized basis of the right null space, as column matrices."""
    return [Matrix._raw(a.field, [[x] for x in v]) for v in kernel_rows(a.field, a.rows, a.ncols)]


def solve(a: Matrix, b) -> Matrix | None:
    """One solution x of a x = b as a column matrix, or ``None`` when inconsistent."""
    f = a.field
    if isinstance(b, Matrix):
        if b.ncols != 1:
            raise DimensionMismatch("right-hand side must be a column")
        rhs = b.column_vector(0)
    else:
        rhs = tuple(f.convert(x) for x in b)
    if len(rhs) != a.nrows:
        raise DimensionMismatch(f"{a.nrows} equations but {len(rhs)} right-hand entries")
    x = solve_raw(f, a.rows, rhs, a.ncols)
    return None if x is None else Matrix._raw(f, [[v] for v in x])


def solve_raw(f: Field, rows, rhs, ncols: int):
    aug = [list(r) + [y] for r, y in zip(rows, rhs)]
    red, pivots = _rref_rows(f, aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [f.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return tuple(x)


# Characteristic polynomials.


def _padd(f, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = f.add(out[i], c)
    return out


def _pmul(f, a, b):
    if not a or not b:
        return []
    out = [f.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
    return out


def char_poly_raw(f: Field, rows) -> list:
    """det(xI - a) by cofactor expansion along rows, memoized over column subsets."""
    n = len(rows)
    entry = [
        [([f.neg(rows[i][j]), f.one] if i == j else ([f.neg(rows[i][j])] if rows[i][j] else [])) for j in range(n)]
        for i in range(n)
    ]
    memo = {}

    def minor(r, mask):
        if r == n:
            return [f.one]
        key = mask
        if key in memo:
            return memo[key]
        acc = []
        sign_pos = True
        for j in range(n):
            if not mask >> j & 1:
                continue
            e = entry[r][j]
            if e:
                term = _pmul(f, e, minor(r + 1, mask & ~(1 << j)))
                if not sign_pos:
                    term = [f.neg(c) for c in term]
                acc = _padd(f, acc, term)
            sign_pos = not sign_pos
        memo[key] = acc
        return acc

    poly = minor(0, (1 << n) - 1)
    return list(poly) + [f.zero] * (n + 1 - len(poly))


def char_poly(a: Matrix) -> list[Scalar]:
    """Coefficients of det(xI - a), ascending; the last entry is 1."""
    if not a.is_square:
        raise NotSquare(f"characteristic polynomial of {a.shape} matrix")
    return [Scalar._raw(a.field, c) for c in char_poly_raw(a.field, a.rows)]


@dataclass(frozen=True)
class Eigenpair:
    value: Scalar
    space: Subspace
    multiplicity: int


@dataclass(frozen=True)
class EigenData:
    pairs: tuple
    split: bool

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def values(self) -> list[Scalar]:
        return [p.value for p in self.pairs]


def eigen_data(a: Matrix) -> EigenData:
    """In-field eigenvalues with eigenspaces and algebraic multiplicities."""
    if not a.is_square:
        raise NotSquare(f"eigen data of {a.shape} matrix")
    f, n = a.field, a.nrows
    roots = roots_with_multiplicity(f, char_poly_raw(f, a.rows))
    pairs = []
    for lam, mult in roots:
        shifted = [[f.sub(x, lam) if i == j else x for j, x in enumerate(r)] for i, r in enumerate(a.rows)]
        space = Subspace._from_rref(f, n, kernel_rows(f, shifted, n))
        pairs.append(Eigenpair(Scalar._raw(f, lam), space, mult))
    return EigenData(tuple(pairs), sum(m for _, m in roots) == n)


# Block assembly.


def tensor(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with blocks a_ij * b."""
    a._check(b)
    f = a.field
    rows = []
    for ar in a.rows:
        for br in b.rows:
            rows.append([f.mul(x, y) for x in ar for y in br])
    return Matrix._raw(f, rows)


def block_compose(grid) -> Matrix:
    """Assemble a matrix from a 2-d grid of blocks with consistent sizes."""
    grid = [list(r) for r in grid]
    f = grid[0][0].field
    heights = [row[0].nrows for row in grid]
    widths = [blk.ncols for blk in grid[0]]
    rows = []
    for bi, brow in enumerate(grid):
        if len(brow) != len(widths):
            raise DimensionMismatch("ragged block grid")
        for blk, w in zip(brow, widths):
            if blk.field != f:
                raise FieldMismatch("blocks over different fields")
            if blk.nrows != heights[bi] or blk.ncols != w:
                raise DimensionMismatch("inconsistent block sizes")
        for i in range(heights[bi]):
            rows.append([x for blk in brow for x in blk.rows[i]])
    return Matrix._raw(f, rows)


def block_extract(a: Matrix, row_range, col_range) -> Matrix:
    """Submatrix for half-open ranges given as ``range`` objects or (start, stop) pairs."""
    rr = range(*row_range) if isinstance(row_range, tuple) else row_range
    cr = range(*col_range) if isinstance(col_range, tuple) else col_range
    if not rr or not cr or rr.stop > a.nrows or cr.stop > a.ncols or rr.start < 0 or cr.start < 0:
        raise DimensionMismatch(f"ranges {rr}, {cr} outside {a.shape}")
    return Matrix._raw(a.field, [[a.rows[i][j] for j in cr] for i in rr])


def embed_corner(a: Matrix, n: int) -> Matrix:
    """Place ``a`` in the upper-left corner of an n x n zero matrix."""
    if a.nrows > n or a.ncols > n:
        raise DimensionMismatch(f"{a.shape} does not fit in {n}x{n}")
    f = a.field
    rows = [list(r) + [f.zero] * (n - a.ncols) for r in a.rows]
    rows += [[f.zero] * n for _ in range(n - a.nrows)]
    return Matrix._raw(f, rows)


def direct_sum(*blocks: Matrix) -> Matrix:
    f = blocks[0].field
    n = sum(b.ncols for b in blocks)
    rows, offset = [], 0
    for b in blocks:
        for r in b.rows:
            rows.append([f.zero] * offset + list(r) + [f.zero] * (n - offset - b.ncols))
        offset += b.ncols
    return Matrix._raw(f, rows)


# Incremental echelon bases.


class EchelonBasis:
    """Semi-echelon basis of a growing subspace of F^length.

    Each stored row has its first nonzero entry at its pivot.  Over finite
    fields the pivot is normalized to 1; over the rationals rows are kept as
    primitive integer vectors (fraction-free elimination), which is far
    cheaper than Fraction arithmetic and spans the same rational subspace.
    """

    __slots__ = ("field", "length", "_pivots", "_rows", "_integral")

    def __init__(self, field: Field, length: int):
        self.field = field
        self.length = length
        self._pivots: list[int] = []
        self._rows: list[list] = []
        self._integral = field.p == 0

    def __len__(self):
        return len(self._rows)

    def copy(self) -> EchelonBasis:
        e = EchelonBasis(self.field, self.length)
        e._pivots = list(self._pivots)
        e._rows = list(self._rows)
        return e

    @property
    def full(self) -> bool:
        return len(self._rows) == self.length

    def _prepare(self, vec):
        if len(vec) != self.length:
            raise DimensionMismatch(f"vector of length {len(vec)} in F^{self.length}")
        if not self._integral:
            return list(vec)
        den = 1
        for x in vec:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // gcd(den, x.denominator)
        return [int(x * den) for x in vec]

    def residual(self, vec) -> list:
        """``vec`` reduced against the stored rows (in the internal representation)."""
        v = self._prepare(vec)
        if self._integral:
            for c, row in zip(self._pivots, self._rows):
                a = v[c]
                if a:
                    b = row[c]
                    g = gcd(a, b)
                    s, t = b // g, a // g
                    v = [s * x - t * y for x, y in zip(v, row)]
                    g = gcd(*v)
                    if g > 1:
                        v = [x // g for x in v]
            return v
        row_sub = self.field.row_sub
        for c, row in zip(self._pivots, self._rows):
            a = v[c]
            if a:
                v = row_sub(v, a, row)
        return v

    def contains(self, vec) -> bool:
        return not any(self.residual(vec))

    def add(self, vec):
        """Insert ``vec``; returns the new stored row, or ``None`` if already in the span."""
        v = self.residual(vec)
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return None
        return self._insert(pivot, v)

    def _insert(self, pivot, v):
        if self._integral:
            g = gcd(*v)
            if v[pivot] < 0:
                g = -g
            v = [x // g for x in v]
        else:
            inv = self.field.inv(v[pivot])
            v = self.field.row_scale(inv, v)
        k = bisect.bisect(self._pivots, pivot)
        self._pivots.insert(k, pivot)
        self._rows.insert(k, v)
        return v

    def to_field(self, row) -> tuple:
        """Convert an internal row to raw field values."""
        if self._integral:
            return tuple(Fraction(x) for x in row)
        return tuple(row)

    def rows(self) -> list[tuple]:
        return [self.to_field(r) for r in self._rows]

    def pivots(self) -> tuple:
        return tuple(self._pivots)

    def rref(self) -> tuple:
        """The canonical reduced row echelon basis, as raw tuples sorted by pivot."""
        f = self.field
        rows = [list(r) for r in self.rows()]
        for k in range(len(rows)):
            c = self._pivots[k]
            if self._integral:
                rows[k] = f.row_scale(f.inv(rows[k][c]), rows[k])
        for k in range(len(rows) - 1, -1, -1):
            c = self._pivots[k]
            for i in range(k):
                if rows[i][c]:
                    rows[i] = f.row_sub(rows[i], rows[i][c], rows[k])
        return tuple(tuple(r) for r in rows)


class Subspace:
    """A subspace of F^n (column vectors) with its canonical RREF basis."""

    __slots__ = ("field", "n", "basis", "_hash")

    def __init__(self, field: Field, n: int, vectors=()):
        conv = field.convert
        rows = [[conv(x) for x in v] for v in vectors]
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch(f"vector of length {len(r)} in F^{n}")
        red, pivots = _rref_rows(field, rows)
        self._set(field, n, tuple(tuple(r) for r in red[: len(pivots)]))

    def _set(self, field, n, basis):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _from_rref(cls, field, n, basis) -> Subspace:
        s = object.__new__(cls)
        s._set(field, n, tuple(tuple(r) for r in basis))
        return s

    @classmethod
    def zero(cls, field, n):
        return cls._from_rref(field, n, ())

    @classmethod
    def full(cls, field, n):
        return cls._from_rref(field, n, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def span(cls, field, n, vectors):
        return cls(field, n, vectors)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    def __reduce__(self):
        return (Subspace._from_rref, (self.field, self.n, self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> tuple:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)

    def contains(self, vec) -> bool:
        f = self.field
        v = [f.convert(x) for x in vec]
        for r, c in zip(self.basis, self.pivots()):
            if v[c]:
                v = f.row_sub(v, v[c], r)
        return not any(v)

    def __contains__(self, vec):
        return self.contains(vec)

    def issubspace(self, other: Subspace) -> bool:
        return all(other.contains(v) for v in self.basis)

    def __le__(self, other):
        return self.issubspace(other)

    def vectors(self) -> list[tuple[Scalar, ...]]:
        return [tuple(Scalar._raw(self.field, x) for x in r) for r in self.basis]

    def matrix(self) -> Matrix:
        """Basis vectors as the columns of an n x dim matrix (requires dim > 0)."""
        return Matrix._raw(self.field, list(zip(*self.basis)))

    def key(self) -> tuple:
        """Deterministic sort key: dimension, then the canonical basis."""
        return (self.dim, self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.n, self.basis)))
        return self._hash

    def __repr__(self):
        fmt = self.field.format
        vecs = ", ".join("(" + ",".join(fmt(x) for x in r) + ")" for r in self.basis)
        return f"Subspace({self.field!r}, n={self.n}, [{vecs}])"


class SpanBasis:
    """A linear subspace of M_n, stored as an echelon basis of flattened matrices."""

    __slots__ = ("field", "n", "echelon", "closed_under_mult", "contains_identity", "_basis")

    def __init__(self, field, n, echelon: EchelonBasis, closed_under_mult=False, contains_identity=None):
        self.field = field
        self.n = n
        self.echelon = echelon
        self.closed_under_mult = closed_under_mult
        if contains_identity is None:
            contains_identity = echelon.contains(Matrix.identity(field, n).flat())
        self.contains_identity = contains_identity
        self._basis = None

    @classmethod
    def from_matrices(cls, field, n, mats, **flags) -> SpanBasis:
        e = EchelonBasis(field, n * n)
        for m in mats:
            e.add(m.flat())
        return cls(field, n, e, **flags)

    @classmethod
    def from_vectors(cls, field, n, vectors, **flags) -> SpanBasis:
        e = EchelonBasis(field, n * n)
        for v in vectors:
            e.add(v)
        return cls(field, n, e, **flags)

    @property
    def dim(self) -> int:
        return len(self.echelon)

    @property
    def basis(self) -> tuple:
        """Canonical RREF basis of flattened matrices."""
        if self._basis is None:
            self._basis = self.echelon.rref()
        return self._basis

    def matrices(self) -> list[Matrix]:
        return [Matrix.from_flat(self.field, self.n, v) for v in self.basis]

    def contains(self, a: Matrix) -> bool:
        if a.shape != (self.n, self.n):
            raise DimensionMismatch(f"{a.shape} matrix against M_{self.n}")
        if a.field != self.field:
            raise FieldMismatch(f"{a.field} vs {self.field}")
        return self.echelon.contains(a.flat())

    def __contains__(self, a):
        return self.contains(a)

    def __eq__(self, other):
        return (
            isinstance(other, SpanBasis)
            and self.field == other.field
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field, self.n, self.basis))

    def __repr__(self):
        return f"SpanBasis({self.field!r}, n={self.n}, dim={self.dim})"
