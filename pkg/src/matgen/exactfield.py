"""Exact arithmetic over GF(p), GF(p^k) with k <= 3, and the rationals.

Field elements have a *raw* representation used by the linear-algebra
kernels: ``int`` residues for GF(p), ``int`` codes ``c0 + c1*p + c2*p**2`` for
GF(p^k), and :class:`fractions.Fraction` for the rationals.  Raw zero is falsy
in every field, which the kernels rely on.  :class:`Scalar` wraps a raw value
together with its field for the public API.

Elements of a finite field are ordered by their raw code, i.e. lexicographically
on the coefficient vector read from the highest-degree coefficient down.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from math import gcd, isqrt

from .errors import DivisionByZero, FieldMismatch, InfiniteField, UnsupportedField

__all__ = [
    "Code",
    "Field",
    "FieldSpec",
    "GF",
    "QQ",
    "Scalar",
    "conway_polynomial",
    "enumerate_field",
    "field_arith",
    "find_roots",
    "parse_field",
]

# Conway polynomials, coefficients ascending (c0, c1, ..., 1).
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
}

_TABLE_LIMIT = 512


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise AssertionError("unreachable")


def _polymulmod(a, b, mod, p):
    """Product of ascending coefficient lists ``a*b`` modulo monic ``mod`` over GF(p)."""
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return (prod + [0] * k)[:k]


def _is_primitive(mod, p) -> bool:
    """True iff ``mod`` (monic, degree k <= 3) is irreducible with x generating the unit group."""
    k = len(mod) - 1
    # degree <= 3: irreducible iff no root
    for r in range(p):
        if sum(c * pow(r, i, p) for i, c in enumerate(mod)) % p == 0:
            return False
    order = p**k - 1

    def xpow(e):
        result, base = [1] + [0] * (k - 1), ([0, 1] + [0] * k)[:k]
        while e:
            if e & 1:
                result = _polymulmod(result, base, mod, p)
            base = _polymulmod(base, base, mod, p)
            e >>= 1
        return result

    one = [1] + [0] * (k - 1)
    return all(xpow(order // r) != one for r in _prime_factors(order))


@functools.lru_cache(maxsize=None)
def conway_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Conway polynomial of degree ``k`` in {1, 2, 3} over GF(p), ascending coefficients.

    Computed from the definition: the least primitive polynomial, in the
    alternating-sign lexicographic order, whose root has norm equal to the least
    primitive root modulo p (compatibility with the only proper subfield).
    """
    if k not in (1, 2, 3):
        raise UnsupportedField(f"extension degree {k} not supported")
    g = _least_primitive_root(p)
    c0 = ((-1) ** k * g) % p
    if k == 1:
        return (c0, 1)
    best = None
    for code in range(p ** (k - 1)):
        mid = [(code // p**i) % p for i in range(k - 1)]
        poly = (c0, *mid, 1)
        if not _is_primitive(poly, p):
            continue
        key = tuple(((-1) ** (k - i) * poly[i]) % p for i in range(k - 1, -1, -1))
        if best is None or key < best[0]:
            best = (key, poly)
    assert best is not None
    return best[1]


class Code(int):
    """Raw element of an extension field: the integer c0 + c1*p + c2*p^2.

    A distinct type so that ``convert`` can tell raw codes from plain
    integers, which always denote elements of the prime subfield.
    """

    __slots__ = ()


class Field:
    """Base class for the three supported kinds of ground field."""

    kind: str
    p: int
    k: int
    modulus: tuple[int, ...] | None

    zero = 0
    one = 1

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def order(self) -> int | None:
        """Cardinality, or ``None`` for the rationals."""
        return None if self.p == 0 else self.p**self.k

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    def __call__(self, value) -> Scalar:
        return Scalar(self, value)

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.kind == other.kind
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.kind, self.p, self.k, self.modulus))

    def __reduce__(self):
        return (parse_field, (str(self),))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> list:
        """Raw elements in the deterministic order."""
        raise InfiniteField(f"{self} is infinite")

    def from_int(self, n: int):
        raise NotImplementedError

    def convert(self, value):
        """Coerce ``value`` (Scalar, int, Fraction, str, coefficient list) to a raw element."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element used in {self}")
            return value.value
        if isinstance(value, Code):
            return value
        if isinstance(value, bool):
            return self.from_int(int(value))
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.div(self.from_int(value.numerator), self.from_int(value.denominator))
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        raise TypeError(f"cannot convert {value!r} to an element of {self}")

    def parse(self, text: str):
        text = text.strip()
        if text.startswith("["):
            return self.from_coeffs([int(c) for c in text[1:-1].split(",") if c.strip()])
        return self.convert(Fraction(text))

    def from_coeffs(self, coeffs):
        raise TypeError(f"{self} elements are not coefficient lists")

    def format(self, raw) -> str:
        return str(raw)

    # Vector kernels; subclasses override with faster versions.

    def row_sub(self, u, c, v):
        """``u - c*v`` for raw rows."""
        if not c:
            return list(u)
        sub, mul = self.sub, self.mul
        return [sub(a, mul(c, b)) if b else a for a, b in zip(u, v)]

    def row_scale(self, c, u):
        mul = self.mul
        return [mul(c, a) for a in u]

    def dot(self, u, v):
        add, mul = self.add, self.mul
        acc = self.zero
        for a, b in zip(u, v):
            if a and b:
                acc = add(acc, mul(a, b))
        return acc

    def matmul(self, a, b):
        """Product of raw row-major matrices (sequences of rows)."""
        cols = list(zip(*b))
        return tuple(tuple(self.dot(r, c) for c in cols) for r in a)


class PrimeField(Field):
    kind = "prime"
    k = 1
    modulus = None

    def __init__(self, p: int):
        self.p = p

    def __repr__(self):
        return f"GF({self.p})"

    def __str__(self):
        return f"gf:{self.p}"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if not a:
            raise DivisionByZero(f"inverse of 0 in {self}")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def elements(self):
        return list(range(self.p))

    def row_sub(self, u, c, v):
        p = self.p
        return [(a - c * b) % p for a, b in zip(u, v)]

    def row_scale(self, c, u):
        p = self.p
        return [c * a % p for a in u]

    def dot(self, u, v):
        return sum(a * b for a, b in zip(u, v)) % self.p

    def matmul(self, a, b):
        p = self.p
        cols = list(zip(*b))
        return tuple(tuple(sum(x * y for x, y in zip(r, c)) % p for c in cols) for r in a)


class ExtensionField(Field):
    kind = "extension"

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p, self.k, self.modulus = p, k, tuple(modulus)
        q = p**k
        self._q = q
        self._inv = None
        self.zero, self.one = Code(0), Code(1)
        self._elems = [Code(x) for x in range(q)] if q <= _TABLE_LIMIT else None
        if q <= _TABLE_LIMIT:
            digits = [self._digits(x) for x in range(q)]
            self._add = [
                [self._code([(s + t) % p for s, t in zip(digits[x], digits[y])]) for y in range(q)]
                for x in range(q)
            ]
            self._mul = [
                [self._code(_polymulmod(digits[x], digits[y], self.modulus, p)) for y in range(q)]
                for x in range(q)
            ]
            self._neg = [self._code([-s % p for s in digits[x]]) for x in range(q)]
            self._inv = [self.zero] * q
            for x in range(1, q):
                row = self._mul[x]
                self._inv[x] = self._elems[row.index(1)]
        else:
            self._add = self._mul = self._neg = None

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __str__(self):
        return f"gf:{self.p}^{self.k}"

    def _digits(self, x):
        return [(x // self.p**i) % self.p for i in range(self.k)]

    def _code(self, digits):
        c = sum(c * self.p**i for i, c in enumerate(digits))
        return self._elems[c] if self._elems is not None else Code(c)

    def from_int(self, n):
        return self._code([n % self.p])

    def from_coeffs(self, coeffs):
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.k:
            # reduce a longer polynomial modulo the defining polynomial
            reduced = [0] * self.k
            x = ([0, 1] + [0] * self.k)[: self.k]
            xi = [1] + [0] * (self.k - 1)
            for c in coeffs:
                reduced = [(r + c * t) % self.p for r, t in zip(reduced, xi)]
                xi = _polymulmod(xi, x, self.modulus, self.p)
            coeffs = reduced
        return self._code(coeffs + [0] * (self.k - len(coeffs)))

    def coeffs(self, raw) -> list[int]:
        return self._digits(raw)

    def format(self, raw):
        return "[" + ",".join(str(c) for c in self._digits(raw)) + "]"

    def add(self, a, b):
        if self._add is not None:
            return self._add[a][b]
        return self._code([(s + t) % self.p for s, t in zip(self._digits(a), self._digits(b))])

    def neg(self, a):
        if self._neg is not None:
            return self._neg[a]
        return self._code([-s % self.p for s in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul is not None:
            return self._mul[a][b]
        return self._code(_polymulmod(self._digits(a), self._digits(b), self.modulus, self.p))

    def inv(self, a):
        if not a:
            raise DivisionByZero(f"inverse of 0 in {self}")
        if self._inv is not None:
            return self._inv[a]
        # a^(q-2)
        result, base, e = self.one, a, self._q - 2
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self):
        return list(self._elems) if self._elems is not None else [Code(x) for x in range(self._q)]

    def row_sub(self, u, c, v):
        if not c:
            return list(u)
        if self._mul is None:
            return super().row_sub(u, c, v)
        add, neg, mc = self._add, self._neg, self._mul[c]
        return [add[a][neg[mc[b]]] for a, b in zip(u, v)]

    def row_scale(self, c, u):
        if self._mul is None:
            return super().row_scale(c, u)
        mc = self._mul[c]
        return [mc[a] for a in u]


class RationalField(Field):
    kind = "rationals"
    p = 0
    k = 1
    modulus = None
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "qq"

    def from_int(self, n):
        return Fraction(n)

    def convert(self, value):
        if isinstance(value, Fraction):
            return value
        return super().convert(value)

    def parse(self, text):
        text = text.strip()
        if text.startswith("["):
            raise ValueError("rational scalars are decimal strings or a/b fractions")
        return Fraction(text)

    def format(self, raw):
        return str(raw)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of 0 in QQ")
        return Fraction(1) / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by 0 in QQ")
        return Fraction(a) / b

    def row_sub(self, u, c, v):
        if not c:
            return list(u)
        return [a - c * b if b else a for a, b in zip(u, v)]

    def row_scale(self, c, u):
        return [c * a if a else a for a in u]

    def dot(self, u, v):
        # stays integral on integer rows, which span_close relies on for speed
        return sum(a * b for a, b in zip(u, v))

    def matmul(self, a, b):
        cols = list(zip(*b))
        return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a)


QQ = RationalField()
FieldSpec = Field


@functools.lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> Field:
    """The field with ``p**k`` elements (``k`` in 1..3)."""
    if not is_prime(p):
        raise UnsupportedField(f"{p} is not prime")
    if k == 1:
        return PrimeField(p)
    if k not in (2, 3):
        raise UnsupportedField(f"extension degree {k} not supported (k <= 3)")
    modulus = CONWAY.get((p, k)) or conway_polynomial(p, k)
    return ExtensionField(p, k, modulus)


_SPEC_RE = re.compile(r"^gf:(\d+)(?:\^(\d+))?$")


def parse_field(spec: str) -> Field:
    """Parse ``"qq"``, ``"gf:p"`` or ``"gf:p^k"``."""
    spec = spec.strip().lower()
    if spec in ("qq", "q", "rationals"):
        return QQ
    m = _SPEC_RE.match(spec)
    if not m:
        raise ValueError(f"bad field spec {spec!r}; expected qq, gf:p or gf:p^k")
    p, k = int(m.group(1)), int(m.group(2) or 1)
    if k > 1 and not is_prime(p):
        raise UnsupportedField(f"{p} is not prime")
    return GF(p, k) if k > 1 else GF(p)


class Scalar:
    """An immutable field element."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value=0):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", field.convert(value))

    @classmethod
    def _raw(cls, field, value) -> Scalar:
        s = object.__new__(cls)
        object.__setattr__(s, "field", field)
        object.__setattr__(s, "value", value)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _other(self, other):
        return self.field.convert(other)

    def __add__(self, other):
        return Scalar._raw(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar._raw(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar._raw(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        if not isinstance(other, (Scalar, int, Fraction, str)):
            return NotImplemented
        return Scalar._raw(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar._raw(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar._raw(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar._raw(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = Scalar._raw(self.field, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> Scalar:
        return Scalar._raw(self.field, self.field.inv(self.value))

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.field.convert(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"{self.field!r}({self.field.format(self.value)})"


def field_arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    """Dispatch one of add, sub, mul, div, neg, inv on scalars sharing a field."""
    if b is not None and a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if b is None:
        raise TypeError(f"{op} needs two operands")
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)


def enumerate_field(f: Field) -> list[Scalar]:
    return [Scalar._raw(f, x) for x in f.elements()]


# Univariate polynomials are ascending lists of raw coefficients.


def poly_eval(f: Field, coeffs, x):
    acc = f.zero
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _deflate(f: Field, coeffs, r):
    """Divide by (x - r); returns (quotient, remainder)."""
    out = [f.zero] * (len(coeffs) - 1)
    acc = f.zero
    for i in range(len(coeffs) - 1, 0, -1):
        acc = f.add(f.mul(acc, r), coeffs[i])
        out[i - 1] = acc
    rem = f.add(f.mul(acc, r), coeffs[0])
    return out, rem


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _divisors(m: int) -> list[int]:
    m = abs(m)
    if m > 10**12:
        from sympy import divisors  # large constant terms only

        return [int(d) for d in divisors(m)]
    small = [d for d in range(1, isqrt(m) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def _rational_candidates(coeffs) -> list[Fraction]:
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    lead, const = ints[-1], ints[0]
    cands = {Fraction(s * a, b) for a in _divisors(const) for b in _divisors(lead) for s in (1, -1)}
    return sorted(cands)


def roots_with_multiplicity(f: Field, coeffs) -> list[tuple[object, int]]:
    """In-field roots of a nonzero raw polynomial with multiplicities, in element order."""
    coeffs = _trim(coeffs)
    if not coeffs:
        raise ValueError("the zero polynomial has every element as a root")
    out = []
    zero_mult = 0
    while len(coeffs) > 1 and not coeffs[0]:
        coeffs = coeffs[1:]
        zero_mult += 1
    if zero_mult:
        out.append((f.zero, zero_mult))
    if len(coeffs) == 1:
        return out
    candidates = f.elements() if f.is_finite else _rational_candidates(coeffs)
    for r in candidates:
        if not r:
            continue
        mult = 0
        while len(coeffs) > 1:
            quo, rem = _deflate(f, coeffs, r)
            if rem:
                break
            coeffs = quo
            mult += 1
        if mult:
            out.append((r, mult))
        if len(coeffs) == 1:
            break
    return sorted(out, key=lambda t: t[0])


def find_roots(poly, f: Field) -> list[Scalar]:
    """All roots of ``poly`` (ascending coefficients) in ``f``, repeated by multiplicity."""
    coeffs = [f.convert(c) for c in poly]
    return [Scalar._raw(f, r) for r, m in roots_with_multiplicity(f, coeffs) for _ in range(m)]


def random_element(f: Field, rng, nonzero: bool = False, bound: int = 5):
    """A raw random element; rationals are drawn as small fractions."""
    while True:
        if f.is_finite:
            x = rng.randrange(f.order)
            if f.k > 1:
                x = Code(x)
        else:
            x = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        if x or not nonzero:
            return x
