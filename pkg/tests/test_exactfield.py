from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys import galoistools as gt
from sympy.polys.domains import ZZ

from helpers import SMALL_FIELDS, element
from matgen.errors import DivisionByZero, FieldMismatch, InfiniteField
from matgen.exactfield import (
    CONWAY,
    GF,
    QQ,
    Code,
    Scalar,
    conway_polynomial,
    enumerate_field,
    field_arith,
    find_roots,
    parse_field,
)

# Conway polynomials from the standard tables, ascending coefficients.
KNOWN_CONWAY = {
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


def test_field_arith_examples():
    F7 = GF(7)
    assert field_arith("inv", F7(3)) == F7(5)
    assert field_arith("add", QQ(Fraction(1, 2)), QQ(Fraction(1, 3))) == QQ(Fraction(5, 6))
    with pytest.raises(DivisionByZero):
        field_arith("inv", F7(0))
    with pytest.raises(DivisionByZero):
        field_arith("div", QQ(1), QQ(0))
    with pytest.raises(FieldMismatch):
        field_arith("add", F7(1), GF(5)(1))


def test_enumerate_field_examples():
    assert [s.value for s in enumerate_field(GF(2))] == [0, 1]
    F4 = enumerate_field(GF(2, 2))
    assert len(F4) == 4 and F4[0] == GF(2, 2)(0)
    with pytest.raises(InfiniteField):
        enumerate_field(QQ)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 3)])
def test_enumeration_closed_and_distinct(p, k):
    f = GF(p, k)
    elems = f.elements()
    assert len(set(elems)) == p**k == len(elems)
    s = set(elems)
    for a in elems:
        for b in elems:
            assert f.add(a, b) in s and f.mul(a, b) in s


def test_find_roots_examples():
    F7 = GF(7)
    assert sorted(r.value for r in find_roots([-1, 0, 1], F7)) == [1, 6]
    assert find_roots([1, 0, 1], F7) == []
    assert [r.value for r in find_roots([0, 0, -1, 1], QQ)] == [0, 0, 1]


def test_conway_table_matches_standard_values():
    assert CONWAY == KNOWN_CONWAY


@pytest.mark.parametrize("pk", sorted(KNOWN_CONWAY))
def test_conway_search_reproduces_table(pk):
    assert conway_polynomial(*pk) == KNOWN_CONWAY[pk]


@pytest.mark.parametrize("pk", sorted(KNOWN_CONWAY))
def test_conway_irreducible_and_primitive(pk):
    p, k = pk
    desc = [ZZ(c) for c in reversed(KNOWN_CONWAY[pk])]
    assert gt.gf_irreducible_p(desc, p, ZZ)
    x = [ZZ(1), ZZ(0)]
    order = p**k - 1
    assert gt.gf_pow_mod(x, order, desc, p, ZZ) == [ZZ(1)]
    for q in sympy.primefactors(order):
        assert gt.gf_pow_mod(x, order // q, desc, p, ZZ) != [ZZ(1)]


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3)])
def test_extension_multiplication_against_sympy(p, k):
    f = GF(p, k)
    desc = [ZZ(c) for c in reversed(KNOWN_CONWAY[(p, k)])]
    rng = random.Random(p * 100 + k)
    for _ in range(200):
        a, b = rng.randrange(p**k), rng.randrange(p**k)
        ca, cb = f.coeffs(Code(a)), f.coeffs(Code(b))
        prod = gt.gf_rem(gt.gf_mul(list(reversed(ca)), list(reversed(cb)), p, ZZ), desc, p, ZZ)
        expect = [int(c) for c in reversed(prod)] + [0] * k
        assert f.coeffs(f.mul(Code(a), Code(b))) == expect[:k]


def test_integers_denote_prime_subfield_elements():
    F4 = GF(2, 2)
    assert F4(2) == F4(0)
    assert F4(3) == F4(1)
    x = F4([0, 1])
    assert x != F4(0) and x != F4(1)
    assert x * x == x + 1  # x^2 + x + 1 = 0 in characteristic 2
    assert str(x) == "[0,1]"


def test_parse_and_format_roundtrip():
    for spec in ["qq", "gf:7", "gf:2^3", "gf:3^2"]:
        f = parse_field(spec)
        assert str(f) == spec
        for s in enumerate_field(f) if f.is_finite else [QQ(Fraction(-3, 4)), QQ(5)]:
            assert f.parse(f.format(s.value)) == s.value
    with pytest.raises(ValueError):
        parse_field("gf:6")


@pytest.mark.parametrize("f", SMALL_FIELDS, ids=str)
@given(data=st.data())
def test_field_axioms(f, data):
    a = Scalar._raw(f, data.draw(element(f)))
    b = Scalar._raw(f, data.draw(element(f)))
    c = Scalar._raw(f, data.draw(element(f)))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == f(0) and a + f(0) == a and a * f(1) == a
    if b:
        assert (a * b) * b.inv() == a
        assert (a / b) * b == a


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_prime_inverse_oracle(p):
    F = GF(p)
    for a in range(1, p):
        assert F(a).inv().value == pow(a, -1, p)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=1, max_size=4))
def test_rational_roots_against_sympy(roots):
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.prod([x - sympy.Rational(r.numerator, r.denominator) for r in roots]) * 3, x)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    ours = [r.value for r in find_roots(coeffs, QQ)]
    assert ours == sorted(roots)


@pytest.mark.parametrize("f", [GF(5), GF(7), GF(2, 2), GF(3, 2)], ids=str)
def test_finite_roots_by_exhaustive_evaluation(f):
    rng = random.Random(7)
    elems = f.elements()
    for _ in range(50):
        coeffs = [rng.choice(elems) for _ in range(rng.randint(2, 5))]
        if not coeffs[-1]:
            coeffs[-1] = f.one
        found = find_roots(coeffs, f)
        assert len(found) <= len(coeffs) - 1
        def val(x):
            acc = f.zero
            for c in reversed(coeffs):
                acc = f.add(f.mul(acc, x), c)
            return acc
        assert {r.value for r in found} == {x for x in elems if not val(x)}
