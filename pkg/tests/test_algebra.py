import random
from fractions import Fraction

import pytest
from hypothesis import given

from nilcert.algebra import (AlgebraContext, ContextMismatchError, TruncatedPoly, Unit, components,
                             format_poly, group_commutator, homogeneous_component, parse_poly, poly_mul,
                             unit_inv, unit_mul, unit_pow_int, unit_pow_rat, valuation)

from conftest import polys, random_unit, units

C22 = AlgebraContext(2, 2)
C33 = AlgebraContext(3, 3)
T1, T2 = C22.gen(1), C22.gen(2)


def U(ctx, **kw):
    return Unit(ctx, kw)


def test_poly_mul_truncates():
    one = C22.one()
    got = poly_mul(one + T1, one + T2)
    assert got == TruncatedPoly(C22, {(): 1, (1,): 1, (2,): 1, (1, 2): 1})
    c21 = AlgebraContext(2, 1)
    got = poly_mul(c21.one() + c21.gen(1), c21.one() + c21.gen(2))
    assert got == TruncatedPoly(c21, {(): 1, (1,): 1, (2,): 1})


def test_noncommutative():
    assert T1 * T2 != T2 * T1
    s = T1 + T2
    assert s * s == TruncatedPoly(C22, {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1})


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        T1 * AlgebraContext(2, 3).gen(1)


def test_valuation_examples():
    assert valuation(C22.one()) == 3
    assert valuation(Unit(C22, {(): 1, (1,): 1})) == 1
    assert valuation(Unit(C22, {(): 1, (1, 2): 1, (2, 1): -1})) == 2


def test_unit_examples():
    c = AlgebraContext(1, 2)
    u = Unit(c, {(): 1, (1,): 1})
    assert unit_mul(u, c.one()) == u
    assert unit_mul(u, Unit(c, {(): 1, (1,): -1, (1, 1): 1})) == c.one()
    assert unit_inv(u) == Unit(c, {(): 1, (1,): -1, (1, 1): 1})
    assert unit_inv(c.one()) == c.one()
    assert unit_pow_int(u, 0) == c.one()
    assert unit_pow_int(u, 3) == Unit(c, {(): 1, (1,): 3, (1, 1): 3})
    assert unit_pow_int(u, -2) == Unit(c, {(): 1, (1,): -2, (1, 1): 3})
    assert unit_pow_rat(u, Fraction(1)) == u
    half = unit_pow_rat(u, Fraction(1, 2))
    assert half == Unit(c, {(): 1, (1,): Fraction(1, 2), (1, 1): Fraction(-1, 8)})
    assert half * half == u


def test_unit_rejects_bad_constant():
    with pytest.raises(ValueError):
        Unit(C22, {(): 2, (1,): 1})


def test_commutator_examples():
    a = Unit(C22, {(): 1, (1,): 1})
    b = Unit(C22, {(): 1, (2,): 1})
    assert group_commutator(a, b) == Unit(C22, {(): 1, (1, 2): 1, (2, 1): -1})
    assert group_commutator(a, a) == C22.one()
    assert group_commutator(a, C22.one()) == C22.one()


def test_homogeneous_components():
    w = TruncatedPoly(C22, {(): 1, (1,): 1, (1, 2): 1})
    assert homogeneous_component(w, 2) == TruncatedPoly(C22, {(1, 2): 1})
    assert homogeneous_component(w, 0) == C22.one()
    assert sum(components(w), C22.zero()) == w
    with pytest.raises(ValueError):
        homogeneous_component(w, 3)


def test_text_form():
    c = AlgebraContext(1, 2)
    u = unit_pow_int(Unit(c, {(): 1, (1,): 1}), 3)
    assert format_poly(u) == "1 + 3 T1 + 3 T1.T1"
    w = TruncatedPoly(C22, {(): 1, (1, 2): Fraction(-1, 2), (2,): 3})
    assert parse_poly(format_poly(w), C22) == w
    assert format_poly(C22.zero()) == "0"


@given(polys(C33), polys(C33), polys(C33))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(polys(C33, min_len=1), polys(C33, min_len=2))
def test_filtration_multiplicative(a, b):
    p = a * b
    if not p.is_zero():
        assert p.min_degree() >= a.min_degree() + b.min_degree()


def test_int_power_matches_repeated_product(rng):
    for _ in range(50):
        u = random_unit(C33, rng)
        acc = C33.one()
        for x in range(7):
            assert unit_pow_int(u, x) == acc
            assert unit_pow_int(u, -x) == unit_inv(acc)
            acc = acc * u


def test_rational_power_laws(rng):
    for _ in range(10):
        u = random_unit(C22, rng)
        for x in range(-5, 6):
            assert unit_pow_rat(u, Fraction(x)) == unit_pow_int(u, x)
        third = unit_pow_rat(u, Fraction(1, 3))
        assert unit_pow_int(third, 3) == u
        x, y = Fraction(rng.randint(-6, 6), 5), Fraction(rng.randint(-6, 6), 7)
        assert unit_pow_rat(u, x) * unit_pow_rat(u, y) == unit_pow_rat(u, x + y)


@given(units(C33), units(C33))
def test_commutator_raises_valuation(u, v):
    assert valuation(group_commutator(u, v)) >= min(valuation(u) + valuation(v), C33.r + 1)
    assert unit_inv(unit_inv(u)) == u
    assert u * unit_inv(u) == C33.one()
