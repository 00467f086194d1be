import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from nilcert.weighted import (InterpolationError, PolyMap, WeightBoundError, WeightedPoly, compose,
                              cross_map, eval_poly, evaluate, format_weighted, interpolate, map_from_json,
                              map_to_json, monomials_within, poly_from_json, poly_to_json, product_map,
                              tensor_exponents)

W1 = (1,)


def x_(weights=W1, i=0):
    return WeightedPoly.variable(weights, i)


def test_eval_examples():
    assert WeightedPoly.constant((1, 1), 1)((7, -3)) == 1
    xy = WeightedPoly((1, 1), {(1, 1): 1})
    assert eval_poly(xy, (2, 3)) == 6
    half_binom = WeightedPoly(W1, {(2,): Fraction(1, 2), (1,): Fraction(-1, 2)})
    assert evaluate(half_binom, (5,)) == 10
    with pytest.raises(ValueError):
        eval_poly(xy, (1,))


def test_bound_enforced():
    with pytest.raises(WeightBoundError):
        WeightedPoly((1, 2), {(1, 1): 1}, bound=2)
    assert WeightedPoly((1, 2), {(1, 1): 1}).degree() == 3
    with pytest.raises(WeightBoundError):
        PolyMap(W1, (1,), [x_() * x_()])


def test_compose_examples():
    f = PolyMap(W1, W1, [x_() + WeightedPoly.constant(W1, 1)])
    assert compose(PolyMap.identity(W1), f) == f
    g = PolyMap(W1, (2,), [x_() * x_()])
    got = compose(g, f).components[0]
    assert got == WeightedPoly(W1, {(2,): 1, (1,): 2, (0,): 1}, 2)
    with pytest.raises(WeightBoundError):
        compose(g, g)


def test_product_examples():
    sq = PolyMap(W1, (2,), [x_() * x_()])
    pm = product_map(PolyMap.identity(W1), sq)
    assert pm.target_weights == (1, 2)
    assert pm((3,)) == [3, 9]
    diag = product_map(PolyMap.identity(W1), PolyMap.identity(W1))
    assert diag((4,)) == [4, 4]
    with pytest.raises(WeightBoundError):
        product_map(sq, PolyMap.identity((1, 1)))


def test_cross_map():
    sq = PolyMap(W1, (2,), [x_() * x_()])
    c = cross_map(sq, PolyMap.identity((2,)))
    assert c.source_weights == (1, 2)
    assert c((3, 5)) == [9, 5]


def test_interpolate_examples():
    assert interpolate(lambda p: [p[0]], W1, W1).components[0] == x_()
    f = interpolate(lambda p: [comb(p[0], 2) if p[0] >= 0 else p[0] * (p[0] - 1) // 2], W1, (2,))
    assert f.components[0] == WeightedPoly(W1, {(2,): Fraction(1, 2), (1,): Fraction(-1, 2)}, 2)
    assert f((4,)) == [6]
    g = interpolate(lambda p: [p[0] * p[1]], (1, 1), (2,), grid="tensor")
    assert g.components[0] == WeightedPoly((1, 1), {(1, 1): 1}, 2)
    assert g((3, 5)) == [15]


def test_interpolate_rejects_high_degree():
    with pytest.raises(InterpolationError) as info:
        interpolate(lambda p: [p[0] ** 3], W1, (2,))
    assert info.value.point is not None
    with pytest.raises(InterpolationError):
        interpolate(lambda p: [p[0] ** 3], W1, (2,), grid="tensor")


def test_grids():
    assert monomials_within((1, 2), 2) == [(0, 0), (1, 0), (0, 1), (2, 0)]
    assert sorted(tensor_exponents((1, 2), 2)) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
    assert monomials_within((1,), -1) == []


def random_poly(rng, weights, bound):
    exps = monomials_within(weights, bound)
    return WeightedPoly(weights, {rng.choice(exps): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                                  for _ in range(4)}, bound)


def test_interpolation_round_trip(rng):
    for weights, bound in [((1,), 3), ((1, 1), 3), ((1, 2), 4), ((1, 1, 2), 3)]:
        for grid in ("simplex", "tensor"):
            p = random_poly(rng, weights, bound)
            got = interpolate(lambda pt: [p(pt)], weights, (bound,), grid=grid, seed=3)
            assert got.components[0] == p


def test_compose_pointwise(rng):
    src, mid = (1, 1), (1, 2)
    for _ in range(50):
        f = PolyMap(src, mid, [random_poly(rng, src, t) for t in mid])
        g = PolyMap(mid, (2, 3), [random_poly(rng, mid, t) for t in (2, 3)])
        h = compose(g, f)
        assert h.audit()
        for _ in range(2):
            x = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in src]
            assert h(x) == g(f(x))


@given(st.integers(0, 4), st.integers(0, 10**6))
def test_json_round_trip(bound, seed):
    p = random_poly(random.Random(seed), (1, 2), bound)
    assert poly_from_json(poly_to_json(p)) == p
    m = PolyMap((1, 2), (bound,), [p])
    assert map_from_json(map_to_json(m)) == m


def test_text_form():
    p = WeightedPoly((1, 1), {(1, 0): 1, (0, 1): -1, (1, 1): Fraction(-1, 2)})
    assert format_weighted(p) == "x1 - x2 - 1/2*x1*x2"
    assert format_weighted(WeightedPoly((1,), {})) == "0"
