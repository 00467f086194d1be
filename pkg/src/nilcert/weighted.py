"""Polynomials with weighted-degree bounds, and polynomial maps between them.

Variable ``i`` carries a positive weight ``s_i``; a monomial
``x1^e1 ... xm^em`` has weighted degree ``sum(e_i * s_i)``.  A
:class:`PolyMap` from weights ``(s_1..s_m)`` to weights ``(t_1..t_k)`` has
component ``j`` of weighted degree at most ``t_j``; these are exactly the maps
that respect the weight filtrations, and they compose.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Sequence

from .exact import as_rational, rational_str, solve_linear_multi


class WeightBoundError(ValueError):
    pass


class InterpolationError(RuntimeError):
    """The oracle is not a polynomial map within the declared bounds."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


def weighted_degree(exps: Sequence[int], weights: Sequence[int]) -> int:
    return sum(e * s for e, s in zip(exps, weights))


class WeightedPoly:
    """A rational polynomial in ``m`` weighted variables with a degree bound."""

    __slots__ = ("weights", "terms", "bound")

    def __init__(self, weights: Sequence[int], terms: Mapping = (), bound: int | None = None):
        self.weights = tuple(int(s) for s in weights)
        if any(s < 1 for s in self.weights):
            raise ValueError(f"weights must be positive: {self.weights}")
        m = len(self.weights)
        clean = {}
        for e, c in dict(terms).items():
            e = tuple(int(x) for x in e)
            if len(e) != m or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {m} variables")
            c = as_rational(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}
        actual = self.degree()
        if bound is None:
            bound = max(actual, 0)
        if actual > bound:
            raise WeightBoundError(f"weighted degree {actual} exceeds bound {bound}")
        self.bound = int(bound)

    @classmethod
    def constant(cls, weights, c, bound=0):
        m = len(weights)
        return cls(weights, {(0,) * m: c}, bound)

    @classmethod
    def variable(cls, weights, i, bound=None):
        """The coordinate function ``x_i`` (0-based ``i``)."""
        m = len(weights)
        e = tuple(1 if k == i else 0 for k in range(m))
        return cls(weights, {e: 1}, weights[i] if bound is None else bound)

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def degree(self) -> int:
        """Weighted degree of the stored monomials; ``-1`` for the zero polynomial."""
        return max((weighted_degree(e, self.weights) for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def audit(self) -> bool:
        return all(weighted_degree(e, self.weights) <= self.bound for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, WeightedPoly):
            return NotImplemented
        return self.weights == other.weights and self.terms == other.terms

    def __hash__(self):
        return hash((self.weights, frozenset(self.terms.items())))

    def _same(self, other):
        if other.weights != self.weights:
            raise WeightBoundError(f"weight mismatch {self.weights} vs {other.weights}")

    def __add__(self, other):
        if not isinstance(other, WeightedPoly):
            other = WeightedPoly.constant(self.weights, other)
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return WeightedPoly(self.weights, out, max(self.bound, other.bound))

    __radd__ = __add__

    def __neg__(self):
        return WeightedPoly(self.weights, {e: -c for e, c in self.terms.items()}, self.bound)

    def __sub__(self, other):
        if not isinstance(other, WeightedPoly):
            other = WeightedPoly.constant(self.weights, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, WeightedPoly):
            c = as_rational(other)
            return WeightedPoly(self.weights, {e: c * v for e, v in self.terms.items()}, self.bound)
        self._same(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return WeightedPoly(self.weights, out, self.bound + other.bound)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = WeightedPoly.constant(self.weights, 1)
        for _ in range(k):
            out = out * self
        return out

    def with_bound(self, bound: int) -> "WeightedPoly":
        return WeightedPoly(self.weights, self.terms, bound)

    def __call__(self, x):
        return eval_poly(self, x)

    def __repr__(self):
        return f"WeightedPoly({format_weighted(self)!r}, weights={self.weights}, bound={self.bound})"


def eval_poly(p: WeightedPoly, x: Sequence) -> Fraction:
    if len(x) != p.nvars:
        raise ValueError(f"point of length {len(x)} for {p.nvars} variables")
    x = [as_rational(v) for v in x]
    total = Fraction(0)
    for e, c in p.terms.items():
        term = c
        for v, k in zip(x, e):
            if k:
                term *= v ** k
        total += term
    return total


class PolyMap:
    """A weight-respecting polynomial map ``Q^m -> Q^k``."""

    __slots__ = ("source_weights", "target_weights", "components")

    def __init__(self, source_weights, target_weights, components):
        self.source_weights = tuple(source_weights)
        self.target_weights = tuple(target_weights)
        comps = list(components)
        if len(comps) != len(self.target_weights):
            raise ValueError(f"{len(comps)} components for {len(self.target_weights)} targets")
        fixed = []
        for p, t in zip(comps, self.target_weights):
            if p.weights != self.source_weights:
                raise WeightBoundError(f"component weights {p.weights} != source {self.source_weights}")
            if p.degree() > t:
                raise WeightBoundError(f"component of weighted degree {p.degree()} exceeds target weight {t}")
            fixed.append(p if p.bound == t else p.with_bound(t))
        self.components = tuple(fixed)

    @classmethod
    def identity(cls, weights):
        weights = tuple(weights)
        return cls(weights, weights, [WeightedPoly.variable(weights, i) for i in range(len(weights))])

    @classmethod
    def projection(cls, weights, indices):
        """``x -> (x_i for i in indices)``."""
        weights = tuple(weights)
        return cls(weights, [weights[i] for i in indices], [WeightedPoly.variable(weights, i) for i in indices])

    def audit(self) -> bool:
        return all(p.audit() and p.bound <= t for p, t in zip(self.components, self.target_weights))

    def __call__(self, x):
        return eval_map(self, x)

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return (self.source_weights, self.target_weights, self.components) == (
            other.source_weights, other.target_weights, other.components)

    def __len__(self):
        return len(self.components)

    def __repr__(self):
        return f"PolyMap({self.source_weights} -> {self.target_weights})"


def eval_map(f: PolyMap, x: Sequence) -> list[Fraction]:
    if len(x) != len(f.source_weights):
        raise ValueError(f"point of length {len(x)} for source dimension {len(f.source_weights)}")
    return [eval_poly(p, x) for p in f.components]


def evaluate(p, x):
    """Evaluate a :class:`WeightedPoly` or a :class:`PolyMap`."""
    if isinstance(p, PolyMap):
        return eval_map(p, x)
    return eval_poly(p, x)


def compose(g: PolyMap, f: PolyMap) -> PolyMap:
    """``g o f``; needs ``f.target_weights == g.source_weights``."""
    if f.target_weights != g.source_weights:
        raise WeightBoundError(f"cannot compose: {f.target_weights} -> {g.source_weights}")
    src = f.source_weights
    power_cache: dict = {}

    def fpow(i, k):
        key = (i, k)
        if key not in power_cache:
            if k == 0:
                power_cache[key] = WeightedPoly.constant(src, 1)
            else:
                power_cache[key] = fpow(i, k - 1) * f.components[i]
        return power_cache[key]

    comps = []
    for p, t in zip(g.components, g.target_weights):
        out: dict = {}
        for e, c in p.terms.items():
            term = WeightedPoly.constant(src, c)
            for i, k in enumerate(e):
                if k:
                    term = term * fpow(i, k)
            for ee, cc in term.terms.items():
                out[ee] = out.get(ee, 0) + cc
        comps.append(WeightedPoly(src, out, t))
    return PolyMap(src, g.target_weights, comps)


def product_map(f: PolyMap, g: PolyMap) -> PolyMap:
    """Map a shared input to the concatenation of both outputs."""
    if f.source_weights != g.source_weights:
        raise WeightBoundError(f"source mismatch {f.source_weights} vs {g.source_weights}")
    return PolyMap(f.source_weights, f.target_weights + g.target_weights, f.components + g.components)


def cross_map(f: PolyMap, g: PolyMap) -> PolyMap:
    """``(x, y) -> (f(x), g(y))`` on the product of the sources."""
    src = f.source_weights + g.source_weights
    m = len(f.source_weights)
    k = len(g.source_weights)

    def lift(p, offset, width):
        return WeightedPoly(src, {(0,) * offset + e + (0,) * (len(src) - offset - width): c
                                  for e, c in p.terms.items()}, p.bound)

    comps = [lift(p, 0, m) for p in f.components] + [lift(p, m, k) for p in g.components]
    return PolyMap(src, f.target_weights + g.target_weights, comps)


# -- interpolation ------------------------------------------------------------


def monomials_within(weights: Sequence[int], bound: int) -> list[tuple[int, ...]]:
    """Exponent vectors of weighted degree at most ``bound``, sorted."""
    out = []

    def rec(i, left, acc):
        if i == len(weights):
            out.append(tuple(acc))
            return
        for e in range(left // weights[i] + 1):
            acc.append(e)
            rec(i + 1, left - e * weights[i], acc)
            acc.pop()

    if bound >= 0:
        rec(0, bound, [])
    return sorted(out, key=lambda e: (weighted_degree(e, weights), e))


def tensor_exponents(weights: Sequence[int], bound: int) -> list[tuple[int, ...]]:
    """Exponent box with variable ``i`` capped at ``bound // s_i``."""
    if bound < 0:
        return []
    return list(product(*[range(bound // s + 1) for s in weights]))


def interpolate(oracle: Callable, source_weights, target_weights, *, grid: str = "simplex",
                verify_points: int = 20, seed: int = 0, box: int = 10) -> PolyMap:
    """Recover a polynomial map from its values at integer points.

    ``oracle`` maps an integer tuple to a sequence of rationals and is
    promised to be a polynomial map whose component ``j`` has weighted
    degree at most ``target_weights[j]``.  Each component is fitted on an
    integer grid anchored at 0 (the exponent set itself, or the full
    per-variable box with ``grid="tensor"``) and then checked at
    ``verify_points`` extra random integer points in ``[-box, box]^m``.
    """
    src = tuple(source_weights)
    tgt = tuple(target_weights)
    m = len(src)
    cache: dict = {}

    def value(pt):
        if pt not in cache:
            vals = [as_rational(v) for v in oracle(pt)]
            if len(vals) != len(tgt):
                raise InterpolationError(f"oracle returned {len(vals)} values, expected {len(tgt)}", pt)
            cache[pt] = vals
        return cache[pt]

    exps_for = monomials_within if grid == "simplex" else tensor_exponents
    if grid not in ("simplex", "tensor"):
        raise ValueError(f"unknown grid {grid!r}")

    comps: list = [None] * len(tgt)
    grid_points: set = set()
    by_bound: dict = {}
    for j, t in enumerate(tgt):
        by_bound.setdefault(t, []).append(j)
    for t, js in sorted(by_bound.items()):
        exps = exps_for(src, t)
        grid_points.update(exps)
        A = [[_monomial_at(e, pt) for e in exps] for pt in exps]
        rhs = [[value(pt)[j] for pt in exps] for j in js]
        sols = solve_linear_multi(A, rhs, require_unique=True) if exps else [[] for _ in js]
        for j, coeffs in zip(js, sols):
            terms = {e: c for e, c in zip(exps, coeffs) if c}
            for e in terms:
                if weighted_degree(e, src) > t:
                    raise InterpolationError(
                        f"component {j} needs monomial {e} of weighted degree "
                        f"{weighted_degree(e, src)} > {t}", e)
            comps[j] = WeightedPoly(src, terms, t)
    fmap = PolyMap(src, tgt, comps)

    rng = random.Random(seed)
    checked = 0
    attempts = 0
    while m and checked < verify_points and attempts < 50 * verify_points:
        attempts += 1
        pt = tuple(rng.randint(-box, box) for _ in range(m))
        if pt in grid_points:
            continue
        got = eval_map(fmap, pt)
        want = value(pt)
        if got != want:
            bad = next(j for j in range(len(tgt)) if got[j] != want[j])
            raise InterpolationError(
                f"interpolant disagrees with oracle at {pt} in component {bad}: "
                f"{got[bad]} != {want[bad]}", pt)
        checked += 1
    return fmap


def _monomial_at(e, pt) -> int:
    out = 1
    for k, v in zip(e, pt):
        if k:
            out *= v ** k
    return out


# -- serialization ------------------------------------------------------------


def format_weighted(p: WeightedPoly, names=None) -> str:
    if p.is_zero():
        return "0"
    names = names or [f"x{i + 1}" for i in range(p.nvars)]
    parts = []
    order = lambda it: (weighted_degree(it[0], p.weights), [-k for k in it[0]])
    for e, c in sorted(p.terms.items(), key=order):
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        mag = abs(c)
        if not mono:
            body = rational_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{rational_str(mag)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def poly_to_json(p: WeightedPoly) -> dict:
    terms = sorted(p.terms.items(), key=lambda it: (weighted_degree(it[0], p.weights), it[0]))
    return {
        "weights": list(p.weights),
        "bound": p.bound,
        "terms": [{"coefficient": rational_str(c), "exponents": list(e)} for e, c in terms],
    }


def poly_from_json(data: Mapping) -> WeightedPoly:
    terms: dict = {}
    for t in data["terms"]:
        e = tuple(t["exponents"])
        terms[e] = terms.get(e, 0) + as_rational(str(t["coefficient"]))
    return WeightedPoly(data["weights"], terms, data["bound"])


def map_to_json(f: PolyMap) -> dict:
    return {
        "source_weights": list(f.source_weights),
        "target_weights": list(f.target_weights),
        "components": [poly_to_json(p) for p in f.components],
    }


def map_from_json(data: Mapping) -> PolyMap:
    return PolyMap(data["source_weights"], data["target_weights"],
                   [poly_from_json(c) for c in data["components"]])
