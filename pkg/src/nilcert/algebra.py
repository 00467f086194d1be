"""Truncated free associative algebra over the rationals and its unit group.

Elements live in ``Q<T1..Tn> / (words of length > r)``.  A word is a tuple
of 1-based generator indices, ``(1, 2)`` standing for ``T1.T2``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterator, Mapping

from .exact import as_rational, rational_str

Word = tuple


class ContextMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraContext:
    n: int
    r: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one generator")
        if self.r < 0:
            raise ValueError("truncation order must be >= 0")

    def words(self, length: int) -> list[Word]:
        """All words of exactly ``length`` letters, lexicographically."""
        return list(product(range(1, self.n + 1), repeat=length))

    @cached_property
    def all_words(self) -> list[Word]:
        return [w for s in range(self.r + 1) for w in self.words(s)]

    def one(self) -> "Unit":
        return Unit(self, {(): Fraction(1)})

    def zero(self) -> "TruncatedPoly":
        return TruncatedPoly(self, {})

    def gen(self, i: int) -> "TruncatedPoly":
        """The variable ``T_i`` (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"generator T{i} out of range 1..{self.n}")
        return TruncatedPoly(self, {(i,): Fraction(1)})


class TruncatedPoly:
    """An element of ``A/A^(r+1)``; immutable, zero coefficients pruned."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: AlgebraContext, terms: Mapping[Word, object] = ()):
        self.ctx = ctx
        clean = {}
        for w, c in dict(terms).items():
            w = tuple(w)
            if len(w) > ctx.r:
                continue
            if any(not 1 <= i <= ctx.n for i in w):
                raise IndexError(f"word {w} uses a generator outside 1..{ctx.n}")
            c = as_rational(c)
            if c:
                clean[w] = c
        self.terms = clean
        self._hash = None

    # -- structure -----------------------------------------------------------

    def _check(self, other: "TruncatedPoly"):
        if other.ctx != self.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")

    def coeff(self, word: Word) -> Fraction:
        return self.terms.get(tuple(word), Fraction(0))

    def constant(self) -> Fraction:
        return self.coeff(())

    def min_degree(self) -> int | None:
        return min((len(w) for w in self.terms), default=None)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedPoly):
            other = TruncatedPoly(self.ctx, {(): other})
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return TruncatedPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TruncatedPoly):
            other = TruncatedPoly(self.ctx, {(): other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedPoly":
        c = as_rational(c)
        return TruncatedPoly(self.ctx, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TruncatedPoly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __repr__(self):
        return f"TruncatedPoly(n={self.ctx.n}, r={self.ctx.r}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


class Unit(TruncatedPoly):
    """An element ``1 + w`` with ``w`` in ``A^(1)/A^(r+1)``."""

    __slots__ = ("_powers",)

    def __init__(self, ctx, terms=()):
        super().__init__(ctx, terms)
        if self.terms.get(()) != 1:
            raise ValueError("a unit must have constant term exactly 1")
        self._powers = None

    @classmethod
    def from_poly(cls, p: TruncatedPoly) -> "Unit":
        return cls(p.ctx, p.terms)

    def excess(self) -> TruncatedPoly:
        """``u - 1``."""
        return TruncatedPoly(self.ctx, {w: c for w, c in self.terms.items() if w})

    def excess_powers(self) -> list[TruncatedPoly]:
        """``[(u-1)^0, ..., (u-1)^r]``; higher powers vanish."""
        if self._powers is None:
            w = self.excess()
            pw = [TruncatedPoly(self.ctx, {(): 1})]
            for _ in range(self.ctx.r):
                nxt = poly_mul(pw[-1], w)
                if nxt.is_zero():
                    break
                pw.append(nxt)
            self._powers = pw
        return self._powers

    def __mul__(self, other):
        if isinstance(other, Unit):
            return unit_mul(self, other)
        return super().__mul__(other)

    def inv(self) -> "Unit":
        return unit_inv(self)

    def __pow__(self, x):
        if isinstance(x, int):
            return unit_pow_int(self, x)
        return unit_pow_rat(self, x)

    def __repr__(self):
        return f"Unit(n={self.ctx.n}, r={self.ctx.r}, {format_poly(self)!r})"


def poly_mul(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    a._check(b)
    r = a.ctx.r
    by_len: dict[int, list] = {}
    for w, c in b.terms.items():
        by_len.setdefault(len(w), []).append((w, c))
    out: dict = {}
    for wa, ca in a.terms.items():
        room = r - len(wa)
        for s, items in by_len.items():
            if s > room:
                continue
            for wb, cb in items:
                w = wa + wb
                out[w] = out.get(w, 0) + ca * cb
    return TruncatedPoly(a.ctx, out)


def valuation(u: TruncatedPoly) -> int:
    """Largest ``s`` with ``u - 1`` in ``A^(s)``; ``r + 1`` when ``u == 1``."""
    d = (u - 1).min_degree()
    return u.ctx.r + 1 if d is None else d


def unit_mul(u: Unit, v: Unit) -> Unit:
    return Unit.from_poly(poly_mul(u, v))


def _binomial(x: Fraction, p: int) -> Fraction:
    """Generalized binomial coefficient ``x (x-1) ... (x-p+1) / p!``."""
    out = Fraction(1)
    for i in range(p):
        out = out * (x - i) / (i + 1)
    return out


def _binomial_series(u: Unit, x: Fraction) -> Unit:
    out: dict = {}
    for p, wp in enumerate(u.excess_powers()):
        c = _binomial(x, p)
        if not c:
            continue
        for w, v in wp.terms.items():
            out[w] = out.get(w, 0) + c * v
    return Unit(u.ctx, out)


def unit_inv(u: Unit) -> Unit:
    """Finite geometric series ``sum_p (-w)^p`` for ``u = 1 + w``."""
    return _binomial_series(u, Fraction(-1))


def unit_pow_int(u: Unit, x: int) -> Unit:
    if not isinstance(x, int):
        raise TypeError("integer exponent required")
    return _binomial_series(u, Fraction(x))


def unit_pow_rat(u: Unit, x) -> Unit:
    """``u^x = sum_p C(x, p) (u - 1)^p`` for rational ``x``."""
    return _binomial_series(u, as_rational(x))


def group_commutator(u: Unit, v: Unit) -> Unit:
    """``u^-1 v^-1 u v``."""
    return unit_inv(u) * unit_inv(v) * u * v


def homogeneous_component(w: TruncatedPoly, s: int) -> TruncatedPoly:
    if not 0 <= s <= w.ctx.r:
        raise ValueError(f"degree {s} outside 0..{w.ctx.r}")
    return TruncatedPoly(w.ctx, {k: c for k, c in w.terms.items() if len(k) == s})


def components(w: TruncatedPoly) -> Iterator[TruncatedPoly]:
    for s in range(w.ctx.r + 1):
        yield homogeneous_component(w, s)


# -- text form ----------------------------------------------------------------


def _term_key(item):
    w, _ = item
    return (len(w), w)


def format_poly(p: TruncatedPoly) -> str:
    """Render as e.g. ``1 + 3 T1 - 1/2 T1.T2``."""
    if p.is_zero():
        return "0"
    parts = []
    for w, c in sorted(p.terms.items(), key=_term_key):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = ".".join(f"T{i}" for i in w)
        if not w:
            body = rational_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{rational_str(mag)} {mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\s*)?((?:T\d+)(?:\.T\d+)*)?$")


def parse_poly(text: str, ctx: AlgebraContext) -> TruncatedPoly:
    """Inverse of :func:`format_poly`."""
    text = text.strip()
    if text == "0":
        return ctx.zero()
    tokens = re.split(r"\s+([+-])\s+", text)
    signs = ["+"]
    if tokens[0].startswith("-"):
        signs = ["-"]
        tokens[0] = tokens[0][1:]
    bodies = [tokens[0]]
    for i in range(1, len(tokens), 2):
        signs.append(tokens[i])
        bodies.append(tokens[i + 1])
    terms: dict = {}
    for sign, body in zip(signs, bodies):
        m = _TERM.match(body.strip())
        if not m or not (m.group(1) or m.group(2)):
            raise ValueError(f"cannot parse term {body!r}")
        c = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        w = tuple(int(t[1:]) for t in m.group(2).split(".")) if m.group(2) else ()
        terms[w] = terms.get(w, 0) + (c if sign == "+" else -c)
    return TruncatedPoly(ctx, terms)
