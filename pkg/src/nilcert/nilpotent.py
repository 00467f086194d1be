"""The free nilpotent group of rank ``n`` and class ``r``.

Elements are handled through the Magnus map ``Z_i -> 1 + T_i`` into the
truncated free algebra and through Mal'cev coordinates with respect to a
basis of basic commutators.  Group words are tuples of nonzero integers:
``i`` for ``Z_i`` and ``-i`` for its inverse.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (AlgebraContext, TruncatedPoly, Unit, format_poly, homogeneous_component,
                      unit_pow_int, valuation)
from .exact import as_rational, rank, solve_linear_multi
from .weighted import PolyMap, interpolate

GroupWord = tuple


class BasisError(RuntimeError):
    """Candidate basis elements have linearly dependent leading terms."""


class NonIntegralCoordinateError(RuntimeError):
    pass


class NonTrivialResidualError(RuntimeError):
    pass


# -- group words --------------------------------------------------------------


def reduce_word(word: Sequence[int]) -> GroupWord:
    out: list[int] = []
    for a in word:
        if a == 0:
            raise ValueError("0 is not a generator")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def word_inverse(word: Sequence[int]) -> GroupWord:
    return tuple(-a for a in reversed(word))


def word_commutator(u: Sequence[int], v: Sequence[int]) -> GroupWord:
    """``[u, v] = u^-1 v^-1 u v``."""
    return reduce_word(word_inverse(u) + word_inverse(v) + tuple(u) + tuple(v))


def word_power(u: Sequence[int], k: int) -> GroupWord:
    base = tuple(u) if k >= 0 else word_inverse(u)
    return reduce_word(base * abs(k))


_LETTER = re.compile(r"^[Zz](\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> GroupWord:
    """Parse ``"Z1 Z2^-1 Z1^3"``; ``""``, ``"1"`` and ``"e"`` are the identity."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    out: list[int] = []
    for tok in text.replace("*", " ").split():
        m = _LETTER.match(tok)
        if not m:
            raise ValueError(f"cannot parse group letter {tok!r}")
        i = int(m.group(1))
        if i < 1:
            raise ValueError(f"generator index must be >= 1 in {tok!r}")
        k = int(m.group(2)) if m.group(2) is not None else 1
        out.extend([i if k > 0 else -i] * abs(k))
    return reduce_word(out)


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        a = word[i]
        k = 1
        while i + k < len(word) and word[i + k] == a:
            k += 1
        e = k if a > 0 else -k
        parts.append(f"Z{abs(a)}" if e == 1 else f"Z{abs(a)}^{e}")
        i += k
    return " ".join(parts)


def magnus_rho(word: Sequence[int], ctx: AlgebraContext) -> Unit:
    """Image of a group word under ``Z_i -> 1 + T_i``."""
    gens = {}
    out = ctx.one()
    for a in word:
        i = abs(a)
        if not 1 <= i <= ctx.n:
            raise IndexError(f"generator Z{i} out of range 1..{ctx.n}")
        if a not in gens:
            u = Unit(ctx, {(): 1, (i,): 1})
            gens[a] = u if a > 0 else u.inv()
        out = out * gens[a]
    return out


# -- basic commutators --------------------------------------------------------


def _bracket_str(tree) -> str:
    if isinstance(tree, int):
        return f"Z{tree}"
    return f"[{_bracket_str(tree[0])},{_bracket_str(tree[1])}]"


def _tree_word(tree) -> GroupWord:
    if isinstance(tree, int):
        return (tree,)
    return word_commutator(_tree_word(tree[0]), _tree_word(tree[1]))


def basic_commutators(n: int, r: int) -> list[tuple]:
    """Basic commutators of weight ``<= r`` as ``(tree, weight)`` pairs.

    A bracket ``[u, v]`` of earlier basic commutators is basic when ``u``
    precedes ``v`` and, if ``v = [x, y]``, ``x`` does not come after ``u``.
    Ordering is by weight, then by the positions of ``(u, v)``.
    """
    basics: list[tuple] = [(i, 1) for i in range(1, n + 1)] if r >= 1 else []
    left_pos: list[int | None] = [None] * len(basics)
    for k in range(2, r + 1):
        found = []
        for ui, (u, wu) in enumerate(basics):
            for vi in range(ui + 1, len(basics)):
                v, wv = basics[vi]
                if wu + wv != k:
                    continue
                if left_pos[vi] is not None and left_pos[vi] > ui:
                    continue
                found.append((ui, vi))
        for ui, vi in found:
            basics.append(((basics[ui][0], basics[vi][0]), k))
            left_pos.append(ui)
    return basics


# -- Mal'cev basis ------------------------------------------------------------


@dataclass
class BasisEntry:
    word: GroupWord
    weight: int
    sigma: TruncatedPoly
    phi: dict
    bracket: str


@dataclass
class MalcevBasis:
    ctx: AlgebraContext
    entries: list
    rho: list = field(repr=False)

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def r(self) -> int:
        return self.ctx.r

    @property
    def q(self) -> int:
        return len(self.entries)

    @property
    def weights(self) -> tuple:
        return tuple(e.weight for e in self.entries)

    def thresholds(self) -> list[int]:
        """1-based ``j_s`` for ``s = 1..r+1``: first index of weight ``>= s``."""
        out = []
        for s in range(1, self.r + 2):
            out.append(next((j + 1 for j, e in enumerate(self.entries) if e.weight >= s), self.q + 1))
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "q": self.q,
            "entries": [
                {"word": format_word(e.word), "bracket": e.bracket, "weight": e.weight,
                 "sigma": format_poly(e.sigma)}
                for e in self.entries
            ],
        }

    def stamp(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def phi_apply(self, j: int, u: TruncatedPoly) -> Fraction:
        """``phi_j`` (0-based ``j``) applied to the weight-``s_j`` part of ``u``."""
        e = self.entries[j]
        return sum((c * u.coeff(w) for w, c in e.phi.items()), Fraction(0))


_BASIS_CACHE: dict = {}


def build_basis(n: int, r: int) -> MalcevBasis:
    """Mal'cev basis of basic commutators for rank ``n``, class ``r``."""
    key = (n, r)
    if key in _BASIS_CACHE:
        return _BASIS_CACHE[key]
    ctx = AlgebraContext(n, r)
    trees = basic_commutators(n, r)
    entries = []
    rhos = []
    for s in range(1, r + 1):
        layer = [(t, w) for t, w in trees if w == s]
        if not layer:
            continue
        words_s = ctx.words(s)
        sigmas, vecs, layer_rho = [], [], []
        for tree, _ in layer:
            word = _tree_word(tree)
            u = magnus_rho(word, ctx)
            if valuation(u) < s:
                raise BasisError(f"{_bracket_str(tree)} has valuation {valuation(u)} < weight {s}")
            sig = homogeneous_component(u, s)
            sigmas.append(sig)
            vecs.append([sig.coeff(w) for w in words_s])
            layer_rho.append(u)
        if rank(vecs) != len(vecs):
            raise BasisError(f"weight-{s} leading terms are linearly dependent")
        gram = [[sum((a * b for a, b in zip(v1, v2)), Fraction(0)) for v2 in vecs] for v1 in vecs]
        ident = [[Fraction(int(i == k)) for i in range(len(vecs))] for k in range(len(vecs))]
        dual = solve_linear_multi(gram, ident, require_unique=True)
        for k, ((tree, _), sig) in enumerate(zip(layer, sigmas)):
            coeffs = dual[k]
            phi = {}
            for idx, w in enumerate(words_s):
                c = sum((coeffs[m] * vecs[m][idx] for m in range(len(vecs))), Fraction(0))
                if c:
                    phi[w] = c
            entries.append(BasisEntry(_tree_word(tree), s, sig, phi, _bracket_str(tree)))
        rhos.extend(layer_rho)
    basis = MalcevBasis(ctx, entries, rhos)
    _BASIS_CACHE[key] = basis
    return basis


# -- coordinates --------------------------------------------------------------


def _padded(x: Sequence, basis: MalcevBasis):
    if len(x) != basis.q:
        raise ValueError(f"coordinate vector of length {len(x)}, basis has q={basis.q}")


def beta(x: Sequence[int], basis: MalcevBasis) -> Unit:
    """``rho(b_1^x_1 ... b_q^x_q)``."""
    _padded(x, basis)
    out = basis.ctx.one()
    for u, k in zip(basis.rho, x):
        if k:
            out = out * unit_pow_int(u, int(k))
    return out


def beta_hat(x: Sequence, basis: MalcevBasis) -> Unit:
    """Rational-exponent extension of :func:`beta`."""
    _padded(x, basis)
    out = basis.ctx.one()
    for u, k in zip(basis.rho, x):
        k = as_rational(k)
        if k:
            out = out * (u ** k)
    return out


def coords_hat(u: Unit, basis: MalcevBasis) -> tuple[list[Fraction], Unit]:
    """Peel off ``rho(b_j)^x_j`` for ``j = 1..q``; returns coordinates and residual."""
    if u.constant() != 1:
        raise ValueError("coordinates are defined on units only")
    v = u if isinstance(u, Unit) else Unit.from_poly(u)
    xs = []
    for j, entry in enumerate(basis.entries):
        xj = basis.phi_apply(j, v)
        xs.append(xj)
        if xj:
            v = (basis.rho[j] ** (-xj)) * v
    return xs, v


def _integral(xs, what) -> tuple[int, ...]:
    for k, x in enumerate(xs):
        if x.denominator != 1:
            raise NonIntegralCoordinateError(f"coordinate {k + 1} of {what} is {x}")
    return tuple(int(x) for x in xs)


def coords_of_unit(u: Unit, basis: MalcevBasis, what="unit") -> tuple[int, ...]:
    xs, res = coords_hat(u, basis)
    if res != basis.ctx.one():
        raise NonTrivialResidualError(f"residual {format_poly(res)} after peeling {what}")
    return _integral(xs, what)


def coords(word: Sequence[int], basis: MalcevBasis) -> tuple[int, ...]:
    """Mal'cev coordinates of a group word (collection to normal form)."""
    return coords_of_unit(magnus_rho(word, basis.ctx), basis, format_word(word))


def mult_coords(x: Sequence[int], y: Sequence[int], basis: MalcevBasis) -> tuple[int, ...]:
    return coords_of_unit(beta(x, basis) * beta(y, basis), basis, "product")


def inverse_coords(x: Sequence[int], basis: MalcevBasis) -> tuple[int, ...]:
    return coords_of_unit(beta(x, basis).inv(), basis, "inverse")


def power_coords(x: Sequence[int], k: int, basis: MalcevBasis) -> tuple[int, ...]:
    return coords_of_unit(unit_pow_int(beta(x, basis), k), basis, "power")


def basis_word(x: Sequence[int], basis: MalcevBasis) -> GroupWord:
    """A group word for ``b_1^x_1 ... b_q^x_q``."""
    out: tuple = ()
    for e, k in zip(basis.entries, x):
        out += word_power(e.word, int(k))
    return reduce_word(out)


def mult_polynomials(basis: MalcevBasis, j: int, **interp) -> PolyMap:
    """Multiplication polynomials on ``N^j`` (1-based ``j``).

    Source is ``(x_j..x_q, y_j..y_q)``, target the coordinates of the
    product; fitted by interpolation against rational Magnus arithmetic.
    """
    q = basis.q
    if not 1 <= j <= q + 1:
        raise ValueError(f"j={j} outside 1..{q + 1}")
    w = basis.weights[j - 1:]
    k = len(w)
    pad = [0] * (j - 1)

    def oracle(pt):
        u = beta_hat(pad + list(pt[:k]), basis) * beta_hat(pad + list(pt[k:]), basis)
        xs, _ = coords_hat(u, basis)
        return xs[j - 1:]

    return interpolate(oracle, w + w, w, **interp)


def exp_polynomials(h: Sequence[int], j: int, basis: MalcevBasis, **interp) -> PolyMap:
    """Coordinates of ``h^x`` as a polynomial in ``x``, for ``h`` in ``N^j``."""
    q = basis.q
    if not 1 <= j <= q:
        raise ValueError(f"j={j} outside 1..{q}")
    _padded(h, basis)
    if any(h[:j - 1]):
        raise ValueError(f"h={tuple(h)} is not supported on coordinates >= {j}")
    rho_h = beta(h, basis)
    w = basis.weights[j - 1:]

    def oracle(pt):
        xs, _ = coords_hat(unit_pow_int(rho_h, int(pt[0])), basis)
        return xs[j - 1:]

    return interpolate(oracle, (basis.weights[j - 1],), w, **interp)
