"""r-similarity and invariant order on fundamental-group models.

A fundamental group is modeled by a group, never by a space: two loops are
r-similar exactly when ``a^-1 b`` lies in ``gamma^(r+1)``, and the order of an
invariant equals its augmentation-ideal degree.  Every report records that
substitution under ``"model"``.
"""
from __future__ import annotations

from typing import Sequence

from .group_ring import FnTable, degree_of_function
from .groups import FiniteGroup, gamma
from .nilpotent import build_basis, inverse_coords, mult_coords

MODEL_NOTE = ("pi_1 modeled by a group; r-similarity read as congruence modulo gamma^(r+1), "
              "invariant order read as augmentation-ideal degree")


class InfiniteModelError(ValueError):
    pass


class FiniteModel:
    """A finite group as a fundamental-group model."""

    finite = True

    def __init__(self, G: FiniteGroup):
        self.G = G

    def multiply(self, a, b):
        return self.G.mul(a, b)

    def invert(self, a):
        return self.G.inv(a)

    def identity(self):
        return self.G.identity

    def gamma_member(self, g, s: int) -> bool:
        return g in gamma(self.G, s)

    def elements(self):
        return list(self.G.elements())

    def describe(self) -> str:
        return f"finite group {self.G.name or ''} of order {self.G.order}".replace("  ", " ")


class FreeNilpotentModel:
    """The free nilpotent group of rank ``n`` and class ``c`` in Mal'cev coordinates."""

    finite = False

    def __init__(self, n: int, c: int):
        self.basis = build_basis(n, c)

    def multiply(self, a, b):
        return mult_coords(a, b, self.basis)

    def invert(self, a):
        return inverse_coords(a, self.basis)

    def identity(self):
        return (0,) * self.basis.q

    def gamma_member(self, g, s: int) -> bool:
        return all(x == 0 for x, w in zip(g, self.basis.weights) if w < s)

    def elements(self):
        raise InfiniteModelError("free nilpotent groups are infinite")

    def describe(self) -> str:
        return f"free nilpotent group of rank {self.basis.n} and class {self.basis.r}"


def r_similar(a, b, r: int, model) -> bool:
    return model.gamma_member(model.multiply(model.invert(a), b), r + 1)


def similarity_classes(model, r: int) -> list[list]:
    """Cosets of ``gamma^(r+1)``; checks that left and right cosets agree."""
    if not model.finite:
        raise InfiniteModelError("similarity classes need a finite model")
    elems = model.elements()
    H = [g for g in elems if model.gamma_member(g, r + 1)]
    left = {frozenset(model.multiply(a, h) for h in H) for a in elems}
    right = {frozenset(model.multiply(h, a) for h in H) for a in elems}
    if left != right:
        raise AssertionError("gamma term is not normal: left and right cosets differ")
    return sorted(sorted(c) for c in left)


def n_series_check(model, p: int, q: int) -> dict:
    """Every commutator of a ``gamma^p`` element with a ``gamma^q`` element lies in ``gamma^(p+q)``."""
    if not model.finite:
        raise InfiniteModelError("enumeration needs a finite model")
    elems = model.elements()
    A = [g for g in elems if model.gamma_member(g, p)]
    B = [g for g in elems if model.gamma_member(g, q)]
    bad = []
    for a in A:
        for b in B:
            c = model.multiply(model.multiply(model.invert(a), model.invert(b)), model.multiply(a, b))
            if not model.gamma_member(c, p + q):
                bad.append([a, b])
    return {"check": "n_series", "p": p, "q": q, "pairs": len(A) * len(B),
            "status": "holds" if not bad else "failed", "counterexamples": bad[:10],
            "model": MODEL_NOTE}


def invariant_order(f: FnTable, model, r_max: int) -> dict:
    if not model.finite:
        raise InfiniteModelError("invariant order needs a finite model")
    value = degree_of_function(model.G, f, r_max)
    return {"order": value, "r_max": r_max, "computed_as": "degree of f on augmentation ideal powers",
            "model": MODEL_NOTE}


def similarity_report(model, r: int, pair: Sequence | None = None) -> dict:
    out = {"r": r, "model": MODEL_NOTE, "group": model.describe()}
    if pair is not None:
        a, b = pair
        out["pair"] = [a, b]
        out["similar"] = r_similar(a, b, r, model)
    else:
        out["classes"] = similarity_classes(model, r)
    return out
