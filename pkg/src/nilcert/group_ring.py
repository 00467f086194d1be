"""Integer group rings of finite groups and the augmentation ideal filtration.

Group ring elements are sparse ``{element: int}`` maps; powers of the
augmentation ideal are integer lattices in ``Z^|G|`` held in Hermite normal
form.  Ensembles are integer combinations of ``n``-tuples of group elements.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exact import hermite_basis, lattice_member
from .groups import FiniteGroup, Subgroup, gamma

NEG_INF = "-inf"
INF = "inf"


class GroupMismatchError(ValueError):
    pass


class GroupRingElem:
    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs: Mapping[int, int] = ()):
        self.group = group
        clean = {}
        for g, c in dict(coeffs).items():
            if c:
                clean[int(g)] = clean.get(int(g), 0) + int(c)
        self.coeffs = {g: c for g, c in clean.items() if c}

    @classmethod
    def basis_elem(cls, group, g, c=1):
        return cls(group, {g: c})

    @classmethod
    def from_vector(cls, group, vec):
        return cls(group, {g: c for g, c in enumerate(vec) if c})

    def to_vector(self) -> list[int]:
        v = [0] * self.group.order
        for g, c in self.coeffs.items():
            v[g] = c
        return v

    def _check(self, other):
        if other.group is not self.group:
            raise GroupMismatchError("elements of different group rings")

    def __add__(self, other):
        if not isinstance(other, GroupRingElem):
            other = GroupRingElem(self.group, {self.group.identity: other})
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return GroupRingElem(self.group, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, GroupRingElem):
            other = GroupRingElem(self.group, {self.group.identity: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GroupRingElem):
            return ring_mul(self, other)
        return GroupRingElem(self.group, {g: c * other for g, c in self.coeffs.items()})

    def __rmul__(self, other):
        return GroupRingElem(self.group, {g: c * other for g, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.group is other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        G = self.group
        body = " + ".join(f"{c}<{G.labels[g]}>" for g, c in sorted(self.coeffs.items())) or "0"
        return f"GroupRingElem({body})"


def augmentation(e: GroupRingElem) -> int:
    return sum(e.coeffs.values())


def ring_mul(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    a._check(b)
    table = a.group.mul_table
    out: dict = {}
    for g, c in a.coeffs.items():
        row = table[g]
        for h, d in b.coeffs.items():
            k = row[h]
            out[k] = out.get(k, 0) + c * d
    return GroupRingElem(a.group, out)


def ideal_power_basis(G: FiniteGroup, s: int) -> list[tuple[int, ...]]:
    """Hermite basis of ``[G]^s`` in ``Z^|G|``; ``[G]^0`` is the whole ring.

    ``[G]^s`` is spanned by ``v (<g> - 1)`` for ``v`` running over a basis of
    ``[G]^(s-1)`` and ``g`` over ``G``.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    cache = G._cache.setdefault("ideal_powers", [])
    if not cache:
        N = G.order
        cache.append([tuple(int(i == j) for j in range(N)) for i in range(N)])
    e = G.identity
    table = G.mul_table
    while len(cache) <= s:
        prev = cache[-1]
        gens = []
        for v in prev:
            support = [(h, c) for h, c in enumerate(v) if c]
            for g in G.elements():
                if g == e:
                    continue
                w = [0] * G.order
                for h, c in support:
                    w[table[h][g]] += c
                    w[h] -= c
                gens.append(w)
        cache.append(hermite_basis(gens, G.order))
    return cache[s]


def in_ideal_power(e: GroupRingElem, s: int) -> bool:
    return lattice_member(e.to_vector(), ideal_power_basis(e.group, s))


# -- functions to abelian groups ----------------------------------------------


@dataclass
class FnTable:
    """A function ``G -> Z/m_1 x ... x Z/m_k``; modulus 0 stands for ``Z``."""

    moduli: tuple
    values: list

    def __post_init__(self):
        self.moduli = tuple(int(m) for m in self.moduli)
        if any(m < 0 for m in self.moduli):
            raise ValueError("moduli must be >= 0")
        fixed = []
        for v in self.values:
            v = [v] if isinstance(v, int) else list(v)
            if len(v) != len(self.moduli):
                raise ValueError(f"value {v} does not match codomain {self.moduli}")
            fixed.append(tuple(self.reduce(v)))
        self.values = fixed

    def reduce(self, v: Sequence[int]) -> list[int]:
        return [x % m if m else x for x, m in zip(v, self.moduli)]

    def is_zero(self) -> bool:
        return all(not any(v) for v in self.values)

    def linear(self, vec: Sequence[int]) -> tuple:
        """``+f`` applied to a group ring element given as a coefficient vector."""
        acc = [0] * len(self.moduli)
        for c, v in zip(vec, self.values):
            if c:
                for i, x in enumerate(v):
                    acc[i] += c * x
        return tuple(self.reduce(acc))

    def to_json(self) -> dict:
        return {"codomain": {"moduli": list(self.moduli)}, "values": [list(v) for v in self.values]}

    @classmethod
    def from_json(cls, data) -> "FnTable":
        return cls(tuple(data["codomain"]["moduli"]), list(data["values"]))


def degree_of_function(G: FiniteGroup, f: FnTable, r_max: int):
    """Least ``r <= r_max`` with ``+f`` vanishing on ``[G]^(r+1)``.

    Returns an int, :data:`NEG_INF` for the zero function, :data:`INF` when
    the ideal powers have stabilized without ``+f`` vanishing, or the string
    ``">r_max"`` when the budget runs out first.
    """
    if len(f.values) != G.order:
        raise ValueError(f"function has {len(f.values)} values, group has order {G.order}")
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    if f.is_zero():
        return NEG_INF
    zero = tuple([0] * len(f.moduli))
    prev = None
    for r in range(r_max + 1):
        B = ideal_power_basis(G, r + 1)
        if all(f.linear(v) == zero for v in B):
            return r
        if prev is not None and B == prev:
            return INF
        prev = B
    return f">{r_max}"


def dimension_subgroup(G: FiniteGroup, r: int) -> Subgroup:
    """``{g : <g> - <1> in [G]^(r+1)}``."""
    B = ideal_power_basis(G, r + 1)
    e = G.identity
    members = []
    for g in G.elements():
        v = [0] * G.order
        v[g] += 1
        v[e] -= 1
        if lattice_member(v, B):
            members.append(g)
    return Subgroup(G, members)


# -- ensembles ----------------------------------------------------------------


@dataclass
class Ensemble:
    """``sum_i u_i <z_i>`` with ``z_i`` in ``G^n``.

    With ``distinguished`` set, term 0 is the distinguished tuple and must
    carry coefficient 1.
    """

    group: FiniteGroup
    n: int
    terms: list = field(default_factory=list)
    distinguished: bool = False

    def __post_init__(self):
        self.terms = [(int(u), tuple(z)) for u, z in self.terms]
        for _, z in self.terms:
            if len(z) != self.n:
                raise ValueError(f"tuple {z} has length {len(z)}, expected {self.n}")
        if self.distinguished and (not self.terms or self.terms[0][0] != 1):
            raise ValueError("the distinguished term must have coefficient 1")

    def normalized(self) -> dict:
        out: dict = {}
        for u, z in self.terms:
            out[z] = out.get(z, 0) + u
        return {z: u for z, u in out.items() if u}

    def is_zero(self) -> bool:
        return not self.normalized()

    def __eq__(self, other):
        if not isinstance(other, Ensemble):
            return NotImplemented
        return self.group is other.group and self.n == other.n and self.normalized() == other.normalized()

    def __add__(self, other: "Ensemble") -> "Ensemble":
        if other.n != self.n:
            raise ValueError("ensembles of different arity")
        return Ensemble(self.group, self.n, self.terms + other.terms)

    def scale(self, c: int) -> "Ensemble":
        return Ensemble(self.group, self.n, [(c * u, z) for u, z in self.terms])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)


def collapse_M(Z: Ensemble) -> GroupRingElem:
    """``sum_i u_i <z_i1 ... z_in>``."""
    G = Z.group
    out: dict = {}
    for u, z in Z.terms:
        g = G.prod(z)
        out[g] = out.get(g, 0) + u
    return GroupRingElem(G, out)


def marginal(Z: Ensemble, K: Iterable[int]) -> Ensemble:
    """Project onto the coordinates in ``K`` (0-based) and collect terms."""
    K = sorted(set(K))
    if any(not 0 <= k < Z.n for k in K):
        raise ValueError(f"coordinates {K} outside 0..{Z.n - 1}")
    proj: dict = {}
    for u, z in Z.terms:
        key = tuple(z[k] for k in K)
        proj[key] = proj.get(key, 0) + u
    return Ensemble(Z.group, len(K), sorted((u, z) for z, u in proj.items() if u))


def _reset_outside(z, L, e):
    return tuple(x if k in L else e for k, x in enumerate(z))


def s_K_operator(Z: Ensemble, K: Iterable[int]) -> Ensemble:
    """``sum_{L subset K} (-1)^|L| <rho_L>(Z)``; ``rho_L`` resets coordinates outside ``L`` to 1."""
    K = sorted(set(K))
    e = Z.group.identity
    out = []
    for size in range(len(K) + 1):
        sign = -1 if size % 2 else 1
        for L in combinations(K, size):
            Ls = set(L)
            out.extend((sign * u, _reset_outside(z, Ls, e)) for u, z in Z.terms)
    return Ensemble(Z.group, Z.n, out)


def subsets(n: int, max_size: int | None = None):
    top = n if max_size is None else min(n, max_size)
    for size in range(top + 1):
        yield from combinations(range(n), size)


def random_ensemble(G: FiniteGroup, n: int, rng: random.Random, terms: int = 4, coef: int = 3) -> Ensemble:
    out = []
    for _ in range(terms):
        u = rng.choice([c for c in range(-coef, coef + 1) if c])
        out.append((u, tuple(rng.randrange(G.order) for _ in range(n))))
    return Ensemble(G, n, out)


def mobius_identity_check(G: FiniteGroup, n: int, samples: int = 50, seed: int = 0, cap: int = 3) -> dict:
    """Check ``sum_K (-1)^|K| S_K = id`` on random ensembles."""
    if n > cap:
        raise ValueError(f"n={n} exceeds cap {cap}")
    rng = random.Random(seed)
    failures = []
    for trial in range(samples):
        Z = random_ensemble(G, n, rng)
        total = Ensemble(G, n, [])
        for K in subsets(n):
            SK = s_K_operator(Z, K)
            total = total + (SK if len(K) % 2 == 0 else -SK)
        if total != Z:
            failures.append({"trial": trial, "ensemble": Z.terms})
    return {"check": "mobius_identity", "n": n, "samples": samples, "seed": seed,
            "status": "holds" if not failures else "failed", "failures": failures}


def tensor_difference(G: FiniteGroup, n: int, slots: Sequence[int], pairs: Sequence[tuple],
                      fill: Sequence[int] | None = None, coef: int = 1) -> Ensemble:
    """``coef * prod_t (<a_t> - <b_t>)`` placed in coordinates ``slots``, ``fill`` elsewhere.

    Every marginal onto fewer than ``len(slots)`` coordinates vanishes.
    """
    if len(slots) != len(pairs):
        raise ValueError("one (a, b) pair per slot")
    base = list(fill) if fill is not None else [G.identity] * n
    out = []
    for mask in range(1 << len(slots)):
        z = list(base)
        sign = coef
        for t, (slot, (a, b)) in enumerate(zip(slots, pairs)):
            if mask >> t & 1:
                z[slot] = b
                sign = -sign
            else:
                z[slot] = a
        out.append((sign, tuple(z)))
    return Ensemble(G, n, out)


def random_premise_ensemble(G: FiniteGroup, n: int, r: int, rng: random.Random, patterns: int = 3) -> Ensemble:
    """A random sum of ``(r+1)``-fold tensor differences; all marginals of size ``<= r`` vanish."""
    if n < r + 1:
        raise ValueError(f"need n >= r+1 coordinates, got n={n}, r={r}")
    Z = Ensemble(G, n, [])
    for _ in range(patterns):
        slots = sorted(rng.sample(range(n), r + 1))
        pairs = [(rng.randrange(G.order), rng.randrange(G.order)) for _ in slots]
        fill = [rng.randrange(G.order) for _ in range(n)]
        Z = Z + tensor_difference(G, n, slots, pairs, fill, rng.choice([-2, -1, 1, 2]))
    return Z


def small_marginals_vanish(Z: Ensemble, r: int) -> list:
    """Coordinate sets ``K`` with ``|K| <= r`` whose marginal is nonzero."""
    return [list(K) for K in subsets(Z.n, r) if not marginal(Z, K).is_zero()]


def collapse_check(Z: Ensemble, r: int) -> dict:
    """If all marginals of size ``<= r`` vanish, ``<M>(Z)`` must lie in ``[G]^(r+1)``."""
    bad = small_marginals_vanish(Z, r)
    report = {"check": "collapse_in_ideal_power", "r": r}
    if bad:
        report.update(status="not applicable", nonvanishing_marginals=bad)
        return report
    collapsed = collapse_M(Z)
    ok = in_ideal_power(collapsed, r + 1)
    report.update(status="holds" if ok else "failed", collapse=collapsed.to_vector())
    return report


def distinguished_term_check(Z: Ensemble, r: int, *, with_certificate: bool = True) -> dict:
    """Distinguished-term membership check.

    Premises: every marginal of size ``<= r`` vanishes and ``M(z_i)`` is in
    ``gamma^(r+1) G`` for ``i != 0``.  Conclusion: ``M(z_0)`` is too.  With
    ``with_certificate``, also builds a congruence certificate over the
    indicator exponents ``x_kl = [z_ik = g_l]`` and checks that
    ``sum_i u_i P_j(x^(i)) = 0`` for every ``j``.
    """
    from .certificate import make_certificate

    G = Z.group
    report: dict = {"check": "distinguished_term_membership", "r": r}
    if not Z.distinguished:
        report.update(status="not applicable", reason="no distinguished term")
        return report
    bad = small_marginals_vanish(Z, r)
    H = gamma(G, r + 1)
    outside = [i for i, (_, z) in enumerate(Z.terms) if i and G.prod(z) not in H]
    if bad or outside:
        report.update(status="not applicable", nonvanishing_marginals=bad, terms_outside_gamma=outside)
        return report
    z0 = Z.terms[0][1]
    holds = G.prod(z0) in H
    report.update(status="holds" if holds else "failed", product=G.labels[G.prod(z0)])
    if with_certificate:
        elems = sorted({x for _, z in Z.terms for x in z})
        m = len(elems)
        cert = make_certificate(G, [g for _ in range(Z.n) for g in elems], r)
        sums = []
        for p in cert.polys:
            total = 0
            for u, z in Z.terms:
                x = [int(z[k] == g) for k in range(Z.n) for g in elems]
                total += u * p(x)
            sums.append(total)
        report["indicator_sums_vanish"] = all(s == 0 for s in sums)
        report["indicator_variables"] = Z.n * m
        if not report["indicator_sums_vanish"]:
            report["status"] = "failed"
    return report
