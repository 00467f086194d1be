"""Finite groups as multiplication tables, with subgroup and lower central series tools.

Elements are the indices ``0..N-1``.  Permutation groups multiply
left to right: ``p * q`` applies ``p`` first.
"""
from __future__ import annotations

import json
from collections import deque
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

DEFAULT_CLOSURE_CAP = 100_000


class GroupAxiomError(ValueError):
    def __init__(self, axiom, witness):
        super().__init__(f"{axiom} fails at {witness}")
        self.axiom = axiom
        self.witness = witness


class ClosureTooLargeError(ValueError):
    pass


class FiniteGroup:
    __slots__ = ("mul_table", "identity", "inverse", "labels", "name", "_cache")

    def __init__(self, mul_table, identity, inverse, labels=None, name=None):
        self.mul_table = tuple(tuple(row) for row in mul_table)
        self.identity = identity
        self.inverse = tuple(inverse)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(self.mul_table)))
        self.name = name
        self._cache = {}

    @property
    def order(self) -> int:
        return len(self.mul_table)

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def prod(self, elems: Iterable[int]) -> int:
        out = self.identity
        for g in elems:
            out = self.mul_table[out][g]
        return out

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverse[g], -k
        out, base = self.identity, g
        while k:
            if k & 1:
                out = self.mul_table[out][base]
            base = self.mul_table[base][base]
            k >>= 1
        return out

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        inv = self.inverse
        return self.prod((inv[a], inv[b], a, b))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul_table[x][g]
            k += 1
        return k

    def index_of(self, token) -> int:
        """Resolve an element index or label."""
        if isinstance(token, int):
            if not 0 <= token < self.order:
                raise IndexError(f"element {token} out of range 0..{self.order - 1}")
            return token
        token = str(token).strip()
        if token in self.labels:
            return self.labels.index(token)
        try:
            return self.index_of(int(token))
        except ValueError:
            raise KeyError(f"unknown element {token!r}") from None

    def __repr__(self):
        return f"FiniteGroup({self.name or 'unnamed'}, order={self.order})"


class Subgroup:
    """A subgroup as a sorted tuple of element indices of ``group``."""

    __slots__ = ("group", "elements", "_set")

    def __init__(self, group: FiniteGroup, elements):
        self.group = group
        self.elements = tuple(sorted(elements))
        self._set = frozenset(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order} in {self.group!r})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_normal(self) -> bool:
        G = self.group
        return all(G.prod((G.inv(g), h, g)) in self for g in G.elements() for h in self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group is other.group and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)


def from_table(table: Sequence[Sequence[int]], identity: int | None = None, labels=None, name=None) -> FiniteGroup:
    """Build a group from a multiplication table, checking the axioms."""
    N = len(table)
    if N == 0:
        raise GroupAxiomError("nonempty", ())
    for a, row in enumerate(table):
        if len(row) != N:
            raise GroupAxiomError("square table", (a,))
        for b, c in enumerate(row):
            if not (isinstance(c, int) and 0 <= c < N):
                raise GroupAxiomError("closure", (a, b, c))
    if identity is None:
        identity = next((e for e in range(N) if all(table[e][x] == x == table[x][e] for x in range(N))), None)
        if identity is None:
            raise GroupAxiomError("identity", ())
    for x in range(N):
        if table[identity][x] != x or table[x][identity] != x:
            raise GroupAxiomError("identity", (identity, x))
    inverse = []
    for a in range(N):
        b = next((b for b in range(N) if table[a][b] == identity), None)
        if b is None or table[b][a] != identity:
            raise GroupAxiomError("inverse", (a,))
        inverse.append(b)
    for a in range(N):
        ra = table[a]
        for b in range(N):
            ab = ra[b]
            rb = table[b]
            rab = table[ab]
            for c in range(N):
                if rab[c] != ra[rb[c]]:
                    raise GroupAxiomError("associativity", (a, b, c))
    if labels is not None and len(labels) != N:
        raise ValueError(f"{len(labels)} labels for {N} elements")
    return FiniteGroup(table, identity, inverse, labels, name)


def cycle_label(perm: Sequence[int]) -> str:
    """Cycle notation on points ``1..d``; the identity is ``()``."""
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        cycles.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(cycles) or "()"


def from_permutations(generators: Sequence[Sequence[int]], degree: int | None = None,
                      cap: int = DEFAULT_CLOSURE_CAP, name=None) -> FiniteGroup:
    """Enumerate the group generated by permutations given as 0-based image lists."""
    gens = [tuple(g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError(f"{list(g)} is not a permutation of 0..{degree - 1}")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gens:
            pg = tuple(g[p[i]] for i in range(degree))
            if pg not in index:
                if len(elems) >= cap:
                    raise ClosureTooLargeError(f"closure exceeds {cap} elements")
                index[pg] = len(elems)
                elems.append(pg)
                queue.append(pg)
    table = [[index[tuple(b[a[i]] for i in range(degree))] for b in elems] for a in elems]
    inverse = [0] * len(elems)
    for k, p in enumerate(elems):
        inv = [0] * degree
        for i, x in enumerate(p):
            inv[x] = i
        inverse[k] = index[tuple(inv)]
    return FiniteGroup(table, 0, inverse, [cycle_label(p) for p in elems], name)


def group_from_json(data: Mapping) -> FiniteGroup:
    kind = data.get("kind")
    if kind == "table":
        return from_table(data["mul"], data.get("id"), data.get("labels"), data.get("name"))
    if kind == "perm":
        return from_permutations(data["generators"], data.get("degree"), name=data.get("name"))
    raise ValueError(f"unknown group kind {kind!r}")


def load_group(path) -> FiniteGroup:
    with open(path) as fh:
        return group_from_json(json.load(fh))


CORPUS = ("S3", "S4", "D4", "Q8", "Heis3")


def load_corpus(name: str) -> FiniteGroup:
    ref = resources.files("nilcert") / "corpus" / f"{name.lower()}.json"
    return group_from_json(json.loads(ref.read_text()))


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("nilcert") / "corpus" / f"{name.lower()}.json"))


# -- subgroups ----------------------------------------------------------------


def subgroup_generated(G: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    gens = sorted({G.index_of(g) for g in elems} - {G.identity})
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            row = G.mul_table[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(seen)))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(G.elements()))


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """Subgroup generated by ``[a, b]`` for ``a`` in ``A``, ``b`` in ``B``."""
    comms = {G.commutator(a, b) for a in A.elements for b in B.elements}
    return subgroup_generated(G, comms)


def lower_central_series(G: FiniteGroup, depth: int) -> list[Subgroup]:
    """``[gamma^1, ..., gamma^(depth+1)]``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    cache = G._cache.setdefault("lcs", [whole_group(G)])
    while len(cache) < depth + 1:
        prev = cache[-1]
        if len(cache) >= 2 and cache[-2] == prev:
            cache.append(prev)
        else:
            cache.append(commutator_subgroup(G, whole_group(G), prev))
    return list(cache[:depth + 1])


def gamma(G: FiniteGroup, s: int) -> Subgroup:
    """The ``s``-th lower central series term; ``gamma(G, 1) = G``."""
    if s <= 1:
        return whole_group(G)
    return lower_central_series(G, s - 1)[s - 1]


def order_mod_subgroup(G: FiniteGroup, g: int, H: Subgroup) -> int:
    """Least ``d > 0`` with ``g^d`` in ``H``."""
    d, x = 1, g
    while x not in H:
        x = G.mul(x, g)
        d += 1
    return d


def product_power(G: FiniteGroup, gs: Sequence[int], xs: Sequence[int]) -> int:
    """``g_1^x_1 ... g_n^x_n``."""
    if len(gs) != len(xs):
        raise ValueError(f"{len(gs)} elements but {len(xs)} exponents")
    out = G.identity
    for g, x in zip(gs, xs):
        out = G.mul(out, G.power(g, int(x)))
    return out


def quotient(G: FiniteGroup, H: Subgroup) -> tuple[FiniteGroup, list[int]]:
    """``G/H`` for normal ``H``, with the projection as a list ``g -> coset index``."""
    proj = [-1] * G.order
    reps = []
    for g in G.elements():
        if proj[g] != -1:
            continue
        k = len(reps)
        reps.append(g)
        for h in H.elements:
            proj[G.mul(g, h)] = k
    table = [[proj[G.mul(a, b)] for b in reps] for a in reps]
    inverse = [proj[G.inv(a)] for a in reps]
    labels = [G.labels[a] for a in reps]
    name = f"{G.name}/H" if G.name else None
    return FiniteGroup(table, proj[G.identity], inverse, labels, name), proj


def is_isomorphism(G: FiniteGroup, H: FiniteGroup, mapping: Sequence[int]) -> bool:
    if G.order != H.order or sorted(mapping) != list(range(H.order)):
        return False
    return all(mapping[G.mul(a, b)] == H.mul(mapping[a], mapping[b]) for a in G.elements() for b in G.elements())


def extend_homomorphism(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
    """Extend ``gens[i] -> images[i]`` along a BFS of ``G``; ``None`` if inconsistent."""
    mapping = {G.identity: H.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y, hy = G.mul(x, g), H.mul(mapping[x], h)
            if y in mapping:
                if mapping[y] != hy:
                    return None
            else:
                mapping[y] = hy
                queue.append(y)
    if len(mapping) != G.order:
        return None
    out = [mapping[g] for g in G.elements()]
    if any(out[G.mul(a, b)] != H.mul(out[a], out[b]) for a in G.elements() for b in G.elements()):
        return None
    return out
