"""Congruence certificates for membership in a lower central series term.

For a finite group ``G``, elements ``g_1..g_n`` and ``r >= 0`` this builds
rational polynomials ``P_j`` of degree ``<= r`` and moduli ``d_j`` with

    g_1^x_1 ... g_n^x_n  in gamma^(r+1) G   <=>   P_j(x) in d_j Z for all j.

The construction goes through the homomorphism ``t`` from the free nilpotent
group of class ``r`` onto ``G / gamma^(r+1) G`` sending ``Z_i`` to ``g_i``,
and the coordinate transformation ``f`` whose congruence conditions cut out
the Mal'cev coordinates of ``Ker t``.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import as_rational
from .groups import FiniteGroup, gamma, product_power, quotient, subgroup_generated, order_mod_subgroup
from .nilpotent import (MalcevBasis, beta_hat, build_basis, coords_of_unit, exp_polynomials,
                        mult_polynomials)
from .weighted import (PolyMap, WeightedPoly, compose, cross_map, interpolate, poly_from_json,
                       poly_to_json, product_map)


class WitnessSearchError(RuntimeError):
    pass


def quotient_mod_gamma(G: FiniteGroup, r: int):
    """``G / gamma^(r+1) G`` and the projection ``g -> coset index``."""
    return quotient(G, gamma(G, r + 1))


class NilpotentHom:
    """``t: N -> G / gamma^(r+1) G`` with ``Z_i -> g_i``, for free nilpotent ``N`` of class ``r``."""

    def __init__(self, G: FiniteGroup, gs: Sequence[int], r: int):
        self.G = G
        self.gs = tuple(G.index_of(g) for g in gs)
        self.r = r
        self.n = len(self.gs)
        self.target, self.proj = quotient_mod_gamma(G, r)
        self.basis: MalcevBasis | None = build_basis(self.n, r) if self.n else None
        gen_images = [self.proj[g] for g in self.gs]
        Q = self.target
        self.images = []
        for e in (self.basis.entries if self.basis else []):
            self.images.append(Q.prod(gen_images[a - 1] if a > 0 else Q.inv(gen_images[-a - 1]) for a in e.word))
        self._dj: dict = {}
        self._witness: dict = {}

    @property
    def q(self) -> int:
        return self.basis.q if self.basis else 0

    @property
    def weights(self) -> tuple:
        return self.basis.weights if self.basis else ()

    def t_of_coords(self, x: Sequence[int]) -> int:
        """``t(b_1^x_1 ... b_q^x_q)`` in the quotient."""
        Q = self.target
        out = Q.identity
        for img, k in zip(self.images, x):
            out = Q.mul(out, Q.power(img, int(k)))
        return out

    def tail_subgroup(self, j: int):
        """``t(N^(j+1))`` for 1-based ``j``."""
        return subgroup_generated(self.target, self.images[j:])


def compute_dj(hom: NilpotentHom, j: int) -> int:
    """Least ``d > 0`` with ``t(b_j)^d`` in ``t(N^(j+1))`` (1-based ``j``)."""
    if not 1 <= j <= hom.q:
        raise ValueError(f"j={j} outside 1..{hom.q}")
    if j not in hom._dj:
        hom._dj[j] = order_mod_subgroup(hom.target, hom.images[j - 1], hom.tail_subgroup(j))
    return hom._dj[j]


def find_witness(hom: NilpotentHom, j: int, d: int | None = None) -> tuple[int, ...]:
    """Coordinates of some ``k = b_j^d w`` in ``Ker t`` with ``w`` a word in ``b_(j+1)..b_q``."""
    if d is None:
        d = compute_dj(hom, j)
    key = (j, d)
    if key in hom._witness:
        return hom._witness[key]
    Q = hom.target
    target = Q.power(hom.images[j - 1], -d)
    moves = []
    for k in range(j, hom.q):
        moves.append((k, 1, hom.images[k]))
        moves.append((k, -1, Q.inv(hom.images[k])))
    parent = {Q.identity: None}
    queue = deque([Q.identity])
    while queue and target not in parent:
        x = queue.popleft()
        for k, sgn, img in moves:
            y = Q.mul(x, img)
            if y not in parent:
                parent[y] = (x, k, sgn)
                queue.append(y)
    if target not in parent:
        raise WitnessSearchError(f"t(b_{j})^-{d} is not reachable from t(b_{j + 1}..b_q)")
    path = []
    node = target
    while parent[node] is not None:
        prev, k, sgn = parent[node]
        path.append((k, sgn))
        node = prev
    path.reverse()
    basis = hom.basis
    u = basis.rho[j - 1] ** d
    for k, sgn in path:
        u = u * (basis.rho[k] if sgn > 0 else basis.rho[k].inv())
    kx = coords_of_unit(u, basis, f"witness for j={j}")
    if hom.t_of_coords(kx) != Q.identity:
        raise WitnessSearchError(f"witness for j={j} is not in the kernel")
    hom._witness[key] = kx
    return kx


def f_evaluator(hom: NilpotentHom):
    """The coordinate transformation ``f`` evaluated through Magnus arithmetic.

    Step ``j`` records the current ``j``-th coordinate ``c`` and strips it,
    by ``b_j^-c`` if ``d_j = 0`` and by ``k_j^(-c/d_j)`` otherwise, where
    ``k_j`` is the kernel witness from :func:`find_witness`.
    """
    basis = hom.basis
    steps = []
    for j in range(1, hom.q + 1):
        d = compute_dj(hom, j)
        if d == 0:
            steps.append((basis.rho[j - 1], Fraction(1)))
        else:
            k = find_witness(hom, j, d)
            steps.append((beta_hat(k, basis), Fraction(1, d)))

    def f(x):
        v = beta_hat([as_rational(a) for a in x], basis)
        out = []
        for j, (base, scale) in enumerate(steps):
            c = basis.phi_apply(j, v)
            out.append(c)
            if c:
                v = (base ** (-c * scale)) * v
        return out

    return f


def build_f(hom: NilpotentHom, *, seed: int = 0) -> PolyMap:
    """``f`` as an explicit polynomial map ``Q^q -> Q^q`` (weights ``s_1..s_q``)."""
    w = hom.weights
    if not w:
        return PolyMap((), (), [])
    return interpolate(f_evaluator(hom), w, w, seed=seed)


def build_f_symbolic(hom: NilpotentHom) -> PolyMap:
    """``f`` assembled from multiplication and exponentiation polynomials.

    Follows the backward recursion ``f^j = id x f^(j+1)`` when ``d_j = 0`` and
    ``f^j = p (x) (f^(j+1) o R o m^j o (e_k(-p/d_j) (x) id))`` otherwise.
    Expensive; intended as a cross-check on small cases.
    """
    basis = hom.basis
    q = hom.q
    f_next = PolyMap((), (), [])
    for j in range(q, 0, -1):
        w = basis.weights[j - 1:]
        d = compute_dj(hom, j)
        ident = PolyMap.identity(w)
        if d == 0:
            f_next = cross_map(PolyMap.identity(w[:1]), f_next)
            continue
        k = find_witness(hom, j, d)
        neg_p = PolyMap(w, w[:1], [WeightedPoly.variable(w, 0) * Fraction(-1, d)])
        e_k = exp_polynomials(k, j, basis)
        left = compose(e_k, neg_p)
        m_j = mult_polynomials(basis, j)
        y = compose(m_j, product_map(left, ident))
        rest = compose(f_next, compose(PolyMap.projection(w, range(1, len(w))), y))
        f_next = product_map(PolyMap.projection(w, [0]), rest)
    return f_next


@dataclass
class Certificate:
    n: int
    r: int
    q: int
    weights: tuple
    moduli: tuple
    polys: tuple
    basis_stamp: str

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "q": self.q,
            "weights": list(self.weights),
            "moduli": list(self.moduli),
            "polys": [poly_to_json(p) for p in self.polys],
            "basis_stamp": self.basis_stamp,
        }

    @classmethod
    def from_json(cls, data) -> "Certificate":
        polys = tuple(poly_from_json(p) for p in data["polys"])
        cert = cls(int(data["n"]), int(data["r"]), int(data["q"]), tuple(data["weights"]),
                   tuple(int(d) for d in data["moduli"]), polys, str(data["basis_stamp"]))
        if not (len(cert.weights) == len(cert.moduli) == len(cert.polys) == cert.q):
            raise ValueError("certificate lengths disagree with q")
        return cert


def make_certificate(G: FiniteGroup, gs: Sequence[int], r: int, *, seed: int = 0) -> Certificate:
    hom = NilpotentHom(G, gs, r)
    n = hom.n
    if hom.q == 0:
        stamp = hom.basis.stamp() if hom.basis else ""
        return Certificate(n, r, 0, (), (), (), stamp)
    moduli = tuple(compute_dj(hom, j) for j in range(1, hom.q + 1))
    f = f_evaluator(hom)
    q = hom.q
    pmap = interpolate(lambda x: f(list(x) + [0] * (q - n)), (1,) * n, hom.weights, seed=seed)
    return Certificate(n, r, q, hom.weights, moduli, pmap.components, hom.basis.stamp())


def _in_dZ(v: Fraction, d: int) -> bool:
    if d == 0:
        return v == 0
    return v.denominator == 1 and v.numerator % d == 0


def check(cert: Certificate, x: Sequence[int]) -> bool:
    if len(x) != cert.n:
        raise ValueError(f"expected {cert.n} exponents, got {len(x)}")
    return all(_in_dZ(p(x), d) for p, d in zip(cert.polys, cert.moduli))


def integrality_violations(cert: Certificate, xs) -> list:
    """Points where ``P_j(x)`` is not an integer although ``P_k(x)`` is in ``d_k Z`` for all ``k < j``."""
    bad = []
    for x in xs:
        for j, (p, d) in enumerate(zip(cert.polys, cert.moduli)):
            v = p(x)
            if v.denominator != 1:
                bad.append({"x": list(x), "j": j + 1, "value": str(v)})
                break
            if not _in_dZ(v, d):
                break
    return bad


def is_member(G: FiniteGroup, gs: Sequence[int], r: int, x: Sequence[int]) -> bool:
    """Brute force: is ``g_1^x_1 ... g_n^x_n`` in ``gamma^(r+1) G``."""
    return product_power(G, gs, x) in gamma(G, r + 1)


@dataclass
class VerificationReport:
    trials: int
    box: int
    seed: int
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"ok": self.ok, "trials": self.trials, "box": self.box, "seed": self.seed,
                "mismatches": self.mismatches}


def verify_certificate(G: FiniteGroup, gs: Sequence[int], r: int, cert: Certificate,
                       trials: int = 200, seed: int = 0, box: int = 20) -> VerificationReport:
    """Compare the certificate with brute-force membership at random exponents."""
    gs = [G.index_of(g) for g in gs]
    rng = random.Random(seed)
    report = VerificationReport(trials, box, seed)
    for _ in range(trials):
        x = [rng.randint(-box, box) for _ in gs]
        said = check(cert, x)
        truth = is_member(G, gs, r, x)
        if said != truth:
            report.mismatches.append({
                "x": x,
                "certificate": said,
                "brute_force": truth,
                "product": G.labels[product_power(G, gs, x)],
                "values": [str(p(x)) for p in cert.polys],
                "moduli": list(cert.moduli),
            })
    return report
