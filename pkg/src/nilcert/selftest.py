"""Seeded invariant suite behind ``nilcert selftest``."""
from __future__ import annotations

import random
import time

from .algebra import AlgebraContext, Unit
from .certificate import make_certificate, verify_certificate, integrality_violations
from .group_ring import (FnTable, degree_of_function, dimension_subgroup, collapse_check,
                         mobius_identity_check, random_premise_ensemble)
from .groups import CORPUS, gamma, load_corpus
from .nilpotent import beta, build_basis, coords, magnus_rho, mult_coords, parse_word, reduce_word
from .similarity import FiniteModel, n_series_check, r_similar, similarity_classes


def _mobius(k: int) -> int:
    out, m, p = 1, k, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def necklace_count(n: int, s: int) -> int:
    """Number of primitive necklaces of length ``s`` over ``n`` letters."""
    total = sum(_mobius(d) * n ** (s // d) for d in range(1, s + 1) if s % d == 0)
    return total // s


def random_word(n: int, length: int, rng: random.Random):
    return reduce_word([rng.choice([1, -1]) * rng.randint(1, n) for _ in range(length)])


def _magnus_commutator():
    ctx = AlgebraContext(2, 2)
    want = Unit(ctx, {(): 1, (1, 2): 1, (2, 1): -1})
    return magnus_rho(parse_word("Z1^-1 Z2^-1 Z1 Z2"), ctx) == want


def _basis_sizes():
    for n, r in [(2, 2), (2, 3), (3, 2)]:
        b = build_basis(n, r)
        for s in range(1, r + 1):
            if sum(1 for w in b.weights if w == s) != necklace_count(n, s):
                return False
    return True


def _round_trip(rng):
    for n, r in [(2, 2), (2, 3)]:
        b = build_basis(n, r)
        for _ in range(20):
            w = random_word(n, rng.randint(0, 8), rng)
            if beta(coords(w, b), b) != magnus_rho(w, b.ctx):
                return False
    return True


def _homomorphism(rng):
    b = build_basis(2, 3)
    for _ in range(20):
        w1, w2 = random_word(2, 6, rng), random_word(2, 6, rng)
        if coords(w1 + w2, b) != mult_coords(coords(w1, b), coords(w2, b), b):
            return False
    return True


def _certificates(rng, seed):
    for name in ("S3", "Q8", "D4"):
        G = load_corpus(name)
        for r in (1, 2):
            gs = [rng.randrange(G.order) for _ in range(2)]
            cert = make_certificate(G, gs, r)
            if not verify_certificate(G, gs, r, cert, trials=50, seed=seed).ok:
                return False
            xs = [[rng.randint(-12, 12) for _ in gs] for _ in range(50)]
            if integrality_violations(cert, xs):
                return False
    return True


def _degree_laws():
    G = load_corpus("S3")
    sign = [0 if g in gamma(G, 2) else 1 for g in G.elements()]
    return (degree_of_function(G, FnTable((2,), [0] * 6), 3) == "-inf"
            and degree_of_function(G, FnTable((0,), [5] * 6), 3) == 0
            and degree_of_function(G, FnTable((2,), sign), 3) == 1)


def _mobius_identity(seed):
    G = load_corpus("S3")
    return all(mobius_identity_check(G, n, 10, seed)["status"] == "holds" for n in (1, 2, 3))


def _ideal_collapse(rng):
    G = load_corpus("Q8")
    for r in (1, 2):
        for _ in range(10):
            Z = random_premise_ensemble(G, r + 2, r, rng)
            if collapse_check(Z, r)["status"] != "holds":
                return False
    return True


def _filtration():
    for name in CORPUS:
        G = load_corpus(name)
        model = FiniteModel(G)
        for p in range(1, 4):
            for q in range(1, 5 - p + 1):
                if n_series_check(model, p, q)["status"] != "holds":
                    return False
        for r in (1, 2):
            if dimension_subgroup(G, r) != gamma(G, r + 1):
                return False
    return True


def _similarity():
    G = load_corpus("S3")
    classes = similarity_classes(FiniteModel(G), 1)
    model = FiniteModel(G)
    t12, t13 = G.index_of("(1 2)"), G.index_of("(1 3)")
    return (sorted(len(c) for c in classes) == [3, 3]
            and r_similar(t12, t13, 1, model) and not r_similar(G.identity, t12, 1, model))


def run_selftest(seed: int = 7) -> dict:
    rng = random.Random(seed)
    checks = [
        ("magnus_commutator", _magnus_commutator),
        ("basis_sizes", _basis_sizes),
        ("coordinate_round_trip", lambda: _round_trip(rng)),
        ("homomorphism", lambda: _homomorphism(rng)),
        ("certificates", lambda: _certificates(rng, seed)),
        ("degree_laws", _degree_laws),
        ("mobius_identity", lambda: _mobius_identity(seed)),
        ("collapse_in_ideal_power", lambda: _ideal_collapse(rng)),
        ("filtration_and_dimension_subgroups", _filtration),
        ("similarity", _similarity),
    ]
    results = []
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            ok = bool(fn())
            err = None
        except Exception as exc:  # a crash is a failed check, reported not raised
            ok, err = False, f"{type(exc).__name__}: {exc}"
        entry = {"name": name, "ok": ok}
        if err:
            entry["error"] = err
        results.append(entry)
        entry["_seconds"] = time.perf_counter() - t0
    timings = {e["name"]: e.pop("_seconds") for e in results}
    return {"seed": seed, "ok": all(e["ok"] for e in results), "checks": results, "_timings": timings}
