import json
import random
from dataclasses import replace

import pytest

from nilcert.certificate import (Certificate, NilpotentHom, build_f, build_f_symbolic, check, compute_dj,
                                 f_evaluator, find_witness, integrality_violations, is_member,
                                 make_certificate, quotient_mod_gamma, verify_certificate)
from nilcert.groups import CORPUS, from_table, gamma, load_corpus
from nilcert.nilpotent import coords
from nilcert.weighted import WeightedPoly

Z6 = from_table([[(a + b) % 6 for b in range(6)] for a in range(6)])
TRIVIAL = from_table([[0]])
S3 = load_corpus("S3")
T12 = S3.index_of("(1 2)")
X = WeightedPoly((1,), {(1,): 1}, 1)


def test_quotient_examples():
    assert quotient_mod_gamma(Z6, 1)[0].order == 6
    assert quotient_mod_gamma(S3, 1)[0].order == 2
    assert quotient_mod_gamma(S3, 4)[0].order == quotient_mod_gamma(S3, 2)[0].order


def test_dj_examples():
    hom = NilpotentHom(S3, [T12], 1)
    assert hom.q == 1 and compute_dj(hom, 1) == 2
    assert find_witness(hom, 1) == (2,)
    assert compute_dj(NilpotentHom(Z6, [1], 1), 1) == 6
    triv = NilpotentHom(TRIVIAL, [0, 0], 2)
    assert [compute_dj(triv, j) for j in (1, 2, 3)] == [1, 1, 1]
    assert find_witness(triv, 3) == (0, 0, 1)


def test_heisenberg_witness():
    H = load_corpus("Heis3")
    hom = NilpotentHom(H, ["(1,0,0)", "(0,1,0)"], 2)
    for j in range(1, hom.q + 1):
        k = find_witness(hom, j)
        assert hom.t_of_coords(k) == hom.target.identity
        assert not any(k[:j - 1])


def test_certificate_examples():
    c = make_certificate(S3, [T12], 1)
    assert (c.q, c.moduli, c.polys) == (1, (2,), (X,))
    assert not check(c, [3]) and check(c, [4]) and check(c, [0])
    c = make_certificate(Z6, [1], 1)
    assert (c.moduli, c.polys) == ((6,), (X,))
    assert check(c, [6]) and not check(c, [5])
    c = make_certificate(S3, [], 2)
    assert c.q == 0 and check(c, [])
    with pytest.raises(ValueError):
        check(c, [1])


def test_trivial_target_is_vacuous():
    c = make_certificate(TRIVIAL, [0, 0], 2)
    assert all(d == 1 for d in c.moduli)
    assert all(check(c, [a, b]) for a in range(-4, 5) for b in range(-4, 5))
    assert verify_certificate(TRIVIAL, [0, 0], 2, c, trials=30).ok


def test_f_parity_brute_force():
    f = build_f(NilpotentHom(S3, [T12], 1))
    for x in range(-10, 11):
        assert (f((x,))[0] % 2 == 0) == is_member(S3, [T12], 1, [x])


def test_f_symbolic_matches_operational():
    for name, gs, r in [("S3", ["(1 2)", "(1 2 3)"], 2), ("Q8", ["i", "j"], 2), ("D4", [1, 2], 3)]:
        G = load_corpus(name)
        hom = NilpotentHom(G, gs, r)
        assert build_f_symbolic(hom) == build_f(hom)


def test_f_cuts_out_kernel(rng):
    G = load_corpus("D4")
    hom = NilpotentHom(G, [1, 5], 2)
    f = f_evaluator(hom)
    moduli = [compute_dj(hom, j) for j in range(1, hom.q + 1)]
    for _ in range(100):
        x = [rng.randint(-7, 7) for _ in range(hom.q)]
        in_kernel = hom.t_of_coords(x) == hom.target.identity
        vals = f(x)
        assert in_kernel == all(v.denominator == 1 and v.numerator % d == 0 for v, d in zip(vals, moduli))


def test_corrupted_modulus_is_caught():
    c = make_certificate(S3, [T12], 1)
    bad = replace(c, moduli=(3,))
    report = verify_certificate(S3, [T12], 1, bad, trials=100, seed=5)
    assert not report.ok
    m = report.mismatches[0]
    assert m["certificate"] != m["brute_force"] and m["moduli"] == [3]


def test_json_round_trip_and_determinism():
    G = load_corpus("Q8")
    a = make_certificate(G, ["i", "j", "k"], 3)
    b = make_certificate(G, ["i", "j", "k"], 3)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
    assert Certificate.from_json(json.loads(json.dumps(a.to_json()))) == a
    with pytest.raises(ValueError):
        Certificate.from_json({**a.to_json(), "q": 1})


def test_degree_audit_and_integrality():
    rng = random.Random(9)
    for name in CORPUS:
        G = load_corpus(name)
        for r in (1, 2, 3):
            gs = [rng.randrange(G.order) for _ in range(2)]
            c = make_certificate(G, gs, r)
            for p, s in zip(c.polys, c.weights):
                assert p.audit() and p.total_degree() <= s <= r
            assert all(d >= 1 for d in c.moduli)
            xs = [[rng.randint(-20, 20) for _ in gs] for _ in range(60)]
            assert integrality_violations(c, xs) == []


def test_small_corpus_equivalence():
    rng = random.Random(3)
    for name in ("S3", "D4", "Q8"):
        G = load_corpus(name)
        gs = [rng.randrange(G.order) for _ in range(3)]
        c = make_certificate(G, gs, 2)
        assert verify_certificate(G, gs, 2, c, trials=60, seed=1).ok
