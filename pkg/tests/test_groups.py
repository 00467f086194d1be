import itertools

import pytest

from nilcert.groups import (CORPUS, ClosureTooLargeError, GroupAxiomError, cycle_label, extend_homomorphism,
                            from_permutations, from_table, gamma, group_from_json, is_isomorphism,
                            load_corpus, lower_central_series, order_mod_subgroup, product_power, quotient,
                            subgroup_generated, whole_group)

Z2 = from_table([[0, 1], [1, 0]])
Z6 = from_table([[(a + b) % 6 for b in range(6)] for a in range(6)])
S3 = load_corpus("S3")

# hand-entered S3 on (e, a, a^2, b, ab, a^2 b), a^3 = b^2 = e, b a = a^2 b
def _s3_table():
    els = [(i, j) for j in range(2) for i in range(3)]  # a^i b^j
    def mul(x, y):
        (i, j), (k, l) = x, y
        return ((i + (k if j == 0 else -k)) % 3, (j + l) % 2)
    return [[els.index(mul(x, y)) for y in els] for x in els]


def test_from_table_examples():
    assert Z2.order == 2 and Z2.identity == 0
    G = from_permutations([[1, 0, 2], [1, 2, 0]])
    assert G.order == 6


def test_broken_associativity_rejected():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    T = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    with pytest.raises(GroupAxiomError) as info:
        from_table(T)
    assert info.value.axiom == "associativity"
    a, b, c = info.value.witness
    assert T[T[a][b]][c] != T[a][T[b][c]]


def test_other_axiom_failures():
    with pytest.raises(GroupAxiomError):
        from_table([[0, 0], [0, 0]])
    with pytest.raises(GroupAxiomError):
        from_table([[0, 1], [1, 2]])


def test_closure_cap():
    with pytest.raises(ClosureTooLargeError):
        from_permutations([[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]], cap=50)


def test_cycle_labels():
    assert cycle_label([0, 1, 2]) == "()"
    assert cycle_label([1, 2, 0]) == "(1 2 3)"
    assert S3.labels[1] == "(1 2)"


def test_subgroup_generated_examples():
    assert subgroup_generated(S3, []).order == 1
    assert subgroup_generated(S3, [S3.index_of("(1 2 3)")]).order == 3
    assert subgroup_generated(S3, S3.elements()) == whole_group(S3)


def test_lower_central_series_examples():
    assert [H.order for H in lower_central_series(Z6, 2)] == [6, 1, 1]
    assert [H.order for H in lower_central_series(S3, 3)] == [6, 3, 3, 3]
    Q8 = load_corpus("Q8")
    assert [H.order for H in lower_central_series(Q8, 2)] == [8, 2, 1]
    assert set(Q8.labels[g] for g in gamma(Q8, 2)) == {"1", "-1"}


def test_corpus_series_frozen():
    want = {"S3": [6, 3, 3, 3], "S4": [24, 12, 12, 12], "D4": [8, 2, 1, 1],
            "Q8": [8, 2, 1, 1], "Heis3": [27, 3, 1, 1]}
    for name in CORPUS:
        G = load_corpus(name)
        series = lower_central_series(G, 3)
        assert [H.order for H in series] == want[name]
        for A, B in zip(series, series[1:]):
            assert B <= A and B.is_normal()


def test_order_mod_subgroup_examples():
    A3 = gamma(S3, 2)
    assert order_mod_subgroup(S3, S3.index_of("(1 2 3)"), A3) == 1
    assert order_mod_subgroup(S3, S3.index_of("(1 2)"), A3) == 2
    assert order_mod_subgroup(Z6, 1, subgroup_generated(Z6, [])) == 6


def test_product_power_examples():
    assert product_power(S3, [], []) == S3.identity
    assert product_power(Z6, [1], [3]) == 3
    # permutations compose left to right, so (1 2)(1 3 2) = (2 3)
    g = product_power(S3, [S3.index_of("(1 2)"), S3.index_of("(1 2 3)")], [1, 2])
    assert S3.labels[g] == "(2 3)" and S3.element_order(g) == 2
    assert product_power(Z6, [1, 2], [-1, 4]) == 1
    with pytest.raises(ValueError):
        product_power(Z6, [1], [1, 2])


def test_hand_table_isomorphic_to_corpus_s3():
    H = from_table(_s3_table())
    assert sorted(H.element_order(g) for g in H.elements()) == sorted(S3.element_order(g) for g in S3.elements())
    # a -> (1 2 3), b -> (1 2)
    phi = extend_homomorphism(H, S3, [1, 3], [S3.index_of("(1 2 3)"), S3.index_of("(1 2)")])
    assert phi is not None and is_isomorphism(H, S3, phi)


def test_quotient():
    Q, proj = quotient(S3, gamma(S3, 2))
    assert Q.order == 2
    for a, b in itertools.product(S3.elements(), repeat=2):
        assert proj[S3.mul(a, b)] == Q.mul(proj[a], proj[b])


def test_json_loading():
    G = group_from_json({"kind": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    assert G.order == 6
    G = group_from_json({"kind": "table", "mul": [[0, 1], [1, 0]], "id": 0})
    assert G.order == 2
    with pytest.raises(ValueError):
        group_from_json({"kind": "magic"})
