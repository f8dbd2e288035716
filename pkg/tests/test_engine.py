import pytest
from hypothesis import given, settings, strategies as st

from denomlab import (
    LaurentPolynomial,
    annulus_matrix,
    catalan,
    denominator_vector,
    enumerate_monomials,
    explore,
    initial_seed,
    mutate,
    mutate_matrix,
)
from denomlab.engine import Seed
from denomlab.errors import CapExceeded, NonExactDivision, ZeroPolynomial

A2 = ((0, 1), (-1, 0))
A3 = ((0, 1, 0), (-1, 0, 1), (0, -1, 0))


def poly(nvars, terms):
    return LaurentPolynomial(nvars, terms)


def test_rank2_closure_matches_hand_computation():
    # The five variables of the rank-2 exchange recurrence, derived by hand
    # from x_{k+1} x_{k-1} = 1 + x_k and frozen here.
    expected = {
        poly(2, {(1, 0): 1}),
        poly(2, {(0, 1): 1}),
        poly(2, {(-1, 0): 1, (-1, 1): 1}),                  # (1+x2)/x1
        poly(2, {(-1, -1): 1, (0, -1): 1, (-1, 0): 1}),     # (1+x1+x2)/x1x2
        poly(2, {(0, -1): 1, (1, -1): 1}),                  # (1+x1)/x2
    }
    exploration = explore(initial_seed(A2))
    assert exploration.cluster_count == 5
    assert set(exploration.variables.values()) == expected
    # independent oracle: every variable satisfies the exchange identity
    # with its neighbors inside some cluster
    for seed in exploration.clusters.values():
        x, y = seed.cluster
        lhs = x * mutate(seed, 0).cluster[0]
        assert lhs == poly(2, {(0, 0): 1}) + y


def test_denominator_examples():
    assert denominator_vector(poly(2, {(1, 0): 1})) == (-1, 0)
    assert denominator_vector(poly(2, {(-1, 0): 1, (-1, 1): 1})) == (1, 0)
    assert denominator_vector(
        poly(2, {(-1, -1): 1, (0, -1): 1, (-1, 0): 1})) == (1, 1)
    with pytest.raises(ZeroPolynomial):
        denominator_vector(LaurentPolynomial.zero(2))


def test_mutation_involution_and_matrix_rule():
    seed = initial_seed(A3)
    for k in range(3):
        assert mutate(mutate(seed, k), k) == seed
    B = mutate_matrix(A3, 1)
    assert B == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


def test_rank1_doubles():
    exploration = explore(initial_seed(((0,),)))
    assert exploration.cluster_count == 2
    values = sorted(str(p) for p in exploration.variables.values())
    assert values == ["2*x0^-1", "x0"]


def test_a3_closure_counts():
    exploration = explore(initial_seed(A3))
    assert exploration.cluster_count == 14 == catalan(4)
    assert exploration.variable_count == 9
    monomials = enumerate_monomials(exploration, 3)
    assert len(monomials) == len({m.denominator for m in monomials})
    assert len({m.variable_ids for m in monomials}) == len(monomials)


def test_exploration_cap():
    with pytest.raises(CapExceeded):
        explore(initial_seed(A3), cap=5)


def test_monomials_degree_zero():
    exploration = explore(initial_seed(A2))
    monomials = enumerate_monomials(exploration, 0)
    assert len(monomials) == 1
    assert monomials[0].denominator == (0, 0)
    assert monomials[0].variable_ids == ()


def test_monomials_degree_one_counts_variables():
    exploration = explore(initial_seed(A2))
    monomials = enumerate_monomials(exploration, 1)
    assert len(monomials) == 6  # empty + the five variables
    assert len({m.denominator for m in monomials}) == 6


def test_exploration_dump_is_diff_stable():
    from denomlab.engine import exploration_dump
    first = exploration_dump(explore(initial_seed(A3)))
    second = exploration_dump(explore(initial_seed(A3)))
    assert first == second
    assert len(first["clusters"]) == 14
    assert len(first["edges"]) == 21
    assert all(len(c) == 3 for c in first["clusters"])


def test_exchange_graph_regularity():
    exploration = explore(initial_seed(A3))
    degree = {}
    for edge in exploration.edges:
        a, b = tuple(edge)
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    assert set(degree.values()) == {3}


def test_positivity_guard_rejects_corrupt_seed():
    bad = Seed(A2, (poly(2, {(1, 0): 1, (0, 0): 1}), poly(2, {(0, 1): 1})))
    with pytest.raises(NonExactDivision):
        mutate(bad, 0)  # (1 + x0) does not divide the exchange binomial


def test_annulus_depth_bounded():
    exploration = explore(initial_seed(annulus_matrix(3, 1)), depth=5)
    assert exploration.truncated
    assert exploration.cluster_count > 20
    monomials = enumerate_monomials(exploration, 2)
    assert len({m.denominator for m in monomials}) == len(monomials)


def test_dvector_additivity_within_clusters():
    exploration = explore(initial_seed(A3))
    for seed in list(exploration.clusters.values())[:6]:
        for i in range(3):
            for j in range(i, 3):
                product = seed.cluster[i] * seed.cluster[j]
                assert denominator_vector(product) == tuple(
                    a + b for a, b in zip(denominator_vector(seed.cluster[i]),
                                          denominator_vector(seed.cluster[j])))


small_ints = st.integers(min_value=-3, max_value=3)
exponents = st.tuples(small_ints, small_ints)
polys = st.dictionaries(exponents, st.integers(-5, 5), max_size=4).map(
    lambda terms: LaurentPolynomial(2, terms))


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a + (b + c) == (a + b) + c
    assert a - a == LaurentPolynomial.zero(2)


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_exact_division_roundtrip(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


@given(st.lists(st.integers(0, 2), min_size=1, max_size=6))
@settings(max_examples=40, deadline=None)
def test_mutation_path_reversal(path):
    seed = initial_seed(A3)
    forward = seed
    for k in path:
        forward = mutate(forward, k)
    back = forward
    for k in reversed(path):
        back = mutate(back, k)
    assert back == seed
