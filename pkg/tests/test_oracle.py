from denomlab import (
    b_matrix_of,
    denominator_vector,
    explore,
    initial_seed,
    intersection_vector,
    lockstep_explore,
    strong_admissible_triangulation,
)

from conftest import disk


def test_hexagon_fan_gives_path_matrix(hexagon):
    reference = strong_admissible_triangulation(hexagon)
    B = b_matrix_of(reference)
    nonzero = sorted((i, j) for i in range(3) for j in range(3) if B[i][j])
    assert nonzero == [(0, 1), (1, 0), (1, 2), (2, 1)]
    assert all(abs(B[i][j]) == 1 for i, j in nonzero)


def test_unpunctured_square_rank_one():
    model = disk(4, 0)
    reference = strong_admissible_triangulation(model)
    assert b_matrix_of(reference) == ((0,),)


def test_punctured_square_matrix(punctured_square):
    reference = strong_admissible_triangulation(punctured_square)
    B = b_matrix_of(reference)
    pairs = reference.conjugate_pairs()[0]
    i, j = reference.arcs.index(pairs[0]), reference.arcs.index(pairs[1])
    assert B[i] == B[j]
    assert B[i][j] == 0
    assert all(-2 <= entry <= 2 for row in B for entry in row)


def test_sign_convention_is_immaterial(punctured_square):
    reference = strong_admissible_triangulation(punctured_square)
    B = b_matrix_of(reference)
    negated = tuple(tuple(-x for x in row) for row in B)
    forward = explore(initial_seed(B))
    backward = explore(initial_seed(negated))
    assert forward.cluster_count == backward.cluster_count == 50
    assert forward.variable_count == backward.variable_count == 16
    dvs = lambda ex: sorted(denominator_vector(p) for p in ex.variables.values())
    assert dvs(forward) == dvs(backward)


def test_lockstep_bijection_on_hexagon(hexagon):
    result = lockstep_explore(hexagon)
    assert result.cluster_count == 14
    assert len(result.arc_variable) == 9
    for arc, key in result.arc_variable.items():
        assert denominator_vector(result.variables[key]) == \
            intersection_vector(result.reference, arc, hexagon)


def test_initial_arcs_have_negative_unit_vectors(punctured_square):
    result = lockstep_explore(punctured_square)
    reference = result.reference
    for k, arc in enumerate(reference.arcs):
        den = denominator_vector(result.variables[result.arc_variable[arc]])
        assert den == tuple(-1 if i == k else 0 for i in range(4))
