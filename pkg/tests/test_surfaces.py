import pytest

from denomlab import (
    IdealTriangulation,
    admissible_triangulation,
    flip_ideal,
    make_strong_admissible,
    replay_type_ii_counts,
    validate_surface,
)
from denomlab.errors import (
    BoundaryComponentWithoutMarkedPoint,
    EmptyBoundary,
    ForbiddenSurface,
    NotAdmissibleInput,
    NotALoop,
    TooFewBoundaryMarkedPoints,
    UnflippableArc,
)
from denomlab.surfaces import TYPE_I, TYPE_II


def test_forbidden_small_cases():
    for boundary, punctures in (([1], 0), ([1], 1), ([2], 0), ([3], 0)):
        with pytest.raises(ForbiddenSurface):
            validate_surface({"genus": 0, "boundary": boundary,
                              "punctures": punctures})


def test_boundary_requirements():
    with pytest.raises(EmptyBoundary):
        validate_surface({"genus": 0, "boundary": [], "punctures": 2})
    with pytest.raises(BoundaryComponentWithoutMarkedPoint):
        validate_surface({"genus": 0, "boundary": [3, 0], "punctures": 0})


def test_rank_formula():
    # once-punctured square: 4 + 3 - 3 = 4 arcs
    surface = validate_surface({"genus": 0, "boundary": [4], "punctures": 1})
    assert surface.rank == 4
    assert validate_surface({"genus": 0, "boundary": [6], "punctures": 0}).rank == 3
    # multi-boundary and genus surfaces validate too
    assert validate_surface({"genus": 0, "boundary": [1, 1], "punctures": 0}).rank == 2
    assert validate_surface({"genus": 1, "boundary": [1], "punctures": 0}).rank == 4


def enumerate_count(surface, seeds=40):
    return [admissible_triangulation(surface, rng_seed=s) for s in range(seeds)]


def test_admissible_construction_hexagon():
    surface = validate_surface({"genus": 0, "boundary": [6], "punctures": 0})
    tri = admissible_triangulation(surface, rng_seed=3)
    tri.check()
    assert len(tri.arcs) == 3
    assert tri.is_admissible() and tri.is_strong_admissible()


def test_admissible_construction_punctured():
    surface = validate_surface({"genus": 0, "boundary": [4], "punctures": 1})
    tri = admissible_triangulation(surface, rng_seed=0)
    tri.check()
    assert len(tri.self_folded_triangles()) == 1
    surface3 = validate_surface({"genus": 0, "boundary": [3], "punctures": 1})
    tri3 = admissible_triangulation(surface3, rng_seed=0)
    assert len(tri3.arcs) == 3


def test_construction_deterministic():
    surface = validate_surface({"genus": 0, "boundary": [5], "punctures": 2})
    a = admissible_triangulation(surface, rng_seed=11)
    b = admissible_triangulation(surface, rng_seed=11)
    assert a == b
    assert a.to_dict() == b.to_dict()


def test_loop_type_classification():
    surface = validate_surface({"genus": 0, "boundary": [4], "punctures": 2})
    found_type_ii = False
    for seed in range(60):
        tri = admissible_triangulation(surface, rng_seed=seed)
        for _, folded, remaining in tri.self_folded_triangles():
            assert tri.loop_type(remaining) == TYPE_I
            with pytest.raises(NotALoop):
                tri.loop_type(folded)
        for loop in tri.type_ii_loops():
            assert tri.loop_type(loop) == TYPE_II
            found_type_ii = True
    assert found_type_ii, "randomization never produced a type II loop"


def test_flip_involution_everywhere():
    for boundary, punctures in ((6, 0), (4, 1), (4, 2)):
        surface = validate_surface({"genus": 0, "boundary": [boundary],
                                    "punctures": punctures})
        for seed in range(12):
            tri = admissible_triangulation(surface, rng_seed=seed)
            folded = tri.folded_sides()
            for arc in tri.arc_ids():
                if arc in folded:
                    with pytest.raises(UnflippableArc):
                        flip_ideal(tri, arc)
                    continue
                again = flip_ideal(flip_ideal(tri, arc), arc)
                assert again == IdealTriangulation(
                    tri.surface, tri.arcs, tri.triangles)


def test_flip_remaining_side_removes_self_folded():
    surface = validate_surface({"genus": 0, "boundary": [4], "punctures": 1})
    tri = admissible_triangulation(surface, rng_seed=0)
    _, folded, remaining = tri.self_folded_triangles()[0]
    flipped = flip_ideal(tri, remaining)
    flipped.check()
    assert not flipped.self_folded_triangles()


def test_make_strong_requires_admissible():
    surface = validate_surface({"genus": 0, "boundary": [4], "punctures": 1})
    tri = admissible_triangulation(surface, rng_seed=0)
    _, _, remaining = tri.self_folded_triangles()[0]
    broken = flip_ideal(tri, remaining)
    with pytest.raises(NotAdmissibleInput):
        make_strong_admissible(broken)


def test_make_strong_already_strong_is_identity():
    surface = validate_surface({"genus": 0, "boundary": [6], "punctures": 0})
    tri = admissible_triangulation(surface, rng_seed=1)
    out, log = make_strong_admissible(tri)
    assert log == []
    assert out == IdealTriangulation(tri.surface, tri.arcs, tri.triangles)


def test_make_strong_randomized_monotone():
    for boundary, punctures in ((4, 1), (4, 2), (5, 2), (6, 3)):
        surface = validate_surface({"genus": 0, "boundary": [boundary],
                                    "punctures": punctures})
        for seed in range(25):
            tri = admissible_triangulation(surface, rng_seed=seed)
            out, log = make_strong_admissible(tri)
            assert out.is_strong_admissible()
            counts = replay_type_ii_counts(tri, log)
            assert counts[-1] == 0
            # every flip pair makes progress
            level, stall = counts[0], 0
            for value in counts[1:]:
                stall = 0 if value < level else stall + 1
                level = min(level, value)
                assert stall <= 1


def test_make_strong_boundary_point_rule():
    surface = validate_surface({"genus": 0, "boundary": [1], "punctures": 2})
    tri = admissible_triangulation(surface, rng_seed=0)
    with pytest.raises(TooFewBoundaryMarkedPoints):
        make_strong_admissible(tri)
    # genus-0 whitelist: two boundary points are enough
    surface2 = validate_surface({"genus": 0, "boundary": [2], "punctures": 1})
    tri2 = admissible_triangulation(surface2, rng_seed=0)
    out, _ = make_strong_admissible(tri2)
    assert out.is_strong_admissible()


def test_serialization_stable():
    surface = validate_surface({"genus": 0, "boundary": [5], "punctures": 2})
    tri = admissible_triangulation(surface, rng_seed=4)
    assert tri.to_dict() == admissible_triangulation(surface, rng_seed=4).to_dict()
    assert any(t["self_folded"] for t in tri.to_dict()["triangles"])
