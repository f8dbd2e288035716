import pytest

from denomlab import (
    NOTCHED,
    PLAIN,
    PlainArc,
    arc_segments,
    coincidence_term,
    crossing_count,
    ideal_of_tagged,
    intersection_vector,
    loop_adjustment,
    multiset_intersection_vector,
    plain_intersection,
    segment_counts,
    strong_admissible_triangulation,
    tag_mismatch,
    tagged_arc,
    tagged_intersection,
    untag,
)
from denomlab.errors import ArcInT, IncompatibleMultiset

from conftest import disk


def chord(*args):
    return tagged_arc(("chord",) + args[:-1] + (args[-1],), (PLAIN, PLAIN))


def test_crossing_count_examples(hexagon):
    one = crossing_count(("chord", 1, 3, ()), ("chord", 2, 4, ()), hexagon)
    assert one == 1
    # interleaving-endpoint oracle over all hexagon pairs
    for a in hexagon.arc_universe:
        for b in hexagon.arc_universe:
            _, i, j, _ = a.code
            _, k, l, _ = b.code
            interleaved = (i < k < j < l) or (k < i < l < j)
            assert crossing_count(a, b, hexagon) == int(interleaved)


def test_compatible_pairs_do_not_cross(punctured_square):
    for a in punctured_square.arc_universe:
        for b in punctured_square.arc_universe:
            if punctured_square.compatible(a, b) and a.code != b.code:
                assert crossing_count(a, b, punctured_square) == 0


def test_coincidence_term(punctured_square):
    plain = tagged_arc(("radius", 0, 0, 0), (PLAIN, PLAIN))
    notched = tagged_arc(("radius", 0, 0, 0), (PLAIN, NOTCHED))
    other = tagged_arc(("radius", 1, 0, 0), (PLAIN, PLAIN))
    assert coincidence_term(plain, plain) == -1
    assert coincidence_term(plain, notched) == -1   # equal untagged curves
    assert coincidence_term(plain, other) == 0


def test_tag_mismatch_cases(punctured_square):
    model = punctured_square
    plain = tagged_arc(("radius", 0, 0, 0), (PLAIN, PLAIN))
    notched = tagged_arc(("radius", 0, 0, 0), (PLAIN, NOTCHED))
    other_notched = tagged_arc(("radius", 2, 0, 0), (PLAIN, NOTCHED))
    assert tag_mismatch(plain, notched, model) == 1
    assert tag_mismatch(plain, other_notched, model) == 1
    assert tag_mismatch(notched, other_notched, model) == 0
    no_puncture = tagged_arc(("chord", 0, 2, ()), (PLAIN, PLAIN))
    assert tag_mismatch(no_puncture, plain, model) == 0
    # one endpoint at the puncture: mismatch against the pair sums to 1
    for arc in model.arc_universe:
        if arc.code[0] != "radius":
            continue
        total = (tag_mismatch(plain, arc, model)
                 + tag_mismatch(notched, arc, model))
        assert total == 1


def test_tagged_intersection_basics(punctured_square):
    model = punctured_square
    a = tagged_arc(("radius", 0, 0, 0), (PLAIN, PLAIN))
    assert tagged_intersection(a, a, model) == -1
    reference = strong_admissible_triangulation(model)
    for x in reference.arcs:
        for y in reference.arcs:
            expected = -1 if x == y else 0
            assert tagged_intersection(x, y, model) == expected


def test_intersection_vector_membership(punctured_square):
    model = punctured_square
    reference = strong_admissible_triangulation(model)
    n = model.rank
    for k, arc in enumerate(reference.arcs):
        vec = intersection_vector(reference, arc, model)
        assert vec == tuple(-1 if i == k else 0 for i in range(n))
    for arc in model.arc_universe:
        if arc in reference.arcs:
            continue
        vec = intersection_vector(reference, arc, model)
        assert all(v >= 0 for v in vec)
        assert any(v > 0 for v in vec)


def test_fan_vector_pattern(hexagon):
    reference = strong_admissible_triangulation(hexagon)
    # fan from vertex 0: the long chord (1,4) crosses chords (0,2),(0,3)?
    long = tagged_arc(("chord", 1, 4, ()), (PLAIN, PLAIN))
    vec = intersection_vector(reference, long, hexagon)
    assert sorted(vec) in ([0, 1, 1], [1, 1, 1])


def test_multiset_vector_linearity(punctured_square):
    model = punctured_square
    reference = strong_admissible_triangulation(model)
    assert multiset_intersection_vector(reference, (), model) == (0,) * 4
    member = reference.arcs[2]
    assert multiset_intersection_vector(reference, (member, member), model) == \
        tuple(-2 if a == member else 0 for a in reference.arcs)
    crossing = (tagged_arc(("chord", 0, 2, ()), (PLAIN, PLAIN)),
                tagged_arc(("chord", 1, 3, ()), (PLAIN, PLAIN)))
    with pytest.raises(IncompatibleMultiset):
        multiset_intersection_vector(reference, crossing, model)


def test_loop_adjustment_matches_radius(punctured_square):
    model = punctured_square
    wrap = PlainArc(("loop", 0, 0, 0))
    radius = PlainArc(("radius", 0, 0, 0))
    for arc in model.arc_universe:
        assert loop_adjustment(wrap, untag(arc), model) == \
            -crossing_count(radius, untag(arc), model)
        assert loop_adjustment(untag(arc), wrap, model) == 0 or \
            untag(arc).code[0] in ("loop", "loop2", "ploop")


def test_segments_hexagon(hexagon):
    reference = strong_admissible_triangulation(hexagon)
    ideal, _ = ideal_of_tagged(reference)
    short = PlainArc(("chord", 1, 3, ()))
    decomposition = arc_segments(ideal, short, hexagon)
    kinds = [seg.kind for seg in decomposition.segments]
    assert kinds == ["end", "end"]
    long = PlainArc(("chord", 1, 4, ()))
    kinds = [seg.kind for seg in arc_segments(ideal, long, hexagon).segments]
    assert kinds in (["end", "middle", "end"], ["end", "end"])
    with pytest.raises(ArcInT):
        arc_segments(ideal, PlainArc(("chord", 0, 2, ())), hexagon)


def test_segments_end_at_puncture(punctured_square):
    model = punctured_square
    reference = strong_admissible_triangulation(model)
    ideal, _ = ideal_of_tagged(reference)
    radius = PlainArc(("radius", 2, 0, 0))
    segments = arc_segments(ideal, radius, model).segments
    assert segments[-1].kind == "end" or segments[0].kind == "end"
    puncture_ends = [seg for seg in segments
                     if seg.kind == "end" and seg.data[0] == ("p", 0)]
    assert len(puncture_ends) == 1
    assert puncture_ends[0].data[1][0] == "loop"


def test_segment_counts_empty_and_folded(punctured_square):
    model = punctured_square
    reference = strong_admissible_triangulation(model)
    ideal, _ = ideal_of_tagged(reference)
    for t in range(len(ideal.triangles)):
        empty = segment_counts(ideal, (), t, model)
        assert empty == {"total": 0, "by_corner": {}, "by_end": {}}
    folded = ideal.folded_sides()
    sf_face = next(t for t, tri in enumerate(ideal.triangles)
                   if any(e in folded for e, _ in tri))
    multiset = [PlainArc(("chord", 1, 3, (0,)))]
    counts = segment_counts(ideal, multiset, sf_face, model)
    corners = [counts["by_corner"].get(s, 0) for s in range(3)]
    base = sorted(corners)[-2:]
    assert base[0] == base[1]   # the two base angles agree


def test_symmetry_properties(punctured_square):
    model = punctured_square
    pool = model.arc_universe[::3]
    for a in pool:
        for b in pool:
            assert crossing_count(a, b, model) == crossing_count(b, a, model)
            assert coincidence_term(a, b) == coincidence_term(b, a)
    # the loop adjustment is genuinely asymmetric
    wrap = PlainArc(("loop", 0, 0, 0))
    chord_arc = PlainArc(("chord", 1, 3, (0,)))
    assert loop_adjustment(wrap, chord_arc, model) != \
        loop_adjustment(chord_arc, wrap, model)


def test_plain_intersection_reference_identity(punctured_square):
    model = punctured_square
    wrap = PlainArc(("loop", 0, 0, 0))
    assert plain_intersection(wrap, wrap, model) == -1
    radius = PlainArc(("radius", 0, 0, 0))
    assert plain_intersection(radius, wrap, model) == 0
