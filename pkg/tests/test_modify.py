import itertools

import pytest

from denomlab import (
    NOTCHED,
    PLAIN,
    PlainArc,
    modify_triangulation,
    project_multiset_to_plain,
    project_set_to_plain,
    recover_tagged_multiset,
    signature_of,
    strong_admissible_triangulation,
    tag_balance,
    tagged_arc,
    untag,
)
from denomlab.errors import InconsistentSignature, NotAPuncture, NotASet
from denomlab.modify import TagSignature, conjugate_partners

from conftest import disk


def radius(i, q=0, w=0, tag=PLAIN):
    return tagged_arc(("radius", i, q, w), (PLAIN, tag))


def test_tag_balance_examples(punctured_square):
    model = punctured_square
    assert tag_balance([radius(0), radius(1)], 0, model) == 2
    pair = [radius(0), radius(0, tag=NOTCHED)]
    assert tag_balance(pair, 0, model) == 0
    assert tag_balance([radius(0, tag=NOTCHED), radius(2, tag=NOTCHED)],
                       0, model) == -2
    with pytest.raises(NotAPuncture):
        tag_balance([], 3, model)


def test_balance_matches_intersection_difference(punctured_square):
    from denomlab import tagged_intersection
    model = punctured_square
    reference = strong_admissible_triangulation(model)
    plain_m, notched_m = reference.conjugate_pairs()[0]
    pool = model.arc_universe
    for combo in itertools.combinations(pool, 2):
        if not model.compatible(*combo):
            continue
        direct = tag_balance(combo, 0, model)
        via = (sum(tagged_intersection(notched_m, x, model) for x in combo)
               - sum(tagged_intersection(plain_m, x, model) for x in combo))
        assert direct == via


def test_modify_triangulation_swaps(punctured_square):
    model = punctured_square
    reference = strong_admissible_triangulation(model)
    plain_m, notched_m = reference.conjugate_pairs()[0]
    unmoved = modify_triangulation(reference, [radius(2)])
    assert unmoved.phi[plain_m] == plain_m
    assert tuple(unmoved.triangulation.arcs) == tuple(reference.arcs)
    swapped = modify_triangulation(reference, [radius(2, tag=NOTCHED)])
    assert swapped.phi[plain_m] == notched_m
    assert swapped.phi[notched_m] == plain_m
    assert swapped.triangulation.is_strong_admissible()


def test_set_projection(punctured_square):
    model = punctured_square
    plain_set = [radius(1), tagged_arc(("chord", 1, 3, ()), (PLAIN, PLAIN))]
    assert project_set_to_plain(plain_set, model) == \
        frozenset(untag(a) for a in plain_set)
    pair = [radius(0), radius(0, tag=NOTCHED)]
    assert project_set_to_plain(pair, model) == \
        frozenset({untag(radius(0)), PlainArc(("loop", 0, 0, 0))})
    lone_notched = [radius(0, tag=NOTCHED)]
    assert project_set_to_plain(lone_notched, model) == \
        frozenset({untag(radius(0))})
    with pytest.raises(NotASet):
        project_set_to_plain([radius(0), radius(0)], model)


def test_set_projection_two_notched_bridge(twice_punctured_square):
    model = twice_punctured_square
    bridge = tagged_arc(("bridge",), (NOTCHED, NOTCHED))
    assert project_set_to_plain([bridge], model) == \
        frozenset({PlainArc(("bridge",))})


def test_multiset_projection_examples(punctured_square):
    model = punctured_square
    pair = (radius(0), radius(0, tag=NOTCHED))
    assert project_multiset_to_plain(pair, model) == \
        (PlainArc(("loop", 0, 0, 0)),)
    all_plain = (radius(1), radius(1))
    assert project_multiset_to_plain(all_plain, model) == \
        (untag(radius(1)), untag(radius(1)))
    two_notched = (radius(0, tag=NOTCHED), radius(0, tag=NOTCHED))
    assert project_multiset_to_plain(two_notched, model) == \
        (untag(radius(0)), untag(radius(0)))


def test_bridge_pairs_detected(twice_punctured_square):
    model = twice_punctured_square
    a = tagged_arc(("bridge",), (NOTCHED, PLAIN))
    b = tagged_arc(("bridge",), (NOTCHED, NOTCHED))
    pair = conjugate_partners(a, 1, model)
    assert pair == (a, b)
    assert project_multiset_to_plain((a, b), model) == \
        (PlainArc(("ploop", 0, 1)),)


def test_recovery_examples(punctured_square):
    model = punctured_square
    sig0 = TagSignature((frozenset(),), (0,))
    loop = PlainArc(("loop", 2, 0, 0))
    recovered = recover_tagged_multiset((loop,), sig0, model)
    assert recovered == tuple(sorted((radius(2), radius(2, tag=NOTCHED))))
    with pytest.raises(InconsistentSignature):
        recover_tagged_multiset((loop,), TagSignature((frozenset(),), (-2,)),
                                model)
    plain_only = (untag(radius(1)),)
    assert recover_tagged_multiset(plain_only, TagSignature((frozenset(),), (1,)),
                                   model) == (radius(1),)


def test_round_trip_degree_three(punctured_square):
    model = punctured_square
    reference = strong_admissible_triangulation(model)
    pool = sorted(model.arc_universe)
    count = 0
    for degree in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(pool, degree):
            if any(not model.compatible(x, y)
                   for x, y in itertools.combinations(set(combo), 2)):
                continue
            diamond = project_multiset_to_plain(combo, model)
            sig = signature_of(combo, model)
            assert recover_tagged_multiset(diamond, sig, model) == \
                tuple(sorted(combo))
            count += 1
    assert count > 300
