"""Scenario runners wiring the whole laboratory together.

Each runner returns a report dictionary: scenario name, echoed
configuration, counts, one record per check (pass flag, number of cases,
and a replayable witness when a check fails), plus wall-clock duration.
Everything except the duration is deterministic for a fixed configuration.
"""

from __future__ import annotations

import itertools
import time
from typing import Iterable, Sequence

from .arcs import (
    NOTCHED,
    PLAIN,
    DiskModel,
    PlainArc,
    TaggedArc,
    TaggedTriangulation,
    geometric_clusters,
    ideal_of_tagged,
    strong_admissible_triangulation,
    tagged_arc,
    untag,
)
from .engine import (
    annulus_matrix,
    catalan,
    denominator_vector,
    enumerate_monomials,
    explore,
    initial_seed,
)
from .errors import TooFewBoundaryMarkedPoints, UnsupportedSurface
from .intersect import (
    arc_segments,
    crossing_count,
    intersection_vector,
    loop_adjustment,
    multiset_intersection_vector,
    plain_intersection,
    segment_counts,
    tag_mismatch,
    tagged_intersection,
)
from .modify import (
    circ_of_member,
    conjugate_partners,
    modify_triangulation,
    project_multiset_to_plain,
    recover_tagged_multiset,
    signature_of,
    tag_balance,
    wrapping_loop_code,
)
from .oracle import algebraic_exploration, lockstep_explore
from .surfaces import (
    MarkedSurface,
    admissible_triangulation,
    make_strong_admissible,
    replay_type_ii_counts,
    validate_surface,
)

DEFAULT_DEGREE_UNPUNCTURED = 3
DEFAULT_DEGREE_PUNCTURED = 2
LEMMA_CASE_CAP = 10 ** 4


def arc_label(arc) -> dict:
    if isinstance(arc, TaggedArc):
        return {"code": list(map(str, arc.code)), "tags": list(arc.tags)}
    if isinstance(arc, PlainArc):
        return {"code": list(map(str, arc.code)), "tags": ["plain", "plain"]}
    return {"code": list(map(str, arc))}


def _check(name: str, ok: bool, cases: int, witness=None) -> dict:
    entry = {"name": name, "pass": bool(ok), "cases": int(cases)}
    if witness is not None:
        entry["witness"] = witness
    return entry


def _report(scenario: str, config: dict, checks: list, counts: dict,
            started: float, flags: Sequence[str] = ()) -> dict:
    return {
        "scenario": scenario,
        "config_echo": dict(sorted(config.items())),
        "counts": {k: counts.get(k, 0) for k in ("arcs", "clusters", "monomials")},
        "checks": checks,
        "flags": sorted(flags),
        "pass": all(c["pass"] for c in checks),
        "duration_ms": int((time.time() - started) * 1000),
    }


def _disk_model(surface: MarkedSurface) -> DiskModel:
    return DiskModel(surface)


# -- injectivity ---------------------------------------------------------------


def run_injectivity(descriptor: dict, max_degree: int | None = None,
                    depth: int | None = None, cap: int = 10 ** 6,
                    weaken: bool = False) -> dict:
    """Denominator-vector injectivity over all cluster monomials.

    Finite disk families get full closure with the geometric cluster count
    as an independent witness; two-boundary (annulus-type) surfaces get a
    depth-bounded walk reported as bounded evidence only.  ``weaken``
    drops the last coordinate of every vector (the negative control).
    """
    started = time.time()
    surface = validate_surface(descriptor)
    config = {"surface": surface.to_dict(), "depth": depth, "weaken": weaken}
    checks = []
    flags = []
    counts = {}

    if len(surface.boundary) == 2:
        if depth is None:
            depth = 6
        max_degree = DEFAULT_DEGREE_PUNCTURED if max_degree is None else max_degree
        config.update({"max_degree": max_degree, "depth": depth})
        matrix = annulus_matrix(*surface.boundary)
        exploration = explore(initial_seed(matrix), depth=depth)
        flags.append("bounded-evidence")
        monomials = enumerate_monomials(exploration, max_degree)
        counts = {"clusters": exploration.cluster_count,
                  "arcs": exploration.variable_count,
                  "monomials": len(monomials)}
        checks.append(_injectivity_check(monomials, weaken))
        return _report("injectivity", config, checks, counts, started, flags)

    if surface.punctures > 1:
        raise UnsupportedSurface(
            "injectivity closure needs a finite-type disk surface")
    if max_degree is None:
        max_degree = (DEFAULT_DEGREE_UNPUNCTURED if surface.punctures == 0
                      else DEFAULT_DEGREE_PUNCTURED)
    config["max_degree"] = max_degree
    model = _disk_model(surface)
    reference = strong_admissible_triangulation(model)
    exploration = algebraic_exploration(reference, cap=cap)
    clusters = geometric_clusters(model)
    checks.append(_check(
        "cluster-count-geometric-equals-algebraic",
        len(clusters) == exploration.cluster_count,
        1, witness=None if len(clusters) == exploration.cluster_count else
        {"geometric": len(clusters), "algebraic": exploration.cluster_count}))
    if surface.punctures == 0:
        expected = catalan(surface.rank + 1)
        checks.append(_check("cluster-count-equals-catalan",
                             exploration.cluster_count == expected, 1,
                             witness=None if exploration.cluster_count == expected
                             else {"expected": expected,
                                   "got": exploration.cluster_count}))
    checks.append(_check(
        "variable-count-equals-arc-count",
        exploration.variable_count == len(model.arc_universe), 1,
        witness=None if exploration.variable_count == len(model.arc_universe)
        else {"variables": exploration.variable_count,
              "arcs": len(model.arc_universe)}))
    monomials = enumerate_monomials(exploration, max_degree)
    counts = {"arcs": len(model.arc_universe),
              "clusters": exploration.cluster_count,
              "monomials": len(monomials)}
    checks.append(_injectivity_check(monomials, weaken))
    return _report("injectivity", config, checks, counts, started, flags)


def _injectivity_check(monomials, weaken: bool) -> dict:
    seen = {}
    name = "weakened-vectors-stay-injective" if weaken else "denominators-injective"
    for m in sorted(monomials, key=lambda m: (m.denominator, m.variable_ids)):
        d = m.denominator[:-1] if weaken else m.denominator
        if d in seen and seen[d].variable_ids != m.variable_ids:
            other = seen[d]
            witness = {
                "denominator": list(d),
                "monomials": [
                    {"variables": [list(t) for t in other.variable_ids],
                     "exponents": list(other.exponents)},
                    {"variables": [list(t) for t in m.variable_ids],
                     "exponents": list(m.exponents)},
                ],
            }
            return _check(name, False, len(monomials), witness)
        seen.setdefault(d, m)
    return _check(name, True, len(monomials))


# -- oracle equivalence ----------------------------------------------------------


def run_oracle(descriptor: dict) -> dict:
    """Lockstep bijection: denominator vectors equal intersection vectors."""
    started = time.time()
    surface = validate_surface(descriptor)
    config = {"surface": surface.to_dict()}
    if not surface.is_disk() or surface.punctures > 1:
        raise UnsupportedSurface("oracle runs on finite-type disk families")
    model = _disk_model(surface)
    result = lockstep_explore(model)
    exploration = algebraic_exploration(result.reference)
    checks = [
        _check("lockstep-clusters-match-algebraic",
               result.cluster_count == exploration.cluster_count, 1),
        _check("every-arc-paired",
               len(result.arc_variable) == len(model.arc_universe), 1),
    ]
    mismatches = []
    for arc in sorted(result.arc_variable):
        den = denominator_vector(result.variables[result.arc_variable[arc]])
        ivec = intersection_vector(result.reference, arc, model)
        if den != ivec:
            mismatches.append({"arc": arc_label(arc),
                               "denominator": list(den),
                               "intersection": list(ivec)})
    checks.append(_check("denominator-equals-intersection-vector",
                         not mismatches, len(result.arc_variable),
                         witness=mismatches[0] if mismatches else None))
    counts = {"arcs": len(result.arc_variable),
              "clusters": result.cluster_count, "monomials": 0}
    return _report("oracle", config, checks, counts, started)


# -- lemma suites ------------------------------------------------------------------


def _compatible_multisets(model: DiskModel, pool: Sequence[TaggedArc],
                          max_degree: int, cap: int,
                          exclude: Iterable[TaggedArc] = ()) -> list[tuple]:
    """Pairwise-compatible multisets over the pool, smallest first, capped."""
    banned = set(exclude)
    pool = [a for a in sorted(pool) if a not in banned]
    out = []
    for degree in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(pool, degree):
            ok = True
            for x, y in itertools.combinations(set(combo), 2):
                if not model.compatible(x, y):
                    ok = False
                    break
            if ok:
                out.append(combo)
                if len(out) >= cap:
                    return out
    return out


def run_lemma_suite(descriptor: dict, max_degree: int = 2,
                    cap: int = LEMMA_CASE_CAP) -> dict:
    """Exhaustive wrapping-loop and projection identities on punctured disks."""
    started = time.time()
    surface = validate_surface(descriptor)
    config = {"surface": surface.to_dict(), "max_degree": max_degree, "cap": cap}
    if not surface.is_disk() or surface.punctures < 1:
        raise UnsupportedSurface("lemma suites need a punctured disk")
    model = _disk_model(surface)
    reference = strong_admissible_triangulation(model)
    pairs = reference.conjugate_pairs()
    checks = []

    # Wrapping-loop identities against the reference pairs.
    c421 = c422 = c423 = c425 = 0
    bad = []
    for q, (plain_m, notched_m) in sorted(pairs.items()):
        wrap = PlainArc(("loop",) + plain_m.code[1:])
        for alpha in model.arc_universe:
            ua = untag(alpha)
            a_cnt = crossing_count(plain_m, ua, model)
            l_cnt = crossing_count(wrap, ua, model)
            l_adj = loop_adjustment(wrap, ua, model)
            ends_at_q = sum(1 for mp in _tagged_ends(alpha, model)
                            if mp == ("p", q))
            if l_adj != -a_cnt:
                bad.append(("wrap-loop-adjustment", q, alpha, l_adj, -a_cnt))
            c421 += 1
            d_sum = (tag_mismatch(notched_m, alpha, model)
                     + tag_mismatch(plain_m, alpha, model))
            if ends_at_q == 0:
                if d_sum != 0 or l_cnt != 2 * a_cnt:
                    bad.append(("wrap-disjoint-endpoint", q, alpha, l_cnt, d_sum))
                c422 += 1
            elif ends_at_q == 1:
                if d_sum != 1:
                    bad.append(("wrap-one-endpoint-tags", q, alpha, d_sum))
                if ua.code != plain_m.code and l_cnt != 2 * a_cnt + 1:
                    bad.append(("wrap-one-endpoint-crossings", q, alpha, l_cnt))
                c423 += 1
            else:
                if d_sum != 2 or l_cnt != 2 * a_cnt + 2:
                    bad.append(("wrap-two-endpoints", q, alpha, l_cnt, d_sum))
            if alpha not in reference.arcs:
                lhs = l_cnt + l_adj
                rhs = (a_cnt + tag_mismatch(notched_m, alpha, model)
                       + tag_mismatch(plain_m, alpha, model))
                if lhs != rhs:
                    bad.append(("wrap-combined", q, alpha, lhs, rhs))
                c425 += 1
    checks.append(_check("wrapping-loop-identities",
                         not bad, c421 + c422 + c423 + c425,
                         witness=_lemma_witness(bad)))

    # Identities for wrapping loops of arbitrary enumerated pairs.
    bad = []
    cases = 0
    radii = sorted({a.code for a in model.arc_universe if a.code[0] == "radius"})
    for code in radii:
        gamma_plain = tagged_arc(code, (PLAIN, PLAIN))
        wrap_q = PlainArc(("loop",) + code[1:])
        q_of = code[2]
        for a in reference.arcs:
            ub = untag(a)
            if loop_adjustment(ub, wrap_q, model) != \
                    2 * loop_adjustment(ub, untag(gamma_plain), model):
                bad.append(("reference-loop-adjustment", code, a))
            cases += 1
        for p_idx, (plain_m, notched_m) in sorted(pairs.items()):
            if plain_m.code == code:
                continue  # the reference pair against its own wrap is void
            ref_wrap = PlainArc(("loop",) + plain_m.code[1:])
            shift = -1 if p_idx == q_of else 0
            lhs = loop_adjustment(ref_wrap, wrap_q, model)
            rhs = 2 * loop_adjustment(ref_wrap, untag(gamma_plain), model) + shift
            if lhs != rhs:
                bad.append(("nested-loop-adjustment", code, p_idx, lhs, rhs))
            if crossing_count(ref_wrap, wrap_q, model) != \
                    2 * crossing_count(ref_wrap, untag(gamma_plain), model):
                bad.append(("nested-loop-crossings", code, p_idx))
            cases += 2
        for a in reference.arcs:
            ua = untag(a)
            is_pair_member = any(a in pair for pair in pairs.values())
            same_pair = (a.code == code)
            if not is_pair_member or not _ends_at(a, q_of, model):
                if crossing_count(ua, wrap_q, model) != \
                        2 * crossing_count(ua, untag(gamma_plain), model):
                    bad.append(("reference-vs-loop-crossings", code, a))
            elif not same_pair:
                if crossing_count(ua, wrap_q, model) != \
                        2 * crossing_count(ua, untag(gamma_plain), model) + 1:
                    bad.append(("reference-pair-vs-loop-crossings", code, a))
            cases += 1
    checks.append(_check("pair-loop-identities", not bad, cases,
                         witness=_lemma_witness(bad)))

    # Projection identities over enumerated multisets.
    multisets = _compatible_multisets(model, model.arc_universe, max_degree,
                                      cap, exclude=reference.arcs)
    bad44, bad45, bad46, badsig = [], [], [], []
    n44 = n45 = n46 = 0
    for multiset in multisets:
        sig = signature_of(multiset, model)
        modified = modify_triangulation(reference, multiset)
        ref_circ = _circ_codes(modified)
        for q in range(model.p):
            direct = tag_balance(multiset, q, model)
            plain_m, notched_m = pairs[q]
            via_int = (sum(tagged_intersection(notched_m, x, model) for x in multiset)
                       - sum(tagged_intersection(plain_m, x, model) for x in multiset))
            if direct != via_int:
                badsig.append(("tag-balance", multiset, q, direct, via_int))
        mixed = any(s == frozenset({PLAIN, NOTCHED}) for s in sig.tags_present)
        if not mixed:
            for alpha in set(multiset):
                n44 += 1
                for a in reference.arcs:
                    lhs = tagged_intersection(a, alpha, model)
                    rhs = plain_intersection(ref_circ[a], untag(alpha), model)
                    if lhs != rhs:
                        bad44.append(("plain-companion-entry", multiset, alpha,
                                      arc_label(a), lhs, rhs))
        for q in range(model.p):
            for member in sorted(set(multiset)):
                pair = conjugate_partners(member, q, model)
                if pair is None or member != pair[0]:
                    continue
                gp, gn = pair
                if gp not in multiset or gn not in multiset:
                    continue
                n45 += 1
                wrap = PlainArc(wrapping_loop_code(gp, q, model))
                for a in reference.arcs:
                    lhs = (tagged_intersection(a, gp, model)
                           + tagged_intersection(a, gn, model))
                    rhs = plain_intersection(ref_circ[a], wrap, model)
                    if lhs != rhs:
                        bad45.append(("pair-sum-entry", multiset, gp.code,
                                      arc_label(a), lhs, rhs))
        diamond = project_multiset_to_plain(multiset, model)
        n46 += 1
        for a in reference.arcs:
            lhs = sum(tagged_intersection(a, x, model) for x in multiset)
            rhs = sum(plain_intersection(ref_circ[a], d, model) for d in diamond)
            if lhs != rhs:
                bad46.append(("multiset-projection-entry", multiset,
                              arc_label(a), lhs, rhs))
        recovered = recover_tagged_multiset(diamond, sig, model)
        if recovered != tuple(sorted(multiset)):
            badsig.append(("round-trip", multiset, diamond, recovered))
    checks.append(_check("single-arc-projection", not bad44, n44,
                         witness=_lemma_witness(bad44)))
    checks.append(_check("pair-sum-projection", not bad45, n45,
                         witness=_lemma_witness(bad45)))
    checks.append(_check("multiset-projection", not bad46, n46,
                         witness=_lemma_witness(bad46)))
    checks.append(_check("tag-balance-and-round-trip", not badsig,
                         len(multisets) * (model.p + 1),
                         witness=_lemma_witness(badsig)))
    counts = {"arcs": len(model.arc_universe), "clusters": 0,
              "monomials": len(multisets)}
    return _report("lemmas", config, checks, counts, started)


def _tagged_ends(arc: TaggedArc, model: DiskModel):
    from .arcs import code_ends
    return code_ends(arc.code, model)


def _ends_at(arc: TaggedArc, q: int, model: DiskModel) -> bool:
    return ("p", q) in _tagged_ends(arc, model)


def _circ_codes(modified) -> dict:
    """Reference arc -> the plain companion of its image under the swap."""
    out = {}
    tri = modified.triangulation
    notched_members = {b for _, b in tri.conjugate_pairs().values()}
    for a, image in modified.phi.items():
        out[a] = circ_of_member(image, image in notched_members)
    return out


def _lemma_witness(bad: list):
    if not bad:
        return None
    first = bad[0]
    return {"kind": first[0],
            "details": [repr(x) for x in first[1:]]}


# -- segment uniqueness -----------------------------------------------------------


def run_segments(descriptor: dict, max_degree: int = 2,
                 cap: int = LEMMA_CASE_CAP) -> dict:
    """Segment multisets determine compatible plain multisets."""
    started = time.time()
    surface = validate_surface(descriptor)
    config = {"surface": surface.to_dict(), "max_degree": max_degree, "cap": cap}
    if not surface.is_disk() or surface.punctures > 1:
        raise UnsupportedSurface("segment scenarios run on finite disk families")
    model = _disk_model(surface)
    reference = strong_admissible_triangulation(model)
    ideal, _ = ideal_of_tagged(reference)
    in_t = set(ideal.geometry)
    pool = [PlainArc(c) for c in model.plain_codes if c not in in_t]
    multisets = []
    for degree in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(sorted(pool), degree):
            ok = all(model.crossing_count(x.code, y.code) == 0
                     for x, y in itertools.combinations(set(combo), 2))
            if ok:
                multisets.append(combo)
                if len(multisets) >= cap:
                    break
        if len(multisets) >= cap:
            break
    groups: dict = {}
    for multiset in multisets:
        key = tuple(sorted(
            (seg for arc in multiset
             for seg in arc_segments(ideal, arc, model).segments),
            key=repr))
        groups.setdefault(key, []).append(multiset)
    collisions = [v for v in groups.values() if len(v) > 1]
    witness = None
    if collisions:
        a, b = collisions[0][0], collisions[0][1]
        witness = {"multisets": [[arc_label(x) for x in a],
                                 [arc_label(x) for x in b]]}
    checks = [_check("segments-determine-multiset", not collisions,
                     len(multisets), witness)]
    checks.append(_segment_reconstruction_check(model, ideal, multisets))
    counts = {"arcs": len(pool), "clusters": 0, "monomials": len(multisets)}
    return _report("segments", config, checks, counts, started)


def _segment_reconstruction_check(model: DiskModel, ideal, multisets) -> dict:
    """Per-triangle linear relations between crossings and segment counts."""
    bad = []
    cases = 0
    folded = ideal.folded_sides()
    order = ideal.geometry
    sample = multisets[:200]
    for multiset in sample:
        per_face = {t: segment_counts(ideal, multiset, t, model)
                    for t in range(len(ideal.triangles))}
        for t, tri in enumerate(ideal.triangles):
            edges = [e for e, _ in tri]
            doubled = [e for e in set(edges) if edges.count(e) == 2]
            data = per_face[t]
            if doubled:
                # Self-folded: the two base angles match, the folded side's
                # crossings equal one of them, and the loop's intersection
                # number adds the puncture-end classes.
                r = doubled[0]
                loop_edge = next(e for e in edges if e != r)
                base_corners = [s for s in range(3)
                                if _corner_point(ideal, t, s)[0] == "b"]
                angle_counts = sorted(data["by_corner"].get(s, 0)
                                      for s in base_corners)
                cases += 1
                if len(set(angle_counts)) > 1:
                    bad.append(("folded-angles-differ", multiset, t, angle_counts))
                    continue
                x1 = angle_counts[0] if angle_counts else 0
                a_r = sum(plain_intersection(order[r], arc, model)
                          for arc in multiset)
                puncture_ends = sum(v for (pt, e), v in data["by_end"].items()
                                    if pt[0] == "p" and e == order[loop_edge])
                io_loop = sum(plain_intersection(order[loop_edge], arc, model)
                              for arc in multiset)
                if a_r != x1:
                    bad.append(("folded-side-count", multiset, t, a_r, x1))
                if io_loop != x1 + puncture_ends:
                    bad.append(("loop-count", multiset, t, io_loop,
                                x1 + puncture_ends))
            else:
                for s in range(3):
                    edge = edges[s]
                    if not ideal.is_arc(edge) or edge in folded:
                        continue
                    code = order[edge]
                    crossings = sum(crossing_count(code, arc, model)
                                    for arc in multiset)
                    middles = (data["by_corner"].get(s, 0)
                               + data["by_corner"].get((s - 1) % 3, 0))
                    ends = sum(v for (pt, e), v in data["by_end"].items()
                               if e == code)
                    cases += 1
                    if crossings != middles + ends:
                        bad.append(("side-count", multiset, t, s,
                                    crossings, middles + ends))
    return _check("per-triangle-reconstruction", not bad, cases,
                  witness=_lemma_witness(bad))


def _corner_point(ideal, t: int, slot: int):
    side = ideal.triangles[t][slot]
    return ideal.side_endpoints(side)[1]


# -- strong admissible builder -------------------------------------------------------


def run_build_strong(descriptor: dict, count: int = 100, rng_seed: int = 0) -> dict:
    """Randomized admissible triangulations all convert to strong ones."""
    started = time.time()
    surface = validate_surface(descriptor)
    config = {"surface": surface.to_dict(), "count": count, "rng_seed": rng_seed}
    flags = []
    if surface.genus == 0 and surface.total_boundary_points == 2:
        flags.append("two-boundary-points-genus0")
    bad = []
    budget_bad = []
    had_type_ii = 0
    for k in range(count):
        tri = admissible_triangulation(surface, rng_seed=rng_seed + k)
        try:
            strong, log = make_strong_admissible(tri)
        except TooFewBoundaryMarkedPoints:
            raise
        counts = replay_type_ii_counts(tri, log)
        if counts[0] > 0:
            had_type_ii += 1
        if not strong.is_strong_admissible() or counts[-1] != 0:
            bad.append({"seed": rng_seed + k, "counts": counts})
            continue
        eliminated = counts[0]
        loops = sum(1 for a in tri.arc_ids() if tri.is_loop(a))
        if len(log) > max(1, eliminated) * (loops + len(tri.arcs)):
            budget_bad.append({"seed": rng_seed + k, "flips": len(log)})
        # Each elimination round strictly lowers the loop count within at
        # most two flips.
        level = counts[0]
        moves = 0
        for value in counts[1:]:
            moves += 1
            if value < level:
                level = value
                moves = 0
            elif moves > 1:
                bad.append({"seed": rng_seed + k, "counts": counts,
                            "reason": "no progress within a move"})
                break
    checks = [
        _check("all-outputs-strong-admissible", not bad, count,
               witness=bad[0] if bad else None),
        _check("flip-budget-respected", not budget_bad, count,
               witness=budget_bad[0] if budget_bad else None),
    ]
    counts_out = {"arcs": surface.rank, "clusters": 0, "monomials": count}
    report = _report("build-strong", config, checks, counts_out, started, flags)
    report["inputs_with_type_ii_loops"] = had_type_ii
    return report


# -- negative control -----------------------------------------------------------------


def run_negative_control() -> dict:
    """Self-test: weakened vectors on the hexagon must collide."""
    report = run_injectivity({"genus": 0, "boundary": [6], "punctures": 0},
                             max_degree=3, weaken=True)
    report["scenario"] = "negative-control"
    return report
