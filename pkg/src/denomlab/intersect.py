"""The intersection calculus on disk models.

Crossing counts, the loop adjustment, the coincidence term and the tag
mismatch combine into the intersection number of tagged arcs; vectors over
a reference triangulation collect them.  All quantities are computed on
the canonical curve representatives with pairwise minimal-position
reduction, so every value is exact.

Orientation convention: crossings along the second argument are numbered
from its canonical start; consecutive pairs are direction-symmetric, so
the loop adjustment does not depend on this choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arcs import (
    NOTCHED,
    PLAIN,
    DiskModel,
    PlainArc,
    TaggedArc,
    TaggedTriangulation,
    code_ends,
    untag,
)
from .curves import Crossing, region_polygon
from .errors import ArcInT, IncompatibleMultiset, InternalConsistencyError
from .geom import point_in_polygon
from .surfaces import IdealTriangulation


def _code(x) -> tuple:
    return x.code if isinstance(x, (PlainArc, TaggedArc)) else x


def crossing_count(a, b, model: DiskModel) -> int:
    """Minimal number of interior crossings of the untagged curves."""
    ca, cb = _code(a), _code(b)
    if ca == cb:
        return 0
    return model.crossing_count(ca, cb)


def loop_adjustment(a, b, model: DiskModel) -> int:
    """Minus the number of crossing-to-crossing pieces of ``b`` that cut a
    puncture-free triangle with the base point of the loop ``a``.

    Zero unless ``a`` is a loop.  Computed from the definition: crossings
    are taken along ``b`` in minimal position, and for each consecutive
    pair the two ways of closing up through the loop's base are tested for
    an embedded puncture-free disk.
    """
    ca, cb = _code(a), _code(b)
    if ca[0] not in ("loop", "loop2", "ploop") or ca == cb:
        return 0
    loop = model.curve(ca)
    beta = model.curve(cb)
    crossings = model.crossings(ca, cb)
    by_beta = sorted(crossings, key=lambda c: c.pos_b)
    count = 0
    for c1, c2 in zip(by_beta, by_beta[1:]):
        if _triangle_with_base(loop, beta, c1, c2, model):
            count += 1
    return -count


def _triangle_with_base(loop, beta, c1: Crossing, c2: Crossing,
                        model: DiskModel) -> bool:
    piece_b = beta.subpath(c1.pos_b, c2.pos_b)
    lo, hi = sorted((c1, c2), key=lambda c: c.pos_a)
    arms = {
        id(lo): (loop.prefix(lo.pos_a), list(reversed(loop.suffix(lo.pos_a)))),
        id(hi): (loop.prefix(hi.pos_a), list(reversed(loop.suffix(hi.pos_a)))),
    }
    # The two arms must be disjoint pieces of the loop: base->lo forward
    # pairs with base->hi backward, and vice versa only when degenerate.
    for arm1, arm2 in ((arms[id(lo)][0], arms[id(hi)][1]),
                       (arms[id(hi)][0], arms[id(lo)][1])):
        piece_1 = arm1                       # base .. crossing
        piece_2 = list(reversed(arm2))       # crossing .. base
        walk = _assemble_triangle(piece_1, piece_b, piece_2, c1, c2)
        if walk is None:
            continue
        if not any(point_in_polygon(q, walk) for q in model.punctures
                   if q not in walk):
            return True
    return False


def _assemble_triangle(arm_start, piece_b, arm_end, c1, c2):
    """Closed walk base -> b_i -> b_{i+1} -> base, or None if it overlaps."""
    from .curves import _interiors_meet

    if arm_start[-1] == piece_b[0]:
        middle = piece_b
    elif arm_start[-1] == piece_b[-1]:
        middle = list(reversed(piece_b))
    else:
        return None
    if arm_end[0] != middle[-1]:
        return None
    if _interiors_meet(arm_start, arm_end) and arm_start[-1] != arm_end[0]:
        return None
    for x, y in ((arm_start, middle), (middle, arm_end)):
        if len(x) > 1 and len(y) > 1 and _interiors_meet(x, y):
            return None
    return arm_start[:-1] + middle[:-1] + arm_end[:-1]


def coincidence_term(a, b) -> int:
    """-1 when both arguments are the same underlying curve, else 0."""
    return -1 if _code(untag_like(a)) == _code(untag_like(b)) else 0


def untag_like(x):
    return untag(x) if isinstance(x, TaggedArc) else x


def tag_mismatch(a: TaggedArc, b: TaggedArc, model: DiskModel) -> int:
    """Ends of ``b`` at an endpoint of ``a`` whose tags disagree there."""
    if not isinstance(a, TaggedArc) or not isinstance(b, TaggedArc):
        return 0
    ends_a = code_ends(a.code, model)
    ends_b = code_ends(b.code, model)
    total = 0
    for ib, mp in enumerate(ends_b):
        if mp[0] != "p" or mp not in ends_a:
            continue
        ia = ends_a.index(mp)
        if a.tags[ia] != b.tags[ib]:
            total += 1
    return total


def plain_intersection(a, b, model: DiskModel) -> int:
    """Crossing count plus loop adjustment plus coincidence term."""
    return (crossing_count(a, b, model)
            + loop_adjustment(untag_like(a), untag_like(b), model)
            + coincidence_term(a, b))


def tagged_intersection(a: TaggedArc, b: TaggedArc, model: DiskModel) -> int:
    return plain_intersection(a, b, model) + tag_mismatch(a, b, model)


# -- intersection vectors -----------------------------------------------------


def intersection_vector(reference, arc, model: DiskModel) -> tuple:
    """Entry per reference arc; tagged references use the tagged number.

    ``reference`` is a :class:`TaggedTriangulation` or a geometric
    :class:`IdealTriangulation` (plain numbers in that case).
    """
    if isinstance(reference, TaggedTriangulation):
        entries = tuple(tagged_intersection(a, arc, model)
                        for a in reference.arcs)
        codes = [a.code for a in reference.arcs]
        if _code(arc) not in codes and any(e < 0 for e in entries):
            raise InternalConsistencyError(
                f"negative tagged entry for {arc} outside the reference")
        return entries
    if isinstance(reference, IdealTriangulation):
        order = reference.geometry
        if order is None:
            raise InternalConsistencyError(
                "reference triangulation carries no curve geometry")
        return tuple(plain_intersection(code, untag_like(arc), model)
                     for code in order)
    raise TypeError(f"unsupported reference {reference!r}")


def multiset_intersection_vector(reference, multiset: Sequence, model: DiskModel,
                                 check: bool = True) -> tuple:
    """Sum of member vectors; members must be pairwise compatible."""
    arcs = list(multiset)
    if check:
        for i, a in enumerate(arcs):
            for b in arcs[i + 1:]:
                if isinstance(a, TaggedArc) and isinstance(b, TaggedArc):
                    if not model.compatible(a, b):
                        raise IncompatibleMultiset(f"{a} vs {b}")
                elif crossing_count(a, b, model) != 0:
                    raise IncompatibleMultiset(f"{a} vs {b}")
    if not arcs:
        n = (len(reference.arcs) if isinstance(reference, TaggedTriangulation)
             else len(reference.geometry))
        return (0,) * n
    vectors = [intersection_vector(reference, a, model) for a in arcs]
    return tuple(sum(v[i] for v in vectors) for i in range(len(vectors[0])))


# -- segment decompositions ----------------------------------------------------


@dataclass(frozen=True)
class Segment:
    """One irreducible arc segment class.

    ``kind`` is "end" (one endpoint at a marked point, crossing out through
    an edge) or "middle" (edge to edge, cutting one corner).  ``data``
    normalizes the class: for ends the (marked point, edge code), for
    middles the cut corner's slot in the triangle walk.
    """

    triangle: int
    kind: str
    data: tuple


@dataclass(frozen=True)
class SegmentDecomposition:
    arc: object
    segments: tuple


def arc_segments(reference: IdealTriangulation, arc, model: DiskModel
                 ) -> SegmentDecomposition:
    """Cut an arc along a triangulation into irreducible segment classes."""
    order = reference.geometry
    if order is None:
        raise InternalConsistencyError("reference carries no curve geometry")
    code = _code(untag_like(arc))
    if code in order:
        raise ArcInT(f"{code} belongs to the reference triangulation")
    beta = model.curve(code)
    hits = []
    for ref_code in order:
        for c in model.crossings(code, ref_code):
            hits.append((c.pos_a, ref_code, c))
    hits.sort(key=lambda t: t[0])

    segments = []
    stations = ([(None, None, None)] + hits + [(None, None, None)])
    for k in range(len(stations) - 1):
        _, code_in, c_in = stations[k]
        _, code_out, c_out = stations[k + 1]
        lo = c_in.pos_a if c_in else (0, Fraction(0))
        hi = c_out.pos_a if c_out else (beta.nseg - 1, Fraction(1))
        mid_param = _mid_param(beta, lo, hi)
        face = _locate_face(reference, model, beta.point_at(mid_param))
        if c_in is None and c_out is None:
            raise InternalConsistencyError("arc crosses nothing; is it in T?")
        if c_in is None or c_out is None:
            point = beta.ends[0] if c_in is None else beta.ends[1]
            edge = code_out if c_in is None else code_in
            segments.append(Segment(face, "end", (point, edge)))
        else:
            slot_in = _crossing_slot(reference, model, face, code_in, c_in,
                                     beta, lo, forward=True)
            slot_out = _crossing_slot(reference, model, face, code_out, c_out,
                                      beta, hi, forward=False)
            corner = _cut_corner(slot_in, slot_out)
            segments.append(Segment(face, "middle", (corner,)))
    return SegmentDecomposition(code, tuple(segments))


def _mid_param(beta, lo, hi):
    if lo[0] == hi[0]:
        return (lo[0], (lo[1] + hi[1]) / 2)
    # Midpoint in the flattened parameter [seg + t].
    flat = (lo[0] + lo[1] + hi[0] + hi[1]) / 2
    seg = int(flat)
    t = flat - seg
    if seg >= beta.nseg:
        seg, t = beta.nseg - 1, Fraction(1)
    if t == 0 and seg > lo[0]:
        # Segment joints are honest interior points of the curve.
        return (seg - 1, Fraction(1, 1))
    return (seg, Fraction(t))


def face_polygon(reference: IdealTriangulation, model: DiskModel,
                 face_index: int) -> list:
    pts = []
    for edge, fwd in reference.triangles[face_index]:
        if reference.is_arc(edge):
            seq = list(model.curve(reference.geometry[edge]).points)
        else:
            i = edge[1]
            b = model.b
            seq = [model.vertices[i], model.vertices[(i + 1) % b]]
        if not fwd:
            seq = list(reversed(seq))
        pts.extend(seq[:-1])
    return pts


def _locate_face(reference: IdealTriangulation, model: DiskModel, point) -> int:
    for t in range(len(reference.triangles)):
        if point_in_polygon(point, face_polygon(reference, model, t)):
            return t
    raise InternalConsistencyError(f"point {point} is in no face")


def _crossing_slot(reference: IdealTriangulation, model: DiskModel,
                   face: int, edge_code: tuple, crossing: Crossing,
                   beta, param, forward: bool) -> int:
    """Slot index of the crossed side within the face walk.

    An edge may bound the face on both banks (a folded side); the slot is
    the one whose directed side has the inside of the current segment on
    its left.
    """
    from .geom import orient
    tri = reference.triangles[face]
    edge_id = reference.geometry.index(edge_code)
    slots = [s for s, (e, _) in enumerate(tri) if e == edge_id]
    if len(slots) == 1:
        return slots[0]
    probe = beta.point_at(_nudge(beta, param, into=forward))
    a, b = model.curve(edge_code).segment(crossing.pos_b[0])
    for s in slots:
        _, fwd = tri[s]
        sa, sb = (a, b) if fwd else (b, a)
        if orient(sa, sb, probe) > 0:
            return s
    raise InternalConsistencyError("no slot has the probe on its left")


def _nudge(beta, param, into: bool):
    seg, t = param
    eps = Fraction(1, 10 ** 9)
    return (seg, t + eps) if into else (seg, t - eps)


def _cut_corner(slot_in: int, slot_out: int) -> int:
    """Corner slot cut off by a chord between two sides of a triangle.

    Corner k sits between sides k and k+1; a chord from side i to side j
    cuts the unique corner lying alone on its side of the chord.
    """
    if slot_in == slot_out:
        raise InternalConsistencyError("chord enters and leaves one side")
    pair = {slot_in, slot_out}
    if pair == {0, 1}:
        return 0
    if pair == {1, 2}:
        return 1
    if pair == {0, 2}:
        return 2
    raise InternalConsistencyError(f"bad slot pair {pair}")


def segment_counts(reference: IdealTriangulation, multiset: Sequence,
                   triangle: int, model: DiskModel) -> dict:
    """Per-triangle totals of segment classes for a compatible multiset."""
    total = 0
    by_corner: dict = {}
    by_end: dict = {}
    for arc in multiset:
        for seg in arc_segments(reference, arc, model).segments:
            if seg.triangle != triangle:
                continue
            total += 1
            if seg.kind == "middle":
                by_corner[seg.data[0]] = by_corner.get(seg.data[0], 0) + 1
            else:
                by_end[seg.data] = by_end.get(seg.data, 0) + 1
    return {"total": total, "by_corner": by_corner, "by_end": by_end}
