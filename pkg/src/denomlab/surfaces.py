"""Marked surfaces and combinatorial ideal triangulations.

Triangulations are stored as oriented combinatorial maps: each triangle is
a cyclic walk of three directed sides, every interior arc is traversed once
in each direction across all triangles, and every boundary segment once.
A self-folded triangle is the walk (radius out, radius back, enclosing
loop).  This representation makes the quadrilateral flip one uniform
computation, including the flips that create or absorb self-folded
triangles.

Marked points are ``("b", i)`` for boundary points (one boundary component,
numbered counterclockwise) and ``("p", j)`` for punctures.  Edges are
``("bd", i)`` for the boundary segment from V_i to V_{i+1} and plain
integers for arcs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    BoundaryComponentWithoutMarkedPoint,
    EmptyBoundary,
    ForbiddenSurface,
    InternalConsistencyError,
    NotAdmissibleInput,
    NotALoop,
    TooFewBoundaryMarkedPoints,
    UnflippableArc,
    UnsupportedSurface,
)

MarkedPoint = tuple[str, int]
EdgeKey = object          # ("bd", i) or int arc id
Side = tuple[EdgeKey, bool]   # (edge, traversed forward?)

TYPE_I = "I"
TYPE_II = "II"


def _side_key(side: Side):
    edge, fwd = side
    if isinstance(edge, tuple):
        return (1, edge[1], fwd)
    return (0, edge, fwd)


def _sides_key(sides):
    return tuple(_side_key(s) for s in sides)


def _normalize_triangles(triangles):
    canon = []
    for tri in triangles:
        rots = [tri[i:] + tri[:i] for i in range(len(tri))]
        canon.append(min(rots, key=_sides_key))
    return tuple(sorted(canon, key=_sides_key))


def _triangles_key(triangles):
    return tuple(_sides_key(t) for t in triangles)


@dataclass(frozen=True)
class MarkedSurface:
    genus: int
    boundary: tuple[int, ...]    # marked points per boundary component
    punctures: int

    @property
    def total_boundary_points(self) -> int:
        return sum(self.boundary)

    @property
    def rank(self) -> int:
        """Number of arcs in any ideal triangulation."""
        return (6 * self.genus + 3 * len(self.boundary) + 3 * self.punctures
                + self.total_boundary_points - 6)

    def is_disk(self) -> bool:
        return self.genus == 0 and len(self.boundary) == 1

    def to_dict(self) -> dict:
        return {"genus": self.genus, "boundary": list(self.boundary),
                "punctures": self.punctures}


def validate_surface(descriptor: Mapping) -> MarkedSurface:
    """Build a MarkedSurface from {genus, boundary, punctures}, or reject."""
    genus = int(descriptor.get("genus", 0))
    boundary = tuple(int(x) for x in descriptor.get("boundary", ()))
    punctures = int(descriptor.get("punctures", 0))
    if genus < 0 or punctures < 0:
        raise ForbiddenSurface("genus and puncture count must be non-negative")
    if not boundary:
        raise EmptyBoundary("surface must have a boundary component")
    if any(b < 1 for b in boundary):
        raise BoundaryComponentWithoutMarkedPoint(
            "every boundary component needs a marked point")
    surface = MarkedSurface(genus, boundary, punctures)
    if surface.genus == 0 and len(boundary) == 1:
        b = boundary[0]
        if b == 1 and punctures <= 1:
            which = "once-punctured" if punctures else "unpunctured"
            raise ForbiddenSurface(f"{which} monogon")
        if b == 2 and punctures == 0:
            raise ForbiddenSurface("unpunctured digon")
        if b == 3 and punctures == 0:
            raise ForbiddenSurface("unpunctured triangle")
    if surface.rank < 1:
        raise ForbiddenSurface(
            f"surface admits no arcs (expected arc count {surface.rank})")
    return surface


@dataclass
class IdealTriangulation:
    """Ideal triangulation as an oriented combinatorial map.

    Treat instances as immutable: flips return new objects.  ``arcs`` maps
    arc id to its (start, end) marked points; direction is a bookkeeping
    choice, loops have start == end.
    """

    surface: MarkedSurface
    arcs: dict
    triangles: tuple
    geometry: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        # Normal form: arc records run from the smaller endpoint, every
        # triangle is rotated to start at its smallest side, and triangles
        # are sorted; equality of maps is then plain field equality.
        flipped = set()
        arcs = {}
        for a, (u, v) in self.arcs.items():
            if v < u:
                arcs[a] = (v, u)
                flipped.add(a)
            else:
                arcs[a] = (u, v)
        self.arcs = arcs
        triangles = tuple(
            tuple((e, (not fwd) if e in flipped else fwd) for e, fwd in tri)
            for tri in self.triangles)
        triangles = _normalize_triangles(triangles)
        # A loop's two direction flags are interchangeable labels; pick the
        # assignment giving the smaller normal form, loop by loop.
        for a in sorted(a for a, (u, v) in arcs.items() if u == v):
            swapped = _normalize_triangles(tuple(
                tuple((e, (not fwd) if e == a else fwd) for e, fwd in tri)
                for tri in triangles))
            if _triangles_key(swapped) < _triangles_key(triangles):
                triangles = swapped
        self.triangles = triangles

    # -- basic structure ---------------------------------------------------

    def arc_ids(self) -> list:
        return sorted(self.arcs)

    def is_arc(self, edge: EdgeKey) -> bool:
        return not (isinstance(edge, tuple) and edge and edge[0] == "bd")

    def side_endpoints(self, side: Side) -> tuple[MarkedPoint, MarkedPoint]:
        edge, fwd = side
        if self.is_arc(edge):
            a, b = self.arcs[edge]
        else:
            i = edge[1]
            b_count = self.surface.boundary[0]
            a, b = ("b", i), ("b", (i + 1) % b_count)
        return (a, b) if fwd else (b, a)

    def is_loop(self, arc) -> bool:
        a, b = self.arcs[arc]
        return a == b

    def triangle_slots(self, edge: EdgeKey) -> list[int]:
        """Indices of triangles using the edge, one entry per slot."""
        out = []
        for t, tri in enumerate(self.triangles):
            out.extend(t for side in tri if side[0] == edge)
        return out

    def self_folded_triangles(self) -> list[tuple[int, object, object]]:
        """(triangle index, folded side, remaining side) triples."""
        out = []
        for t, tri in enumerate(self.triangles):
            edges = [s[0] for s in tri]
            for e in set(edges):
                if edges.count(e) == 2:
                    remaining = next(x for x in edges if x != e)
                    out.append((t, e, remaining))
        return out

    def folded_sides(self) -> dict:
        """folded side -> remaining side."""
        return {e: rem for _, e, rem in self.self_folded_triangles()}

    def incidence(self) -> dict:
        """Edge -> triangle indices, with the folded side paired to the
        triangle of its remaining side rather than to its own triangle twice."""
        folded = self.folded_sides()
        out: dict = {}
        for edge in list(self.arcs) + [("bd", i) for i in
                                       range(self.surface.boundary[0])]:
            slots = self.triangle_slots(edge)
            if edge in folded:
                own = [t for t in slots][0]
                partner = [t for t in self.triangle_slots(folded[edge])
                           if t != own]
                slots = [own] + partner
            out[edge] = slots
        return out

    def ends_at(self, point: MarkedPoint) -> list:
        out = []
        for a, (u, v) in self.arcs.items():
            if u == point:
                out.append((a, 0))
            if v == point:
                out.append((a, 1))
        return out

    # -- admissibility ------------------------------------------------------

    def loop_type(self, arc) -> str:
        if not self.is_loop(arc):
            raise NotALoop(f"arc {arc} is not a loop")
        remaining = {rem for _, _, rem in self.self_folded_triangles()}
        return TYPE_I if arc in remaining else TYPE_II

    def type_ii_loops(self) -> list:
        return [a for a in self.arc_ids()
                if self.is_loop(a) and self.loop_type(a) == TYPE_II]

    def is_admissible(self) -> bool:
        folded = self.folded_sides()
        for j in range(self.surface.punctures):
            p = ("p", j)
            ends = self.ends_at(p)
            if len(ends) != 1:
                return False
            arc = ends[0][0]
            if arc not in folded or self.is_loop(arc):
                return False
        return True

    def is_strong_admissible(self) -> bool:
        return self.is_admissible() and not self.type_ii_loops()

    # -- validation -----------------------------------------------------------

    def check(self) -> None:
        surface = self.surface
        if len(self.arcs) != surface.rank:
            raise InternalConsistencyError(
                f"{len(self.arcs)} arcs, expected {surface.rank}")
        usage: dict = {}
        for tri in self.triangles:
            if len(tri) != 3:
                raise InternalConsistencyError("non-triangular face")
            pts = [self.side_endpoints(s) for s in tri]
            for i in range(3):
                if pts[i][1] != pts[(i + 1) % 3][0]:
                    raise InternalConsistencyError("triangle walk does not close")
            edges = [s[0] for s in tri]
            doubled = [e for e in set(edges) if edges.count(e) == 2]
            if doubled:
                folded = doubled[0]
                if self.is_loop(folded):
                    raise InternalConsistencyError("folded side cannot be a loop")
                remaining = next(e for e in edges if e != folded)
                if not self.is_loop(remaining):
                    raise InternalConsistencyError(
                        "remaining side of a self-folded triangle must be a loop")
            for side in tri:
                usage.setdefault(side[0], []).append(side[1])
        for edge, dirs in usage.items():
            if self.is_arc(edge):
                if sorted(dirs) != [False, True]:
                    raise InternalConsistencyError(
                        f"arc {edge} used {dirs}, expected once each way")
            elif len(dirs) != 1:
                raise InternalConsistencyError(
                    f"boundary segment {edge} used {len(dirs)} times")
        expected_boundary = {("bd", i) for i in range(surface.boundary[0])}
        if {e for e in usage if not self.is_arc(e)} != expected_boundary:
            raise InternalConsistencyError("boundary segments missing")

    # -- serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        folded = self.folded_sides()
        return {
            "surface": self.surface.to_dict(),
            "arcs": {str(a): [list(u), list(v)]
                     for a, (u, v) in sorted(self.arcs.items())},
            "triangles": [
                {"sides": [[str(e), fwd] for e, fwd in tri],
                 "self_folded": any(e in folded and tri.count((e, True)) +
                                    tri.count((e, False)) == 2 for e, _ in tri)}
                for tri in self.triangles
            ],
        }


# -- flips ------------------------------------------------------------------------


def flip_ideal(tri: IdealTriangulation, arc) -> IdealTriangulation:
    """Replace the arc by the other diagonal of its quadrilateral.

    The folded side of a self-folded triangle is the one unflippable arc.
    The flipped arc keeps its id, so flipping twice restores the input
    structurally.
    """
    if arc not in tri.arcs:
        raise KeyError(f"unknown arc {arc}")
    slots = tri.triangle_slots(arc)
    if len(slots) != 2:
        raise InternalConsistencyError(f"arc {arc} has {len(slots)} slots")
    if slots[0] == slots[1]:
        raise UnflippableArc(f"arc {arc} is the folded side of a self-folded triangle")
    t1, t2 = slots

    def rotated(t_index: int, want_fwd: bool) -> list[Side]:
        tri_sides = list(tri.triangles[t_index])
        for i, (e, fwd) in enumerate(tri_sides):
            if e == arc and fwd == want_fwd:
                return tri_sides[i:] + tri_sides[:i]
        raise InternalConsistencyError("orientation bookkeeping broken")

    # Orient so triangle 1 holds the arc forward.
    if (arc, True) not in tri.triangles[t1]:
        t1, t2 = t2, t1
    sides1 = rotated(t1, True)
    sides2 = rotated(t2, False)
    _, s1, s2 = sides1
    _, s3, s4 = sides2
    w = tri.side_endpoints(s1)[1]
    z = tri.side_endpoints(s3)[1]

    new_arcs = dict(tri.arcs)
    fwd, bwd = True, False
    if z < w:
        w, z = z, w
        fwd, bwd = bwd, fwd
    new_arcs[arc] = (w, z)
    new_tri_a = (s1, (arc, fwd), s4)
    new_tri_b = (s2, s3, (arc, bwd))
    triangles = []
    for idx, t in enumerate(tri.triangles):
        if idx == t1:
            triangles.append(new_tri_a)
        elif idx == t2:
            triangles.append(new_tri_b)
        else:
            triangles.append(t)
    out = IdealTriangulation(tri.surface, new_arcs, tuple(triangles))
    out.check()
    return out


# -- admissible triangulation construction ------------------------------------------


def _fan_face(face: Sequence[Side], tri: "_Builder", rng: random.Random) -> list[tuple]:
    """Triangulate one face of the partial map by fanning from a corner."""
    m = len(face)
    if m < 3:
        raise InternalConsistencyError("cannot triangulate a face with < 3 sides")
    if m == 3:
        return [tuple(face)]
    corners = [tri.side_endpoints(s)[0] for s in face]
    pivots = [i for i, c in enumerate(corners) if c[0] == "b"]
    if not pivots:
        raise InternalConsistencyError("face without boundary corner")
    p = rng.choice(pivots)
    face = list(face[p:]) + list(face[:p])
    corners = corners[p:] + corners[:p]
    out = []
    prev: Side | None = None
    for i in range(1, m - 1):
        last = i == m - 2
        if last:
            closing: Side = face[m - 1]
        else:
            arc = tri.new_arc(corners[0], corners[i + 1])
            closing = (arc, False)
        first: Side = face[0] if prev is None else prev
        out.append((first, face[i], closing))
        prev = (closing[0], True) if not last else None
    return out


class _Builder:
    """Mutable scratch structure for building triangulations."""

    def __init__(self, surface: MarkedSurface):
        self.surface = surface
        self.arcs: dict = {}
        self.next_id = 0

    def new_arc(self, u: MarkedPoint, v: MarkedPoint) -> int:
        arc = self.next_id
        self.next_id += 1
        self.arcs[arc] = (u, v)
        return arc

    def side_endpoints(self, side: Side) -> tuple[MarkedPoint, MarkedPoint]:
        edge, fwd = side
        if isinstance(edge, tuple) and edge[0] == "bd":
            b = self.surface.boundary[0]
            a, bb = ("b", edge[1]), ("b", (edge[1] + 1) % b)
        else:
            a, bb = self.arcs[edge]
        return (a, bb) if fwd else (bb, a)


def admissible_triangulation(surface: MarkedSurface, rng_seed: int) -> IdealTriangulation:
    """Random admissible ideal triangulation of a disk-type surface.

    Fan-triangulates the boundary polygon, grows a self-folded blister per
    puncture at a random boundary corner, then scrambles with random flips
    that keep every puncture enclosed.  Deterministic for a fixed seed.
    """
    if not surface.is_disk():
        raise UnsupportedSurface(
            "triangulation construction supports genus-0 single-boundary surfaces")
    rng = random.Random(rng_seed)
    b = surface.boundary[0]
    builder = _Builder(surface)

    faces: list[list[Side]] = [[(("bd", i), True) for i in range(b)]]
    triangles: list[tuple] = []

    for j in range(surface.punctures):
        # Pick a face with some boundary corner and blister the puncture in.
        candidates = []
        for fi, face in enumerate(faces):
            for ci in range(len(face)):
                if builder.side_endpoints(face[ci])[0][0] == "b":
                    candidates.append((fi, ci))
        fi, ci = rng.choice(candidates)
        face = faces.pop(fi)
        v = builder.side_endpoints(face[ci])[0]
        radius = builder.new_arc(v, ("p", j))
        loop = builder.new_arc(v, v)
        triangles.append(((radius, True), (radius, False), (loop, False)))
        faces.append([(loop, True)] + face[ci:] + face[:ci])

    for face in faces:
        if len(face) < 3:
            raise ForbiddenSurface("surface has no ideal triangulation")
        triangles.extend(_fan_face(face, builder, rng))

    tri = IdealTriangulation(surface, builder.arcs, tuple(triangles))
    tri.check()
    if not tri.is_admissible():
        raise InternalConsistencyError("construction produced non-admissible map")

    # Scramble: flips that never touch a self-folded triangle's sides.
    for _ in range(3 * max(surface.rank, 1)):
        folded = tri.folded_sides()
        protected = set(folded) | set(folded.values())
        flippable = [a for a in tri.arc_ids() if a not in protected]
        if not flippable:
            break
        arc = rng.choice(flippable)
        candidate = flip_ideal(tri, arc)
        if candidate.is_admissible():
            tri = candidate
    return tri


# -- strong admissibility ------------------------------------------------------------


def make_strong_admissible(tri: IdealTriangulation) -> tuple[IdealTriangulation, list]:
    """Flip away every type II loop; returns the result and the flip log.

    Each round removes at least one type II loop and never creates one, so
    the loop count in the log's replay decreases strictly.
    """
    surface = tri.surface
    if surface.total_boundary_points < 3 and not (
            surface.genus == 0 and surface.total_boundary_points >= 2):
        raise TooFewBoundaryMarkedPoints(
            "strong admissible construction needs >= 3 boundary marked points"
            " (or genus 0 with >= 2)")
    if not tri.is_admissible():
        raise NotAdmissibleInput("input triangulation is not admissible")

    log: list = []
    current = tri
    while True:
        t2 = current.type_ii_loops()
        if not t2:
            break
        count = len(t2)
        progressed = False
        # Case 1/2: the quadrilateral's other diagonal is not a loop.
        for alpha in t2:
            w, z = _flip_result_endpoints(current, alpha)
            if w != z:
                current = flip_ideal(current, alpha)
                log.append(alpha)
                progressed = True
                break
        if progressed:
            if len(current.type_ii_loops()) >= count:
                raise InternalConsistencyError("type II count failed to drop")
            continue
        # Without a removable loop, every type II loop must be pinned with
        # both quadrilateral corners at one point DIFFERENT from its base;
        # a corner equal to the base cannot occur here.
        for alpha in t2:
            w, z = _flip_result_endpoints(current, alpha)
            base = current.arcs[alpha][0]
            if w == base:
                raise InternalConsistencyError(
                    "pinned loop with corner at its own base point")
        # Free one pinned loop by first flipping a neighboring edge that
        # sits in a triangle with three distinct corners.
        folded = set(current.folded_sides())
        for alpha in t2:
            for beta in _quad_boundary_arcs(current, alpha):
                if beta in folded:
                    continue
                if not _has_three_distinct_corners_elsewhere(current, beta, alpha):
                    continue
                step = flip_ideal(current, beta)
                if not step.is_admissible():
                    continue
                w, z = _flip_result_endpoints(step, alpha)
                if w == z:
                    continue
                step2 = flip_ideal(step, alpha)
                if len(step2.type_ii_loops()) >= count or not step2.is_admissible():
                    continue
                current = step2
                log.extend([beta, alpha])
                progressed = True
                break
            if progressed:
                break
        if not progressed:
            raise InternalConsistencyError(
                "no progress possible; pinned loop without a usable neighbor")
    return current, log


def _flip_result_endpoints(tri: IdealTriangulation, arc) -> tuple[MarkedPoint, MarkedPoint]:
    slots = tri.triangle_slots(arc)
    if slots[0] == slots[1]:
        raise UnflippableArc(arc)
    t1, t2 = slots
    if (arc, True) not in tri.triangles[t1]:
        t1, t2 = t2, t1

    def third_corner(t_index: int, want_fwd: bool) -> MarkedPoint:
        sides = list(tri.triangles[t_index])
        i = sides.index((arc, want_fwd))
        rot = sides[i:] + sides[:i]
        return tri.side_endpoints(rot[1])[1]

    return third_corner(t1, True), third_corner(t2, False)


def _quad_boundary_arcs(tri: IdealTriangulation, alpha) -> list:
    out = []
    for t in set(tri.triangle_slots(alpha)):
        for e, _ in tri.triangles[t]:
            if e != alpha and tri.is_arc(e) and e not in out:
                out.append(e)
    return out


def _has_three_distinct_corners_elsewhere(tri: IdealTriangulation, beta, alpha) -> bool:
    """beta's other triangle exists, avoids alpha, and has 3 distinct corners."""
    alpha_tris = set(tri.triangle_slots(alpha))
    for t in tri.triangle_slots(beta):
        if t in alpha_tris:
            continue
        corners = {tri.side_endpoints(s)[0] for s in tri.triangles[t]}
        if len(corners) == 3:
            return True
    return False


def replay_type_ii_counts(tri: IdealTriangulation, log: Iterable) -> list[int]:
    """Type II loop count before each flip and after the last one."""
    counts = [len(tri.type_ii_loops())]
    current = tri
    for arc in log:
        current = flip_ideal(current, arc)
        counts.append(len(current.type_ii_loops()))
    return counts
