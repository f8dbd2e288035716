"""Polyline curve representatives and exact crossing bookkeeping.

Each isotopy class of arc used by the disk models gets one canonical
polyline representative with rational coordinates.  Crossing numbers are
literal counts of transverse segment crossings between two representatives;
a pair of representatives is trusted only after :func:`audit_pair` fails to
find an empty bigon (or empty corner bigon at a shared endpoint), which is
the standard certificate that the pair realizes the minimal crossing
number of its isotopy classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geom import (
    DegenerateIntersection,
    Point,
    on_segment,
    point_in_polygon,
    segment_crossing,
)

# Curve-local position: (segment index, parameter within segment).
Param = tuple[int, Fraction]


@dataclass(frozen=True)
class Curve:
    """A simple polyline in the disk.

    ``points[0]`` and ``points[-1]`` are marked points (equal for a loop);
    every interior vertex is a routing waypoint.  ``ends`` names the marked
    points the curve attaches to, in traversal order.
    """

    code: tuple
    points: tuple[Point, ...]
    ends: tuple[object, object]

    @property
    def is_loop(self) -> bool:
        return self.points[0] == self.points[-1]

    def segment(self, i: int) -> tuple[Point, Point]:
        return self.points[i], self.points[i + 1]

    @property
    def nseg(self) -> int:
        return len(self.points) - 1

    def point_at(self, param: Param) -> Point:
        i, t = param
        a, b = self.segment(i)
        return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)

    def subpath(self, p: Param, q: Param) -> list[Point]:
        """Polyline from position p to position q (p must precede q)."""
        if p > q:
            raise ValueError("subpath endpoints out of order")
        pts = [self.point_at(p)]
        i = p[0]
        while i < q[0]:
            pts.append(self.points[i + 1])
            i += 1
        pts.append(self.point_at(q))
        return pts

    def prefix(self, p: Param) -> list[Point]:
        return self.subpath((0, Fraction(0)), p)

    def suffix(self, p: Param) -> list[Point]:
        return self.subpath(p, (self.nseg - 1, Fraction(1)))


def check_simple(curve: Curve) -> None:
    """Assert the polyline is simple (loops may close up at the base)."""
    pts = curve.points
    n = curve.nseg
    for i in range(n):
        a, b = curve.segment(i)
        if a == b:
            raise AssertionError(f"zero-length segment in {curve.code}")
        for j in range(i + 1, n):
            c, d = curve.segment(j)
            adjacent = j == i + 1 or (curve.is_loop and i == 0 and j == n - 1)
            try:
                hit = segment_crossing(a, b, c, d)
            except DegenerateIntersection:
                hit = True
            if hit and not adjacent:
                raise AssertionError(f"self-crossing in {curve.code}")
            if adjacent and hit and not isinstance(hit, bool):
                raise AssertionError(f"adjacent self-crossing in {curve.code}")


@dataclass(frozen=True)
class Crossing:
    pos_a: Param
    pos_b: Param
    point: Point


def curve_crossings(a: Curve, b: Curve) -> list[Crossing]:
    """All transverse crossings between two distinct curves.

    Shared marked endpoints do not count.  Any non-transverse contact means
    the representatives were built wrong and is raised as an assertion.
    """
    if a.code == b.code:
        raise ValueError("crossings of a curve with itself are not defined")
    out: list[Crossing] = []
    for i in range(a.nseg):
        pa, pb = a.segment(i)
        for j in range(b.nseg):
            qa, qb = b.segment(j)
            try:
                hit = segment_crossing(pa, pb, qa, qb)
            except DegenerateIntersection as exc:
                raise AssertionError(
                    f"degenerate contact between {a.code} and {b.code}: {exc}"
                ) from exc
            if hit is None:
                continue
            t, u, point = hit
            out.append(Crossing((i, t), (j, u), point))
    out.sort(key=lambda c: c.pos_a)
    return out


def region_polygon(path_a: Sequence[Point], path_b: Sequence[Point]) -> list[Point]:
    """Closed region bounded by path_a followed by path_b reversed.

    Both paths run between the same two endpoints.
    """
    if path_a[0] != path_b[0] or path_a[-1] != path_b[-1]:
        raise ValueError("paths do not share endpoints")
    return list(path_a) + list(reversed(path_b))[1:-1]


def _punctures_inside(polygon: Sequence[Point], punctures: Iterable[Point]) -> bool:
    # A puncture can sit at a corner of the region (shared arc endpoint);
    # that does not make the region non-empty.
    return any(point_in_polygon(q, polygon) for q in punctures if q not in polygon)


def reduce_to_minimal(a: Curve, b: Curve, crossings: Sequence[Crossing],
                      punctures: Sequence[Point]) -> list[Crossing]:
    """Crossings surviving after all empty bigons and corner bigons go.

    One canonical representative per isotopy class cannot be in minimal
    position with every partner at once (a shared endpoint's corner can
    only be spent on one of them), so the pairwise minimum is computed by
    reduction: repeatedly remove an embedded puncture-free bigon (two
    crossings consecutive along both curves) or corner bigon (a first
    crossing from a shared endpoint on both curves).  When the pair is not
    minimal such an embedded disk exists, so this terminates in minimal
    position and the survivors realize the intersection number.
    """
    current = sorted(crossings, key=lambda c: c.pos_a)
    changed = True
    while changed and current:
        changed = False
        order_a = sorted(current, key=lambda c: c.pos_a)
        order_b = sorted(current, key=lambda c: c.pos_b)
        # Corner bigons at shared marked endpoints.
        for a_end in (0, 1):
            for b_end in (0, 1):
                pt_a = a.points[0] if a_end == 0 else a.points[-1]
                pt_b = b.points[0] if b_end == 0 else b.points[-1]
                if pt_a != pt_b:
                    continue
                c_a = order_a[0] if a_end == 0 else order_a[-1]
                c_b = order_b[0] if b_end == 0 else order_b[-1]
                if c_a is not c_b:
                    continue
                c = c_a
                path_a = a.prefix(c.pos_a) if a_end == 0 else \
                    list(reversed(a.suffix(c.pos_a)))
                path_b = b.prefix(c.pos_b) if b_end == 0 else \
                    list(reversed(b.suffix(c.pos_b)))
                if _interiors_meet(path_a, path_b):
                    continue
                poly = region_polygon(path_a, path_b)
                if not _punctures_inside(poly, punctures):
                    current.remove(c)
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        # Interior bigons: consecutive along both curves, embedded, empty.
        rank_b = {id(c): r for r, c in enumerate(order_b)}
        for ia in range(len(order_a) - 1):
            c1, c2 = order_a[ia], order_a[ia + 1]
            if abs(rank_b[id(c1)] - rank_b[id(c2)]) != 1:
                continue
            path_a = a.subpath(c1.pos_a, c2.pos_a)
            lo, hi = sorted((c1, c2), key=lambda c: c.pos_b)
            path_b = b.subpath(lo.pos_b, hi.pos_b)
            if path_b[0] != path_a[0]:
                path_b = list(reversed(path_b))
            if _interiors_meet(path_a, path_b):
                continue
            poly = region_polygon(path_a, path_b)
            if not _punctures_inside(poly, punctures):
                current.remove(c1)
                current.remove(c2)
                changed = True
                break
    current.sort(key=lambda c: c.pos_a)
    return current


def _interiors_meet(path_a: Sequence[Point], path_b: Sequence[Point]) -> bool:
    """Whether two paths sharing both endpoints meet anywhere else."""
    for i in range(len(path_a) - 1):
        for j in range(len(path_b) - 1):
            try:
                if segment_crossing(path_a[i], path_a[i + 1],
                                    path_b[j], path_b[j + 1]) is not None:
                    return True
            except DegenerateIntersection:
                return True
    return False


def point_on_path(x: Point, path: Sequence[Point]) -> bool:
    return any(on_segment(x, path[i], path[i + 1]) for i in range(len(path) - 1))
