"""Exact planar primitives over rational coordinates.

All points are pairs of :class:`fractions.Fraction`, so every predicate in
this module is exact: there is no epsilon anywhere, and degenerate inputs
(collinear triples, touching segments) are detected rather than guessed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Point = tuple[Fraction, Fraction]


def pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Point, b: Point) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def scale(a: Point, s) -> Point:
    s = Fraction(s)
    return (a[0] * s, a[1] * s)


def cross(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of triangle (a, b, c): +1 ccw, -1 cw, 0 flat."""
    v = cross(sub(b, a), sub(c, a))
    return (v > 0) - (v < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment [a, b]."""
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def dist2(a: Point, b: Point) -> Fraction:
    d = sub(a, b)
    return d[0] * d[0] + d[1] * d[1]


def seg_point_dist2(p: Point, a: Point, b: Point) -> Fraction:
    """Squared distance from p to the closed segment [a, b]."""
    ab = sub(b, a)
    ap = sub(p, a)
    denom = ab[0] * ab[0] + ab[1] * ab[1]
    if denom == 0:
        return dist2(p, a)
    t = (ap[0] * ab[0] + ap[1] * ab[1]) / denom
    if t <= 0:
        return dist2(p, a)
    if t >= 1:
        return dist2(p, b)
    foot = add(a, scale(ab, t))
    return dist2(p, foot)


class DegenerateIntersection(Exception):
    """Segments touch or overlap instead of crossing transversally."""


def segment_crossing(a: Point, b: Point, c: Point, d: Point):
    """Proper interior crossing of segments [a,b] and [c,d].

    Returns ``None`` if the segments are disjoint or only meet at shared
    endpoints. Returns ``(t, u, point)`` with parameters along [a,b] and
    [c,d] for a transverse interior crossing.  Raises
    :class:`DegenerateIntersection` for any other kind of contact
    (tangency, collinear overlap, interior-endpoint touch): canonical
    curve representatives must never produce those.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        r = sub(b, a)
        s = sub(d, c)
        denom = cross(r, s)
        t = cross(sub(c, a), s) / denom
        u = cross(sub(c, a), r) / denom
        return t, u, add(a, scale(r, t))
    # Shared endpoints are fine; anything else touching is a bug upstream.
    shared = {a, b} & {c, d}
    if shared:
        others = [p for p in (c, d) if p not in (a, b)]
        for p in others:
            if orient(a, b, p) == 0 and on_segment(p, a, b):
                raise DegenerateIntersection((a, b, c, d))
        others = [p for p in (a, b) if p not in (c, d)]
        for p in others:
            if orient(c, d, p) == 0 and on_segment(p, c, d):
                raise DegenerateIntersection((a, b, c, d))
        return None
    if 0 in (o1, o2, o3, o4):
        # Collinear or endpoint-on-interior contact without a shared vertex.
        touching = (
            (o1 == 0 and on_segment(c, a, b))
            or (o2 == 0 and on_segment(d, a, b))
            or (o3 == 0 and on_segment(a, c, d))
            or (o4 == 0 and on_segment(b, c, d))
        )
        if touching:
            raise DegenerateIntersection((a, b, c, d))
    return None


def polygon_signed_area2(points: Sequence[Point]) -> Fraction:
    """Twice the signed area of a closed polygon (last point joins first)."""
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        a = points[i]
        b = points[(i + 1) % n]
        total += cross(a, b)
    return total


def point_in_polygon(p: Point, polygon: Sequence[Point]) -> bool:
    """Strict interior test by half-open crossing number.

    The polygon is a closed polyline (first and last vertex joined).  The
    point must not lie on the boundary; callers guarantee this, and we raise
    if it does since a silent answer would be meaningless.
    """
    n = len(polygon)
    inside = False
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        if a == b:
            continue
        if on_segment(p, a, b):
            raise DegenerateIntersection((p, a, b))
        if (a[1] > p[1]) != (b[1] > p[1]):
            # x-coordinate where the edge meets the horizontal through p
            xs = a[0] + (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1])
            if xs > p[0]:
                inside = not inside
    return inside


def pseudo_angle_key(d: Point):
    """Sort key ordering direction vectors counterclockwise from (1, 0).

    Exact: groups directions by half-plane, then orders within each half by
    a cross-product comparison encoded as a slope fraction.
    """
    x, y = d
    if x == 0 and y == 0:
        raise ValueError("zero direction")
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1
    # Within a half-turn, angle increases as x/|v| decreases; -x/y is not
    # monotone across y = 0, so order by the exact ratio pair instead.
    if y == 0:
        slope = Fraction(-10 ** 30) if half == 0 else Fraction(-10 ** 30)
    else:
        slope = Fraction(-x, y) if half == 0 else Fraction(-x, y)
    return (half, slope)


def convex_position_ccw(points: Sequence[Point]) -> bool:
    """True iff the points, in the given order, are strictly convex ccw."""
    n = len(points)
    if n < 3:
        return False
    for i in range(n):
        if orient(points[i], points[(i + 1) % n], points[(i + 2) % n]) != 1:
            return False
    return True


def circle_point(t: Fraction) -> Point:
    """Rational point on the unit circle from the tangent-half-angle t."""
    t = Fraction(t)
    denom = 1 + t * t
    return ((1 - t * t) / denom, 2 * t / denom)


def min_feature_dist2(points: Iterable[Point],
                      segments: Iterable[tuple[Point, Point]]) -> Fraction:
    """Smallest squared distance between any listed point and segment/point.

    Used to pick a globally safe offset scale for curve construction.
    """
    pts = list(points)
    segs = list(segments)
    best = None
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            d = dist2(p, q)
            if d > 0 and (best is None or d < best):
                best = d
        for a, b in segs:
            if p in (a, b):
                continue
            d = seg_point_dist2(p, a, b)
            if d > 0 and (best is None or d < best):
                best = d
    if best is None:
        raise ValueError("no features")
    return best
