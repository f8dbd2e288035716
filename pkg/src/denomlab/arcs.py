"""Tagged arcs on disk-family surfaces and their canonical curves.

Supported families: the unpunctured polygon, the once-punctured polygon
(complete arc taxonomy for both) and the twice-punctured polygon (a finite
curated taxonomy: chords with puncture-partition selectors, radii that may
wrap the other puncture once, the puncture-to-puncture arc, and loops
enclosing both punctures; deeper braiding is outside the enumerated
universe).

Plain-curve codes are direction-free tuples:

    ("chord", i, j, S)   boundary chord, i < j, S = punctures in the ccw
                         region cut off by the boundary interval (i..j)
    ("radius", i, q, w)  boundary point i to puncture q; w = 1 wraps the
                         other puncture once
    ("loop", i, q, w)    loop at i around puncture q following radius route
                         w (untagged world only: such loops fail T1)
    ("loop2", i)         loop at i around both punctures
    ("bridge",)          the arc joining the two punctures

A tagged arc is a code plus a tag per end, subject to the usual rules: no
once-punctured monogons, plain at the boundary, equal tags on loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .curves import (
    Crossing,
    Curve,
    check_simple,
    curve_crossings,
    point_on_path,
    reduce_to_minimal,
)
from .errors import (
    InternalConsistencyError,
    IsLoop,
    NoExchange,
    NotAdmissible,
    NotPunctureIncident,
    SurfaceMismatch,
    UnsupportedSurface,
)
from .geom import (
    DegenerateIntersection,
    Point,
    add,
    circle_point,
    convex_position_ccw,
    cross,
    dist2,
    min_feature_dist2,
    on_segment,
    orient,
    point_in_polygon,
    pt,
    scale,
    sub,
)
from .planarmap import triangulation_from_curves
from .surfaces import IdealTriangulation, MarkedSurface

PLAIN = "plain"
NOTCHED = "notched"


def code_ends(code: tuple, model: "DiskModel") -> tuple:
    """Marked points at the two ends of a curve code, in canonical order."""
    kind = code[0]
    if kind == "chord":
        return (("b", code[1]), ("b", code[2]))
    if kind == "radius":
        return (("b", code[1]), ("p", code[2]))
    if kind == "loop":
        return (("b", code[1]), ("b", code[1]))
    if kind == "loop2":
        return (("b", code[1]), ("b", code[1]))
    if kind == "bridge":
        return (("p", 0), ("p", 1))
    if kind == "ploop":
        return (("p", code[1]), ("p", code[1]))
    raise ValueError(f"unknown code {code}")


@dataclass(frozen=True, order=True)
class PlainArc:
    """An arc of the untagged world (no tag constraints beyond arc-hood)."""

    code: tuple

    @property
    def kind(self) -> str:
        return self.code[0]


@dataclass(frozen=True, order=True)
class TaggedArc:
    """An arc with a tag at each end, satisfying T1-T3."""

    code: tuple
    tags: tuple

    @property
    def kind(self) -> str:
        return self.code[0]

    def tag_at(self, end_index: int) -> str:
        return self.tags[end_index]


def tagged_arc(code: tuple, tags: tuple) -> TaggedArc:
    kind = code[0]
    if kind in ("loop", "ploop"):
        raise ValueError(
            "a loop around a single puncture cuts out a once-punctured "
            "monogon and is not a tagged arc")
    if kind in ("chord", "loop2") and tags != (PLAIN, PLAIN):
        raise ValueError("boundary ends must be tagged plain")
    if kind == "radius" and tags[0] != PLAIN:
        raise ValueError("boundary end of a radius must be tagged plain")
    if any(t not in (PLAIN, NOTCHED) for t in tags):
        raise ValueError(f"bad tags {tags}")
    return TaggedArc(code, tags)


def untag(arc) -> PlainArc:
    """Forget tags; idempotent."""
    if isinstance(arc, PlainArc):
        return arc
    return PlainArc(arc.code)


class DiskModel:
    """Geometric model of a disk-family surface with its arc universe."""

    def __init__(self, surface: MarkedSurface):
        if not surface.is_disk() or surface.punctures > 2:
            raise UnsupportedSurface(
                "geometric models cover genus-0 disks with at most 2 punctures")
        if surface.boundary[0] < 3:
            raise UnsupportedSurface(
                "geometric models need a convex boundary polygon (>= 3 points);"
                " digon surfaces are supported at the combinatorial level only")
        self.surface = surface
        self.b = surface.boundary[0]
        self.p = surface.punctures
        self.rank = surface.rank
        self._build_coordinates()
        self.plain_codes = self._enumerate_plain_codes()
        self._layer = {c: k for k, c in enumerate(sorted(self.plain_codes))}
        self.arc_universe = self._enumerate_tagged()
        self._curves: dict = {}
        self._crossings: dict = {}
        self._compat: dict = {}

    # -- coordinates -----------------------------------------------------

    def _build_coordinates(self) -> None:
        import math
        b = self.b
        ts = []
        for k in range(b):
            theta = -math.pi + (2 * k + 1) * math.pi / b
            ts.append(Fraction(round(math.tan(theta / 2) * 1024), 1024))
        if sorted(set(ts)) != ts:
            raise InternalConsistencyError("boundary parameters not ordered")
        self.vertices = [circle_point(t) for t in ts]
        if not convex_position_ccw(self.vertices):
            raise InternalConsistencyError("boundary vertices not convex ccw")
        if self.p == 0:
            self.punctures = []
        elif self.p == 1:
            self.punctures = [pt(Fraction(1, 97), Fraction(1, 89))]
        else:
            self.punctures = [pt(Fraction(-19, 48), Fraction(1, 53)),
                              pt(Fraction(2, 5), Fraction(-1, 59))]
        self.marked = {("b", i): v for i, v in enumerate(self.vertices)}
        self.marked.update({("p", j): q for j, q in enumerate(self.punctures)})
        segs = [(self.vertices[i], self.vertices[j])
                for i in range(b) for j in range(i + 1, b)]
        segs += [(v, q) for v in self.vertices for q in self.punctures]
        if self.p == 2:
            segs.append((self.punctures[0], self.punctures[1]))
        hull = self.vertices
        for q in self.punctures:
            if not point_in_polygon(q, hull):
                raise InternalConsistencyError("puncture outside the polygon")
            for a, bb in segs:
                if q not in (a, bb) and on_segment(q, a, bb):
                    raise InternalConsistencyError(
                        "puncture collinear with a spine segment")
        m2 = min_feature_dist2(list(self.punctures) + list(self.vertices), segs)
        eps = Fraction(1, 2)
        while eps * eps * 256 > m2:
            eps /= 2
        self.eps = eps

    # Every detour around a puncture runs along a ring whose radius encodes
    # the forced nesting: if one curve's puncture-side pocket strictly
    # contains another's, the outer curve must ring at the larger radius.
    # The pocket's boundary-vertex count and other-puncture count give a
    # linear extension of that containment order (the rank); curves of the
    # same rank are layered by kind and then by a per-curve index.

    _LEVEL_BALLOON = 0      # tight loops around one puncture
    _LEVEL_CAP = 1          # end caps of wrapped balloons
    _LEVEL_CHORD = 2
    _LEVEL_WRAP = 3         # wrapped radii bump outside same-rank chords

    def _slot(self, rank: int, level: int, code: tuple) -> Fraction:
        k = self._layer[code]
        K = len(self._layer)
        rmax = 2 * self.b + 2
        n_slots = (rmax + 1) * 4 * K + 1
        index = (rank * 4 + level) * K + k + 1
        return self.eps * (n_slots + index) / (4 * n_slots)

    def _slot_gap(self) -> Fraction:
        K = len(self._layer)
        rmax = 2 * self.b + 2
        n_slots = (rmax + 1) * 4 * K + 1
        return self.eps / (4 * n_slots)

    def _tube(self, code: tuple) -> Fraction:
        k = self._layer[code]
        K = len(self._layer)
        return self._slot_gap() * (2 * k + 1) / (4 * K)

    def _chord_rank(self, code: tuple, puncture: int) -> int:
        _, i, j, S = code
        in_ccw = puncture in S
        verts = (j - i - 1) if in_ccw else self.b - (j - i) - 1
        others = (len(S) - 1) if in_ccw else (self.p - len(S) - 1)
        return 2 * verts + others

    def _bend(self, code: tuple, puncture: int) -> Fraction:
        return self._slot(self._chord_rank(code, puncture),
                          self._LEVEL_CHORD, code)

    # -- ring navigation ---------------------------------------------------

    _RING_DIRS = ((1, 0), (1, 1), (0, 1), (-1, 1),
                  (-1, 0), (-1, -1), (0, -1), (1, -1))

    def _ring_pt(self, center: Point, radius: Fraction, k: int) -> Point:
        d = self._RING_DIRS[k % 8]
        return (center[0] + radius * d[0], center[1] + radius * d[1])

    def _sector(self, d: Point) -> int:
        """Index k with direction d strictly inside the cone (R_k, R_{k+1})."""
        for k in range(8):
            a = self._RING_DIRS[k]
            b = self._RING_DIRS[(k + 1) % 8]
            ca = cross(a, d)
            cb = cross(d, b)
            if ca == 0 or cb == 0:
                raise InternalConsistencyError(
                    f"direction {d} aligned with a ring compass direction")
            if ca > 0 and cb > 0:
                return k
        raise InternalConsistencyError(f"no sector for {d}")

    def _detour(self, center: Point, radius: Fraction, p_from: Point,
                p_to: Point, direction: int) -> list[Point]:
        """Ring walk around ``center`` leaving the approach sectors open.

        Starts at the walk-side endpoint of the sector containing the
        direction to ``p_from`` and ends at the matching endpoint of the
        ``p_to`` sector, stepping ``direction`` (+1 ccw / -1 cw).  With
        ``p_from == p_to`` this is a cap: all of the ring except the one
        gap edge facing the anchor.
        """
        kf = self._sector(sub(p_from, center))
        kt = self._sector(sub(p_to, center))
        if direction == 1:
            start, end = (kf + 1) % 8, kt
        else:
            start, end = kf, (kt + 1) % 8
        pts = [self._ring_pt(center, radius, start)]
        k = start
        while k != end:
            k = (k + direction) % 8
            pts.append(self._ring_pt(center, radius, k))
        return pts

    # -- code enumeration ---------------------------------------------------

    def _enumerate_plain_codes(self) -> list:
        codes = []
        b, p = self.b, self.p
        subsets = [()]
        if p >= 1:
            subsets += [(j,) for j in range(p)]
        if p == 2:
            subsets.append((0, 1))
        for i in range(b):
            for j in range(i + 1, b):
                ccw_len = j - i - 1
                cw_len = b - (j - i) - 1
                for S in subsets:
                    if ccw_len == 0 and not S:
                        continue
                    if cw_len == 0 and len(S) == p:
                        continue
                    codes.append(("chord", i, j, S))
        for i in range(b):
            for q in range(p):
                for w in ((0, 1) if p == 2 else (0,)):
                    codes.append(("radius", i, q, w))
                    codes.append(("loop", i, q, w))
            if p == 2:
                codes.append(("loop2", i))
        if p == 2:
            codes.append(("bridge",))
            codes.append(("ploop", 0, 1))
            codes.append(("ploop", 1, 0))
        return sorted(codes)

    def _enumerate_tagged(self) -> list:
        out = []
        for code in self.plain_codes:
            kind = code[0]
            if kind in ("chord", "loop2"):
                out.append(tagged_arc(code, (PLAIN, PLAIN)))
            elif kind == "radius":
                out.append(tagged_arc(code, (PLAIN, PLAIN)))
                out.append(tagged_arc(code, (PLAIN, NOTCHED)))
            elif kind == "bridge":
                for t0 in (PLAIN, NOTCHED):
                    for t1 in (PLAIN, NOTCHED):
                        out.append(tagged_arc(code, (t0, t1)))
        return sorted(out)

    # -- curve construction ----------------------------------------------------

    def curve(self, code) -> Curve:
        if isinstance(code, (PlainArc, TaggedArc)):
            code = code.code
        if code not in self._curves:
            if code not in self._layer:
                raise SurfaceMismatch(f"code {code} is not on this surface")
            curve = self._build_curve(code)
            check_simple(curve)
            for q in self.punctures:
                if q not in curve.points and point_on_path(q, curve.points):
                    raise InternalConsistencyError(f"curve {code} hits a puncture")
            self._curves[code] = curve
        return self._curves[code]

    def _build_curve(self, code: tuple) -> Curve:
        kind = code[0]
        build = {
            "chord": self._build_chord,
            "radius": self._build_radius,
            "loop": self._build_loop,
            "loop2": self._build_loop2,
            "bridge": self._build_bridge,
            "ploop": self._build_ploop,
        }[kind]
        return build(code)

    def _build_chord(self, code: tuple) -> Curve:
        _, i, j, S = code
        a, b = self.vertices[i], self.vertices[j]
        d = sub(b, a)
        # The taut representative detours around as few punctures as
        # possible, preferring the punctures actually blocking the straight
        # segment; which detours are needed is not fully determined by the
        # straight segment alone (one wrap can flip the side of the other
        # puncture for free), so search subsets in that preference order
        # and let the exact region-membership test pick the first routing.
        blocking = set()
        for qi, q in enumerate(self.punctures):
            target = self._ccw_side_sign(i, j) * (1 if qi in S else -1)
            if orient(a, b, q) != target:
                blocking.add(qi)
        items = list(enumerate(self.punctures))
        subsets = [[]]
        for item in items:
            subsets = subsets + [s + [item] for s in subsets]
        subsets.sort(key=lambda s: (len(s),
                                    not blocking.issubset({qi for qi, _ in s})))
        for subset in subsets:
            group = sorted(subset,
                           key=lambda t: t[1][0] * d[0] + t[1][1] * d[1])
            valid: list[Curve] = []
            for dirs in self._direction_combos(len(group)):
                pts: list[Point] = [a]
                ok = True
                for idx, (qi, q) in enumerate(group):
                    p_from = a if idx == 0 else group[idx - 1][1]
                    p_to = b if idx == len(group) - 1 else group[idx + 1][1]
                    try:
                        pts.extend(self._detour(q, self._bend(code, qi),
                                                p_from, p_to, dirs[idx]))
                    except InternalConsistencyError:
                        ok = False
                        break
                if not ok:
                    continue
                pts.append(b)
                curve = Curve(code, tuple(pts), (("b", i), ("b", j)))
                if self._chord_ok(curve, code):
                    valid.append(curve)
            if valid:
                # Detour walks on either side of a puncture can realize the
                # same class; the taut one hugs the shorter arc.
                return min(valid, key=lambda c: len(c.points))
        raise InternalConsistencyError(f"no valid routing for chord {code}")

    @staticmethod
    def _direction_combos(n: int):
        if n == 0:
            return [()]
        out = [()]
        for _ in range(n):
            out = [c + (d,) for c in out for d in (1, -1)]
        return out

    def _chord_ok(self, curve: Curve, code: tuple) -> bool:
        _, i, j, S = code
        try:
            check_simple(curve)
            for qi, q in enumerate(self.punctures):
                if point_on_path(q, curve.points):
                    return False
                if self._in_ccw_region(curve, i, j, q) != (qi in S):
                    return False
        except (AssertionError, DegenerateIntersection):
            return False
        return True

    def _ccw_side_sign(self, i: int, j: int) -> int:
        """Side of the directed chord i->j on which its ccw region lies."""
        a, b = self.vertices[i], self.vertices[j]
        if j - i > 1:
            return orient(a, b, self.vertices[i + 1])
        centroid = self._centroid()
        return -orient(a, b, centroid)

    @lru_cache(maxsize=None)
    def _centroid(self) -> Point:
        xs = sum(v[0] for v in self.vertices)
        ys = sum(v[1] for v in self.vertices)
        return (xs / len(self.vertices), ys / len(self.vertices))

    def _in_ccw_region(self, curve: Curve, i: int, j: int, q: Point) -> bool:
        poly = list(curve.points) + [self.vertices[k] for k in range(j - 1, i, -1)]
        return point_in_polygon(q, poly)

    def _build_radius(self, code: tuple) -> Curve:
        _, i, q, w = code
        a = self.vertices[i]
        target = self.punctures[q]
        ends = (("b", i), ("p", q))
        if w == 0:
            return Curve(code, (a, target), ends)
        other = self.punctures[1 - q]
        delta = self._slot(0, self._LEVEL_WRAP, code)
        for direction in (1, -1):
            pts = (a, *self._detour(other, delta, a, target, direction), target)
            curve = Curve(code, pts, ends)
            try:
                check_simple(curve)
                wraps = point_in_polygon(other, list(curve.points))
            except AssertionError:
                continue
            if wraps:
                return curve
        raise InternalConsistencyError(f"no wrapping route for radius {code}")

    def _build_loop(self, code: tuple) -> Curve:
        _, i, q, w = code
        a = self.vertices[i]
        target = self.punctures[q]
        ends = (("b", i), ("b", i))
        if w == 0:
            delta = self._slot(0, self._LEVEL_BALLOON, code)
            pts = (a, *self._detour(target, delta, a, a, 1), a)
            curve = Curve(code, pts, ends)
        else:
            radius_code = ("radius", i, q, 1)
            spine = self.curve(radius_code).points
            ring = spine[1:-1]
            other = self.punctures[1 - q]
            delta = self._slot(0, self._LEVEL_WRAP, radius_code)
            mu = self._tube(code)
            rho = self._slot(0, self._LEVEL_CAP, code)
            outer = [add(other, scale(sub(w_, other), (delta + mu) / delta))
                     for w_ in ring]
            inner = [add(other, scale(sub(w_, other), (delta - mu) / delta))
                     for w_ in ring]
            cap = self._detour(target, rho, ring[-1], ring[-1], 1)
            # Attach the outer strand to the cap endpoint on its own side of
            # the spine's final segment.
            s_out = orient(ring[-1], target, outer[-1])
            if orient(ring[-1], target, cap[0]) != s_out:
                cap = list(reversed(cap))
            pts = (a, *outer, *cap, *reversed(inner), a)
            curve = Curve(code, pts, ends)
        check_simple(curve)
        if not point_in_polygon(target, list(curve.points)):
            raise InternalConsistencyError(f"loop {code} misses its puncture")
        for other_q in self.punctures:
            if other_q != target and point_in_polygon(other_q, list(curve.points)):
                raise InternalConsistencyError(f"loop {code} swallowed a puncture")
        return curve

    def _build_loop2(self, code: tuple) -> Curve:
        _, i = code
        a = self.vertices[i]
        q0, q1 = self.punctures
        if dist2(a, q1) < dist2(a, q0):
            q0, q1 = q1, q0
        d_out = self._slot(1, self._LEVEL_BALLOON, code)
        d_back = d_out - self._slot_gap() / 3
        for dir_out in (1, -1):
            for dir_cap in (1, -1):
                pass_out = self._detour(q0, d_out, a, q1, dir_out)
                cap = self._detour(q1, d_out, q0, q0, dir_cap)
                pass_back = self._detour(q0, d_back, q1, a, dir_out)
                pts = (a, *pass_out, *cap, *pass_back, a)
                curve = Curve(code, pts, (("b", i), ("b", i)))
                try:
                    check_simple(curve)
                    if all(point_in_polygon(q, list(curve.points))
                           for q in self.punctures):
                        return curve
                except (AssertionError, DegenerateIntersection):
                    continue
        raise InternalConsistencyError(f"no valid routing for loop2 {code}")

    def _build_bridge(self, code: tuple) -> Curve:
        return Curve(code, (self.punctures[0], self.punctures[1]),
                     (("p", 0), ("p", 1)))

    def _build_ploop(self, code: tuple) -> Curve:
        _, qb, qe = code
        base = self.punctures[qb]
        target = self.punctures[qe]
        delta = self._slot(0, self._LEVEL_BALLOON, code)
        pts = (base, *self._detour(target, delta, base, base, 1), base)
        curve = Curve(code, pts, (("p", qb), ("p", qb)))
        check_simple(curve)
        if not point_in_polygon(target, list(curve.points)):
            raise InternalConsistencyError(f"{code} misses its puncture")
        return curve

    # -- crossings -----------------------------------------------------------

    def crossings(self, code_a, code_b) -> list[Crossing]:
        """Audited transverse crossings, in role order (a first)."""
        code_a = code_a.code if isinstance(code_a, (PlainArc, TaggedArc)) else code_a
        code_b = code_b.code if isinstance(code_b, (PlainArc, TaggedArc)) else code_b
        if code_a == code_b:
            return []
        key = (code_a, code_b)
        if key not in self._crossings:
            ka, kb = sorted((code_a, code_b))
            ck = (ka, kb)
            if ck not in self._crossings:
                xs = curve_crossings(self.curve(ka), self.curve(kb))
                self._crossings[ck] = reduce_to_minimal(
                    self.curve(ka), self.curve(kb), xs, self.punctures)
            if key != ck:
                self._crossings[key] = [Crossing(c.pos_b, c.pos_a, c.point)
                                        for c in self._crossings[ck]]
                self._crossings[key].sort(key=lambda c: c.pos_a)
        return self._crossings[key]

    def crossing_count(self, a, b) -> int:
        return len(self.crossings(a, b))

    # -- compatibility --------------------------------------------------------

    def compatible(self, a: TaggedArc, b: TaggedArc) -> bool:
        key = (a, b) if a <= b else (b, a)
        if key not in self._compat:
            self._compat[key] = self._compatible(*key)
        return self._compat[key]

    def _compatible(self, a: TaggedArc, b: TaggedArc) -> bool:
        if a.code == b.code:
            # Same underlying curve: some end must agree.
            return any(ta == tb for ta, tb in zip(a.tags, b.tags))
        if self.crossing_count(a.code, b.code) != 0:
            return False
        ends_a = code_ends(a.code, self)
        ends_b = code_ends(b.code, self)
        for ia, mp in enumerate(ends_a):
            for ib, mq in enumerate(ends_b):
                if mp == mq and a.tags[ia] != b.tags[ib]:
                    return False
        return True

    def check_on_surface(self, arc) -> None:
        code = arc.code if isinstance(arc, (PlainArc, TaggedArc)) else arc
        if code not in self._layer:
            raise SurfaceMismatch(f"{code} is not an arc of this model")

    def arc_records(self) -> list[dict]:
        """Serializable listing of the tagged universe, in canonical order."""
        out = []
        for arc in self.arc_universe:
            ends = code_ends(arc.code, self)
            out.append({
                "endpoints": [list(ends[0]), list(ends[1])],
                "tags": list(arc.tags),
                "selector": list(map(str, arc.code)),
            })
        return out


# -- module-level operations matching the public contracts ---------------------


def enumerate_arcs(surface: MarkedSurface) -> DiskModel:
    """Complete tagged-arc model for the disk family (curated for p = 2)."""
    return DiskModel(surface)


def compatible(a: TaggedArc, b: TaggedArc, model: DiskModel) -> bool:
    model.check_on_surface(a)
    model.check_on_surface(b)
    return model.compatible(a, b)


def conjugate_pair_of(arc: TaggedArc, model: DiskModel | None = None
                      ) -> tuple[TaggedArc, TaggedArc]:
    """The plain/notched pair sharing this arc's underlying curve."""
    code = arc.code
    if code[0] in ("loop", "loop2"):
        raise IsLoop("loops have no conjugate pair")
    if code[0] != "radius":
        raise NotPunctureIncident(
            "conjugate pairs exist only for arcs meeting exactly one puncture")
    return (tagged_arc(code, (PLAIN, PLAIN)), tagged_arc(code, (PLAIN, NOTCHED)))


def wrapping_loop(arc: TaggedArc) -> PlainArc:
    """The plain loop tightly enclosing a 1-notched arc and its puncture."""
    from .errors import NotEligible
    if arc.code[0] != "radius" or arc.tags != (PLAIN, NOTCHED):
        raise NotEligible(
            "wrapping loops exist for arcs notched at their puncture end "
            "and plain at the boundary")
    _, i, q, w = arc.code
    return PlainArc(("loop", i, q, w))


def plain_projection(arc, model: DiskModel) -> PlainArc:
    """a -> a degrees: identity on plain codes (used on reference arcs)."""
    return untag(arc)


# -- maximal compatible sets ------------------------------------------------------


def geometric_clusters(model: DiskModel) -> list[tuple[TaggedArc, ...]]:
    """All maximal sets of pairwise compatible tagged arcs, sorted.

    Complete only where the arc universe is complete (p <= 1); gated off
    for the curated twice-punctured universe where maximal-in-universe need
    not mean maximal among all arcs.
    """
    if model.p > 1:
        raise UnsupportedSurface(
            "cluster enumeration requires the complete arc taxonomy (p <= 1)")
    universe = model.arc_universe
    n = len(universe)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if model.compatible(universe[i], universe[j]):
                adj[i].add(j)
                adj[j].add(i)
    cliques: list[tuple[TaggedArc, ...]] = []

    def expand(r: set, p_: set, x: set) -> None:
        if not p_ and not x:
            cliques.append(tuple(sorted(universe[i] for i in r)))
            return
        pivot = max(p_ | x, key=lambda v: len(adj[v] & p_))
        for v in sorted(p_ - adj[pivot]):
            expand(r | {v}, p_ & adj[v], x & adj[v])
            p_.discard(v)
            x.add(v)

    expand(set(), set(range(n)), set())
    sizes = {len(c) for c in cliques}
    if sizes != {model.rank}:
        raise InternalConsistencyError(
            f"maximal compatible sets of sizes {sizes}, expected {model.rank}")
    return sorted(cliques)


def geometric_flip(cluster: tuple[TaggedArc, ...], position: int,
                   model: DiskModel) -> tuple[TaggedArc, ...]:
    """Exchange one arc for the unique other completion of the rest."""
    if not 0 <= position < len(cluster):
        raise IndexError(position)
    rest = [a for k, a in enumerate(cluster) if k != position]
    old = cluster[position]
    candidates = [u for u in model.arc_universe
                  if u != old and u not in rest
                  and all(model.compatible(u, r) for r in rest)]
    if len(candidates) != 1:
        raise NoExchange(
            f"{len(candidates)} completions at position {position}")
    out = list(cluster)
    out[position] = candidates[0]
    return tuple(out)


# -- tagged triangulations ------------------------------------------------------


@dataclass(frozen=True)
class TaggedTriangulation:
    """A maximal compatible set of tagged arcs over a disk model."""

    model: DiskModel
    arcs: tuple[TaggedArc, ...]

    def __post_init__(self):
        n = self.model.rank
        if len(self.arcs) != n:
            raise ValueError(f"need {n} arcs, got {len(self.arcs)}")
        for i, a in enumerate(self.arcs):
            for b in self.arcs[i + 1:]:
                if not self.model.compatible(a, b):
                    raise ValueError(f"incompatible arcs {a} and {b}")

    def conjugate_pairs(self) -> dict:
        """puncture index -> (plain member, notched member), where present."""
        out = {}
        for q in range(self.model.p):
            plain = [a for a in self.arcs
                     if a.code[0] == "radius" and a.code[2] == q
                     and a.tags[1] == PLAIN]
            notched = [a for a in self.arcs
                       if a.code[0] == "radius" and a.code[2] == q
                       and a.tags[1] == NOTCHED]
            for a in plain:
                for bb in notched:
                    if a.code == bb.code:
                        out[q] = (a, bb)
        return out

    def is_admissible(self) -> bool:
        pairs = self.conjugate_pairs()
        if len(pairs) != self.model.p:
            return False
        for q, (a, _) in pairs.items():
            others = [x for x in self.arcs
                      if ("p", q) in code_ends(x.code, self.model)
                      and x.code != a.code]
            if others:
                return False
        return True

    def is_strong_admissible(self) -> bool:
        if not self.is_admissible():
            return False
        return all(a.code[0] not in ("loop", "loop2") for a in self.arcs)

    def tiles(self) -> list[dict]:
        """Classify the complementary tiles: triangle, 1- or 2-puncture piece."""
        ideal, arc_map = ideal_of_tagged(self)
        loop_ids = {}
        for a in self.arcs:
            code = arc_map[a]
            if code[0] == "loop":
                loop_ids[code] = a
        folded = ideal.folded_sides()
        order = list(ideal.geometry)
        out = []
        consumed = set()
        for t, tri in enumerate(ideal.triangles):
            if t in consumed:
                continue
            edges = [e for e, _ in tri]
            if any(edges.count(e) == 2 for e in set(edges)):
                continue  # folded triangle, merged into its wrapper below
            wrapped = [e for e in edges
                       if isinstance(e, int) and order[e] in
                       {order[k] for k in folded.values() if isinstance(k, int)}]
            if wrapped:
                kind = "one-puncture"
                out.append({"kind": kind, "triangle": t})
                consumed.add(t)
            else:
                out.append({"kind": "triangle", "triangle": t})
        if any(a.code[0] == "loop2" for a in self.arcs):
            out.append({"kind": "two-puncture", "triangle": None})
        return out


def strong_admissible_triangulation(model: DiskModel) -> TaggedTriangulation:
    """The reference triangulation used throughout verification.

    Every puncture hangs off boundary vertex 0 by its conjugate pair; the
    rest is the straight fan from vertex 0 (whose chords record each
    puncture's geometric side), completed greedily where the fan is short.
    Deterministic, loop-free, and admissible by construction.
    """
    arcs: list[TaggedArc] = []
    for q in range(model.p):
        arcs.append(tagged_arc(("radius", 0, q, 0), (PLAIN, PLAIN)))
        arcs.append(tagged_arc(("radius", 0, q, 0), (PLAIN, NOTCHED)))
    for j in range(2, model.b):
        a, b = model.vertices[0], model.vertices[j]
        side = model._ccw_side_sign(0, j)
        S = tuple(qi for qi, qpt in enumerate(model.punctures)
                  if orient(a, b, qpt) == side)
        code = ("chord", 0, j, S)
        if code in model._layer:
            arcs.append(tagged_arc(code, (PLAIN, PLAIN)))
    for candidate in model.arc_universe:
        if len(arcs) == model.rank:
            break
        if candidate.code[0] in ("loop", "loop2"):
            continue
        if candidate in arcs:
            continue
        if all(model.compatible(candidate, a) for a in arcs):
            arcs.append(candidate)
    tri = TaggedTriangulation(model, tuple(arcs))
    if not tri.is_strong_admissible():
        raise InternalConsistencyError(
            "reference construction is not strong admissible")
    return tri


def ideal_of_tagged(tagged: TaggedTriangulation) -> tuple[IdealTriangulation, dict]:
    """Project an admissible tagged triangulation to its plain companion.

    Notched members of conjugate pairs become the loop wrapping their plain
    partner; punctures tagged uniformly notched are retagged plain.  The
    result is assembled into a combinatorial triangulation via the planar
    embedding; the returned map sends each tagged arc to its plain code.
    """
    model = tagged.model
    if not tagged.is_admissible():
        raise NotAdmissible("tagged triangulation is not admissible")
    pairs = tagged.conjugate_pairs()
    notched_members = {bb for _, bb in pairs.values()}
    arc_map = {}
    for a in tagged.arcs:
        if a in notched_members:
            _, i, q, w = a.code
            arc_map[a] = ("loop", i, q, w)
        else:
            arc_map[a] = a.code
    codes = [arc_map[a] for a in tagged.arcs]
    if len(set(codes)) != len(codes):
        raise InternalConsistencyError("plain projection collapsed two arcs")
    order = sorted(codes)
    curves = {c: model.curve(c) for c in order}
    tri, _ = triangulation_from_curves(model.surface, model.vertices,
                                       model.marked, curves, order)
    return tri, arc_map
