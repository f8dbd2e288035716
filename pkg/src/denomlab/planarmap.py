"""Faces of an arc system drawn in the disk.

Given the curve representatives of a maximal compatible set of plain arcs
plus the boundary segments, the cyclic order of curve ends around each
marked point is computed exactly from initial segment directions; face
tracing on the resulting rotation system recovers the triangles, each as a
counterclockwise walk of directed sides.  This is how geometric clusters
are converted into combinatorial :class:`~denomlab.surfaces.IdealTriangulation`
objects (with the surface orientation fixed by the embedding).
"""

from __future__ import annotations

from .curves import Curve
from .errors import InternalConsistencyError
from .geom import Point, polygon_signed_area2, pseudo_angle_key, sub
from .surfaces import IdealTriangulation, MarkedSurface

# A dart is (edge key, direction); direction 0 traverses the stored curve
# forward, 1 backward.  Boundary edge keys are ("bd", i).
Dart = tuple[object, int]


def _boundary_curves(vertices: list[Point]) -> dict:
    out = {}
    b = len(vertices)
    for i in range(b):
        out[("bd", i)] = (vertices[i], vertices[(i + 1) % b])
    return out


def trace_faces(surface: MarkedSurface, vertices: list[Point],
                marked: dict, curves: dict) -> list[list[Dart]]:
    """Interior faces of the arrangement, each a ccw walk of darts.

    ``marked`` maps marked-point ids to coordinates, ``curves`` maps edge
    keys to :class:`Curve` objects.  The outer face is identified by its
    negative signed area and dropped.
    """
    darts: dict[Dart, tuple[object, object]] = {}   # dart -> (from, to)
    direction: dict[Dart, Point] = {}
    for key, curve in curves.items():
        u, v = curve.ends
        darts[(key, 0)] = (u, v)
        darts[(key, 1)] = (v, u)
        direction[(key, 0)] = sub(curve.points[1], curve.points[0])
        direction[(key, 1)] = sub(curve.points[-2], curve.points[-1])
    b = surface.boundary[0]
    for i in range(b):
        u, v = ("b", i), ("b", (i + 1) % b)
        darts[(("bd", i), 0)] = (u, v)
        darts[(("bd", i), 1)] = (v, u)
        direction[(("bd", i), 0)] = sub(vertices[(i + 1) % b], vertices[i])
        direction[(("bd", i), 1)] = sub(vertices[i], vertices[(i + 1) % b])

    rotation: dict[object, list[Dart]] = {}
    for dart, (u, _) in darts.items():
        rotation.setdefault(u, []).append(dart)
    for mp, out in rotation.items():
        keys = [pseudo_angle_key(direction[d]) for d in out]
        if len(set(keys)) != len(keys):
            raise InternalConsistencyError(
                f"coincident curve directions at {mp}")
        out.sort(key=lambda d: pseudo_angle_key(direction[d]))

    def opposite(d: Dart) -> Dart:
        return (d[0], 1 - d[1])

    def face_next(d: Dart) -> Dart:
        # Keep the face on the left: at the head of d, take the dart
        # clockwise-next from the reversed dart.
        rev = opposite(d)
        ring = rotation[darts[rev][0]]
        i = ring.index(rev)
        return ring[(i - 1) % len(ring)]

    faces = []
    seen = set()
    for start in sorted(darts, key=_dart_sort_key):
        if start in seen:
            continue
        walk = [start]
        seen.add(start)
        current = face_next(start)
        while current != start:
            if current in seen:
                raise InternalConsistencyError("face tracing collided")
            walk.append(current)
            seen.add(current)
            current = face_next(current)
        faces.append(walk)

    interior = []
    outer = 0
    for walk in faces:
        pts: list[Point] = []
        for key, d in walk:
            if key in curves:
                seq = curves[key].points
            else:
                seq = _boundary_curves(vertices)[key]
            seq = list(seq) if d == 0 else list(reversed(seq))
            pts.extend(seq[:-1])
        if polygon_signed_area2(pts) < 0:
            outer += 1
        else:
            interior.append(walk)
    if outer != 1:
        raise InternalConsistencyError(f"{outer} outer faces traced")
    return interior


def _dart_sort_key(dart: Dart):
    key, d = dart
    if isinstance(key, tuple) and key and key[0] == "bd":
        return (1, key[1], d)
    return (0, repr(key), d)


def triangulation_from_curves(surface: MarkedSurface, vertices: list[Point],
                              marked: dict, code_curves: dict,
                              arc_order: list) -> tuple[IdealTriangulation, dict]:
    """Build the combinatorial triangulation of a maximal plain arc system.

    ``arc_order`` fixes which integer id each code receives (index in the
    list).  Returns the triangulation plus the code -> arc id map; the code
    list is attached as ``geometry`` for later crossing computations.
    """
    faces = trace_faces(surface, vertices, marked, code_curves)
    ids = {code: k for k, code in enumerate(arc_order)}
    arcs = {ids[code]: code_curves[code].ends for code in arc_order}
    triangles = []
    for walk in faces:
        if len(walk) != 3:
            raise InternalConsistencyError(
                f"non-triangular face of size {len(walk)} in arc system")
        sides = []
        for key, d in walk:
            edge = ids[key] if key in ids else key
            sides.append((edge, d == 0))
        triangles.append(tuple(sides))
    tri = IdealTriangulation(surface, arcs, tuple(triangles),
                             geometry=tuple(arc_order))
    tri.check()
    return tri, ids
