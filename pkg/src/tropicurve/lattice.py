"""Exact planar lattice geometry.

Everything here is integer or `Fraction` arithmetic; no operation ever
rounds.  Polygons are stored as counter-clockwise vertex cycles starting at
the lexicographically smallest vertex, so equality of polygons is plain
tuple equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DegenerateHull,
    NotASmoothCorner,
    PolygonTooSmall,
    ZeroVector,
)

Vec = "tuple[int, int]"
RatPoint = "tuple[Fraction, Fraction]"

#: Symbolic area unit attached to quarter-turn-rescaled polygons.  The
#: rescaling stretches lengths by pi, so areas are reported in units of
#: pi^2 while the coordinates stay rational.
PI_SQUARED = "π²"


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def neg(a):
    return (-a[0], -a[1])


def scale(k, a):
    return (k * a[0], k * a[1])


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def orient(o, a, b):
    """Sign of the turn o->a->b: >0 left, <0 right, 0 collinear."""
    return cross(sub(a, o), sub(b, o))


def primitive(v):
    """Split a nonzero integer vector into (primitive direction, length).

    The length is the lattice length: v = length * direction with the
    direction having coprime coordinates.
    """
    x, y = v
    if x == 0 and y == 0:
        raise ZeroVector("primitive direction of (0, 0) is undefined")
    g = math.gcd(abs(x), abs(y))
    return (x // g, y // g), g


def perp(v):
    """Rotate by +90 degrees: (x, y) -> (-y, x)."""
    return (-v[1], v[0])


@dataclass(frozen=True)
class LatticePolygon:
    """Counter-clockwise vertex cycle, lexicographically smallest vertex
    first.  Hull construction produces strictly convex polygons; corner
    trimming may return a non-convex (but still simple) polygonal domain.
    """

    vertices: "tuple[Vec, ...]"

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise DegenerateHull("polygon needs at least 3 vertices")

    def sides(self):
        """Oriented boundary segments (v_i, v_{i+1}), counter-clockwise."""
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @property
    def is_convex(self):
        v = self.vertices
        n = len(v)
        return all(orient(v[i - 1], v[i], v[(i + 1) % n]) > 0 for i in range(n))

    def to_json(self):
        return {"vertices": [[x, y] for x, y in self.vertices]}

    @staticmethod
    def from_json(obj):
        return polygon_from_points([tuple(p) for p in obj["vertices"]])


def _canonical_cycle(points):
    """Rotate a vertex cycle so the lexicographically smallest vertex leads."""
    k = points.index(min(points))
    return tuple(points[k:] + points[:k])


def polygon_from_points(points) -> LatticePolygon:
    """Convex hull of integer points, as a minimal CCW vertex list.

    Raises DegenerateHull when the hull has empty interior (fewer than 3
    distinct points, or all points collinear).
    """
    pts = sorted(set((int(x), int(y)) for x, y in points))
    if len(pts) < 3:
        raise DegenerateHull("need at least 3 distinct points")

    def half(seq):
        out = []
        for p in seq:
            while len(out) > 1 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHull("points are collinear")
    return LatticePolygon(_canonical_cycle(hull))


def area(P: LatticePolygon) -> Fraction:
    """Shoelace area, exact."""
    return Fraction(_twice_area(P.vertices), 2)


def _twice_area(vertices):
    v = list(vertices)
    s = 0
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        s += a[0] * b[1] - a[1] * b[0]
    return s


def on_boundary(P: LatticePolygon, p) -> bool:
    for a, b in P.sides():
        if orient(a, b, p) == 0 and dot(sub(p, a), sub(p, b)) <= 0:
            return True
    return False


def contains_point(P: LatticePolygon, p) -> bool:
    """Closed containment test, exact, valid for any simple polygon."""
    if on_boundary(P, p):
        return True
    return _strictly_inside(P.vertices, p)


def _strictly_inside(vertices, p):
    # even-odd rule with a horizontal ray; exact because all comparisons
    # reduce to integer cross products
    inside = False
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if (a[1] > p[1]) == (b[1] > p[1]):
            continue
        t = cross(sub(b, a), sub(p, a))
        if b[1] > a[1]:
            if t > 0:
                inside = not inside
        else:
            if t < 0:
                inside = not inside
    return inside


def lattice_counts(P: LatticePolygon):
    """(boundary lattice points, interior lattice points), by enumeration.

    The boundary count is the sum of lattice lengths of the sides; the
    interior count scans the bounding box with an exact in-polygon test, so
    it is independent of the area and can serve as one side of a Pick check.
    """
    b = sum(math.gcd(abs(q[0] - p[0]), abs(q[1] - p[1])) for p, q in P.sides())
    xs = [v[0] for v in P.vertices]
    ys = [v[1] for v in P.vertices]
    g = 0
    for x in range(min(xs) + 1, max(xs)):
        for y in range(min(ys) + 1, max(ys)):
            p = (x, y)
            if on_boundary(P, p):
                continue
            if _strictly_inside(P.vertices, p):
                g += 1
    return b, g


def _corner_directions(P: LatticePolygon, i):
    """Primitive directions of the two sides leaving vertex i."""
    v = P.vertices
    n = len(v)
    to_prev, _ = primitive(sub(v[(i - 1) % n], v[i]))
    to_next, _ = primitive(sub(v[(i + 1) % n], v[i]))
    return to_prev, to_next


def smooth_corners(P: LatticePolygon):
    """Vertices whose two adjacent primitive edge directions span the lattice
    (|det| = 1); these are the corners where the associated toric surface is
    smooth."""
    out = []
    for i, v in enumerate(P.vertices):
        u, w = _corner_directions(P, i)
        if abs(cross(u, w)) == 1:
            out.append(v)
    return out


def _drop_flat_vertices(cycle):
    """Remove duplicates and vertices with collinear (or reversing)
    neighbours until the cycle is stable."""
    pts = list(cycle)
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        n = len(pts)
        for i in range(n):
            if pts[i] == pts[(i + 1) % n]:
                changed = True
                continue
            out.append(pts[i])
        pts = out
        if len(pts) < 3:
            break
        out = []
        n = len(pts)
        for i in range(n):
            if orient(pts[(i - 1) % n], pts[i], pts[(i + 1) % n]) == 0:
                changed = True
                continue
            out.append(pts[i])
        pts = out
    return pts


def _segments_cross(a, b, c, d):
    """Transversal interior crossing of segments ab and cd, exact.

    Touching configurations (shared endpoints, endpoint on the interior of
    the other segment) do not count: corner trimming may legitimately pinch
    the domain against its own boundary.
    """
    d1 = orient(c, d, a)
    d2 = orient(c, d, b)
    d3 = orient(a, b, c)
    d4 = orient(a, b, d)
    return d1 * d2 < 0 and d3 * d4 < 0


def _is_simple_cycle(pts):
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            c, d = pts[j], pts[(j + 1) % n]
            if _segments_cross(a, b, c, d):
                return False
    return len(set(pts)) == n


def corner_trim(P: LatticePolygon, nu) -> LatticePolygon:
    """Remove the unit-area parallelogram spanned at a smooth corner.

    The result has area exactly area(P) - 1.  It is a simple polygonal
    domain but need not be convex.
    """
    nu = (int(nu[0]), int(nu[1]))
    if nu not in P.vertices:
        raise NotASmoothCorner(f"{nu} is not a vertex")
    i = P.vertices.index(nu)
    u, w = _corner_directions(P, i)  # toward previous / next vertex
    if abs(cross(u, w)) != 1:
        raise NotASmoothCorner(f"corner cone at {nu} has determinant != ±1")
    inner = add(nu, add(u, w))
    if not contains_point(P, inner):
        raise PolygonTooSmall("unit parallelogram does not fit")

    v = list(P.vertices)
    replacement = [add(nu, u), inner, add(nu, w)]
    cycle = v[:i] + replacement + v[i + 1 :]
    cycle = _drop_flat_vertices(cycle)
    if len(cycle) < 3 or not _is_simple_cycle(cycle):
        raise PolygonTooSmall("trimmed domain degenerates")
    trimmed = LatticePolygon(_canonical_cycle(cycle))
    if area(trimmed) != area(P) - 1:
        raise PolygonTooSmall("trimmed domain degenerates")
    return trimmed


def tau(P: LatticePolygon):
    """Rotate by -90 degrees; report areas in units of pi^2.

    The geometric map also stretches by a factor of pi in each direction;
    keeping that factor symbolic makes every coordinate and area rational.
    Returns (rotated polygon, area unit tag).
    """
    rotated = [(y, -x) for x, y in P.vertices]
    return LatticePolygon(_canonical_cycle(rotated)), PI_SQUARED
