"""Max-plus Laurent polynomials and their dual subdivisions.

A tropical polynomial is a finite map from integer exponents (a, b) to
rational coefficients c; its value at (x, y) is max(c + a*x + b*y).  The
coefficients lift the support into 3-space, and the faces of the upper
(concave) envelope of that lift project to a subdivision of the Newton
polygon.  With the max convention it must be the *upper* envelope: on the
support {0, 1, 2} on the x-axis with coefficients (0, 0, -10) the middle
monomial wins on a full interval (breakpoints at x = 0 and x = 10), so the
middle point has to be a vertex of the subdivision, which only the concave
envelope delivers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import lattice
from .errors import DegenerateNewtonPolygon, ParseError
from .lattice import LatticePolygon, cross, polygon_from_points, primitive, sub


@dataclass(frozen=True)
class TropicalPolynomial:
    """Immutable term list, sorted by exponent.

    The support is translation-normalized so the Newton polygon touches
    both coordinate axes; multiplying by a monomial does not move the
    corner locus, so nothing of the curve is lost.
    """

    items: "tuple[tuple[tuple[int, int], Fraction], ...]"

    @property
    def terms(self):
        return dict(self.items)

    @property
    def support(self):
        return [e for e, _ in self.items]

    def coefficient(self, e):
        return self.terms[tuple(e)]

    def to_json(self):
        return {
            "terms": [
                {"alpha": a, "beta": b, "c": str(c)} for (a, b), c in self.items
            ]
        }

    @staticmethod
    def from_json(obj):
        try:
            terms = {
                (int(t["alpha"]), int(t["beta"])): Fraction(t["c"])
                for t in obj["terms"]
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad polynomial JSON: {exc}") from None
        return tropical_polynomial(terms)


def tropical_polynomial(terms) -> TropicalPolynomial:
    """Build a polynomial from an exponent -> coefficient mapping.

    Coefficients may be ints, Fractions, or exact decimal/fraction strings.
    """
    if hasattr(terms, "items"):
        terms = terms.items()
    raw = {}
    for e, c in terms:
        e = (int(e[0]), int(e[1]))
        if e in raw:
            raise ParseError(f"duplicate exponent {e}")
        raw[e] = Fraction(c)
    if not raw:
        raise ParseError("empty support")
    amin = min(a for a, _ in raw)
    bmin = min(b for _, b in raw)
    items = tuple(sorted(((a - amin, b - bmin), c) for (a, b), c in raw.items()))
    return TropicalPolynomial(items)


def evaluate(f: TropicalPolynomial, p) -> Fraction:
    x, y = Fraction(p[0]), Fraction(p[1])
    return max(c + a * x + b * y for (a, b), c in f.items)


def argmax_terms(f: TropicalPolynomial, p):
    """Exponents whose monomial attains the maximum at p."""
    x, y = Fraction(p[0]), Fraction(p[1])
    vals = [(c + a * x + b * y, (a, b)) for (a, b), c in f.items]
    top = max(v for v, _ in vals)
    return [e for v, e in vals if v == top]


def newton_polygon(f: TropicalPolynomial) -> LatticePolygon:
    return polygon_from_points(f.support)


def tropical_product(f: TropicalPolynomial, g: TropicalPolynomial):
    """Coefficientwise max-plus product; its zero set is the union of the
    factors' zero sets."""
    out = {}
    for (a1, b1), c1 in f.items:
        for (a2, b2), c2 in g.items:
            e = (a1 + a2, b1 + b2)
            v = c1 + c2
            if e not in out or v > out[e]:
                out[e] = v
    return tropical_polynomial(out)


# ---------------------------------------------------------------------------
# upper-envelope machinery


def _orient4(p0, p1, p2, s):
    """Orientation of the lifted tetrahedron (p0, p1, p2, s).

    Positive iff s lies strictly above the plane through p0, p1, p2 when
    (p0, p1, p2) is counter-clockwise in projection.
    """
    ax, ay, az = p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]
    bx, by, bz = p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]
    cx, cy, cz = s[0] - p0[0], s[1] - p0[1], s[2] - p0[2]
    return (
        ax * (by * cz - bz * cy)
        - ay * (bx * cz - bz * cx)
        + az * (bx * cy - by * cx)
    )


def _plane_through(p0, p1, p2):
    """(A, B, D) with value A*a + B*b + D at exponent (a, b)."""
    det = cross(sub(p1[:2], p0[:2]), sub(p2[:2], p0[:2]))
    dx1, dy1, dz1 = p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]
    dx2, dy2, dz2 = p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]
    A = Fraction(dz1 * dy2 - dz2 * dy1, det)
    B = Fraction(dx1 * dz2 - dx2 * dz1, det)
    D = p0[2] - A * p0[0] - B * p0[1]
    return (A, B, D)


def _boundary_subedges(lifted, hull, index_of):
    """Boundary edges of the regular subdivision.

    Along each side of the Newton polygon the envelope restricts to a 1-D
    upper hull of the lifted points sitting on that side; its segments are
    the boundary edges, and they seed the facet walk.  A side may bend at a
    boundary support point whose lift pokes above the chord.
    """
    edges = []
    for a, b in hull.sides():
        d, _ = primitive(sub(b, a))
        on_side = []
        for p in lifted:
            v = sub(p[:2], a)
            if cross(v, d) != 0:
                continue
            t = v[0] // d[0] if d[0] else v[1] // d[1]
            if 0 <= t <= (sub(b, a)[0] // d[0] if d[0] else sub(b, a)[1] // d[1]):
                on_side.append((t, p))
        on_side.sort()
        chain = []
        for t, p in on_side:
            while len(chain) > 1:
                (t1, p1), (t2, p2) = chain[-2], chain[-1]
                if (p2[2] - p1[2]) * (t - t1) <= (p[2] - p1[2]) * (t2 - t1):
                    chain.pop()
                else:
                    break
            chain.append((t, p))
        for (_, p1), (_, p2) in zip(chain, chain[1:]):
            edges.append((index_of[p1[:2]], index_of[p2[:2]]))
    return edges


def _upper_facets(lifted):
    """Maximal faces of the upper envelope of lifted points.

    `lifted` is a list of (a, b, c) with distinct 2-D projections spanning
    the plane.  Returns a list of (contact index tuple, plane) pairs; the
    contact set of a facet is every lifted point lying on its plane.
    """
    n = len(lifted)
    hull = polygon_from_points([p[:2] for p in lifted])
    index_of = {p[:2]: i for i, p in enumerate(lifted)}

    def wrap(i, j):
        # find the facet left of the directed projected edge i -> j
        p, q = lifted[i], lifted[j]
        best = None
        for k in range(n):
            if k in (i, j):
                continue
            if cross(sub(lifted[k][:2], p[:2]), sub(q[:2], p[:2])) >= 0:
                continue  # not strictly left
            if best is None or _orient4(p, q, lifted[best], lifted[k]) > 0:
                best = k
        if best is None:
            return None
        contact = tuple(
            k
            for k in range(n)
            if k in (i, j, best)
            or _orient4(p, q, lifted[best], lifted[k]) == 0
        )
        for k in range(n):
            if k not in contact:
                assert _orient4(p, q, lifted[best], lifted[k]) < 0
        return contact, _plane_through(p, q, lifted[best])

    facets = {}
    queue = _boundary_subedges(lifted, hull, index_of)
    claimed = set()
    while queue:
        i, j = queue.pop()
        if (i, j) in claimed:
            continue
        claimed.add((i, j))
        found = wrap(i, j)
        if found is None:
            continue  # outward side of a boundary edge
        contact, plane = found
        key = frozenset(contact)
        if key in facets:
            continue
        facets[key] = (contact, plane)
        cell_hull = polygon_from_points([lifted[k][:2] for k in contact])
        for a, b in cell_hull.sides():
            ia, ib = index_of[a], index_of[b]
            claimed.add((ia, ib))
            queue.append((ib, ia))
    return list(facets.values())


@dataclass(frozen=True)
class Cell:
    """One 2-cell of a dual subdivision.

    `vertices` is the CCW hull cycle; `points` also lists support points
    lying on the cell boundary without being corners.  A cell counts as a
    triangle or parallelogram only when no such extra points exist, since
    they subdivide the boundary as far as the curve is concerned.
    """

    vertices: "tuple[tuple[int, int], ...]"
    points: "tuple[tuple[int, int], ...]"
    plane: "tuple[Fraction, Fraction, Fraction]"
    kind: str

    @property
    def polygon(self):
        return LatticePolygon(self.vertices)

    def area(self):
        return lattice.area(self.polygon)


def _classify(vertices, points):
    if len(points) > len(vertices):
        return "other"
    if len(vertices) == 3:
        return "triangle"
    if len(vertices) == 4:
        v = vertices
        if lattice.add(v[0], v[2]) == lattice.add(v[1], v[3]):
            return "parallelogram"
    return "other"


@dataclass
class SubdivisionEdge:
    endpoints: "tuple[tuple[int, int], tuple[int, int]]"  # sorted
    cells: "tuple[int, ...]"
    on_boundary: bool

    @property
    def length(self):
        import math

        (x0, y0), (x1, y1) = self.endpoints
        return math.gcd(abs(x1 - x0), abs(y1 - y0))


@dataclass
class DualSubdivision:
    """Regular subdivision of the Newton polygon induced by the coefficient
    lift, with cells classified and the edge lattice derived."""

    polygon: LatticePolygon
    cells: "list[Cell]"
    edges: "list[SubdivisionEdge]"

    @property
    def vertices(self):
        out = set()
        for cell in self.cells:
            out.update(cell.vertices)
        return sorted(out)

    def interior_vertices(self):
        return [
            v
            for v in self.vertices
            if not lattice.on_boundary(self.polygon, v)
        ]

    def cell_kinds(self):
        return [c.kind for c in self.cells]


def dual_subdivision(f: TropicalPolynomial) -> DualSubdivision:
    """Subdivision of the Newton polygon dual to the corner locus."""
    from .errors import DegenerateHull

    try:
        poly = newton_polygon(f)
    except DegenerateHull:
        raise DegenerateNewtonPolygon("support does not span the plane") from None
    lifted = [(a, b, c) for (a, b), c in f.items]
    cells = []
    for contact, plane in _upper_facets(lifted):
        pts = tuple(sorted(lifted[k][:2] for k in contact))
        hull = polygon_from_points(pts)
        cells.append(
            Cell(
                vertices=hull.vertices,
                points=pts,
                plane=plane,
                kind=_classify(hull.vertices, pts),
            )
        )
    cells.sort(key=lambda c: c.vertices)
    edge_map = {}
    for ci, cell in enumerate(cells):
        for a, b in cell.polygon.sides():
            key = tuple(sorted((a, b)))
            edge_map.setdefault(key, []).append(ci)
    edges = []
    for key in sorted(edge_map):
        incident = tuple(edge_map[key])
        boundary = len(incident) == 1
        if boundary:
            assert lattice.on_boundary(poly, key[0]) and lattice.on_boundary(
                poly, key[1]
            )
        else:
            assert len(incident) == 2
        edges.append(SubdivisionEdge(key, incident, boundary))
    total = sum(c.area() for c in cells)
    assert total == lattice.area(poly), "cells do not tile the Newton polygon"
    return DualSubdivision(poly, cells, edges)


def _collinear_envelope(f: TropicalPolynomial):
    """Upper envelope for supports on a line: returns (direction, list of
    (parameter, exponent, coefficient), hull parameter breakpoints)."""
    supp = f.support
    base = supp[0]
    if len(supp) == 1:
        return None
    d = None
    for e in supp[1:]:
        v = sub(e, base)
        if v != (0, 0):
            d, _ = primitive(v)
            break
    params = []
    for e, c in f.items:
        v = sub(e, base)
        t = v[0] // d[0] if d[0] else v[1] // d[1]
        params.append((t, e, c))
    params.sort()
    # upper hull over (t, c)
    hull = []
    for t, e, c in params:
        while len(hull) > 1:
            (t1, _, c1), (t2, _, c2) = hull[-2], hull[-1]
            if (c2 - c1) * (t - t1) <= (c - c1) * (t2 - t1):
                hull.pop()
            else:
                break
        hull.append((t, e, c))
    return d, params, hull


def canonicalize(f: TropicalPolynomial) -> TropicalPolynomial:
    """Raise every coefficient to the value of the concave envelope of the
    lifted support.  The function computed by the polynomial is unchanged;
    afterwards each monomial either wins on a full-dimensional region or is
    interior to a face of the envelope."""
    if len(f.items) == 1:
        return f
    if all(
        cross(sub(e, f.support[0]), sub(f.support[1], f.support[0])) == 0
        for e in f.support
    ) and len(set(f.support)) >= 2:
        col = _collinear_envelope(f)
        if col is None:
            return f
        d, params, hull = col
        new = {}
        hi = 0
        for t, e, c in params:
            while hi + 1 < len(hull) and hull[hi + 1][0] <= t:
                hi += 1
            if hull[hi][0] == t:
                new[e] = hull[hi][2]
            else:
                (t1, _, c1), (t2, _, c2) = hull[hi], hull[hi + 1]
                new[e] = c1 + (c2 - c1) * Fraction(t - t1, t2 - t1)
        return tropical_polynomial(new)
    lifted = [(a, b, c) for (a, b), c in f.items]
    facets = _upper_facets(lifted)
    new = {}
    for (a, b), c in f.items:
        env = min(A * a + B * b + D for _, (A, B, D) in facets)
        new[(a, b)] = env
    return tropical_polynomial(new)


def contributing_support(f: TropicalPolynomial):
    """Support points that are vertices of the dual subdivision; the other
    monomials never win on a full-dimensional region."""
    if len(f.items) == 1:
        return frozenset(f.support)
    try:
        sub_ = dual_subdivision(f)
    except DegenerateNewtonPolygon:
        col = _collinear_envelope(f)
        _, _, hull = col
        return frozenset(e for _, e, _ in hull)
    return frozenset(sub_.vertices)


# ---------------------------------------------------------------------------
# text form: "c * x^a * y^b + ..." with + meaning tropical max

_TERM_RE = re.compile(
    r"""^\s*
    (?P<coef>[+-]?(?:\d+(?:\.\d+)?|\.\d+)(?:/\d+)?)?
    \s*\*?\s*
    (?:x(?:\^(?P<ax>[+-]?\d+))?)?
    \s*\*?\s*
    (?:y(?:\^(?P<by>[+-]?\d+))?)?
    \s*$""",
    re.VERBOSE,
)


def parse_polynomial(text: str) -> TropicalPolynomial:
    terms = {}
    chunks = re.split(r"\+(?![^(]*\))", text.replace("−", "-"))
    for chunk in chunks:
        chunk = chunk.strip()
        if not chunk:
            raise ParseError("empty term")
        m = _TERM_RE.match(chunk)
        if not m or not (m.group("coef") or "x" in chunk or "y" in chunk):
            raise ParseError(f"cannot parse term {chunk!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(0)
        a = 0
        if "x" in chunk:
            a = int(m.group("ax")) if m.group("ax") else 1
        b = 0
        if "y" in chunk:
            b = int(m.group("by")) if m.group("by") else 1
        e = (a, b)
        if e in terms:
            terms[e] = max(terms[e], coef)
        else:
            terms[e] = coef
    return tropical_polynomial(terms)
