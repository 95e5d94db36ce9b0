"""Tropical plane curves as weighted balanced graphs dual to a subdivision.

A curve vertex sits at minus the gradient of the supporting plane of its
dual cell; segments are dual to interior subdivision edges, rays to
boundary ones.  Four-valent vertices (dual to parallelograms) are nodes:
two straight strands cross there.  The normalization separates the strands,
producing a trivalent graph whose edges are maximal straight chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice
from .errors import DegenerateNewtonPolygon, DegenerateHull, NotSimple
from .lattice import LatticePolygon, add, cross, dot, primitive, sub
from .polynomial import (
    DualSubdivision,
    TropicalPolynomial,
    _collinear_envelope,
    dual_subdivision,
    newton_polygon,
)


@dataclass
class CurveVertex:
    position: "tuple[Fraction, Fraction]"
    cell: int  # index of the dual cell
    kind: str  # cell kind: triangle / parallelogram / other


@dataclass
class Segment:
    v0: int
    v1: int
    direction: "tuple[int, int]"  # primitive, from v0 to v1
    weight: int
    dual: "tuple[tuple[int, int], tuple[int, int]]"


@dataclass
class Ray:
    vertex: int
    direction: "tuple[int, int]"  # primitive, outgoing
    weight: int
    dual: "tuple[tuple[int, int], tuple[int, int]]"


@dataclass
class FullLine:
    """Component with no vertices; arises from supports on a lattice line."""

    anchor: "tuple[Fraction, Fraction]"
    direction: "tuple[int, int]"
    weight: int
    dual: "tuple[tuple[int, int], tuple[int, int]]"


@dataclass
class Face:
    """Complement component, labelled by the dominating exponent."""

    order: "tuple[int, int]"
    bounded: bool


@dataclass
class Node:
    position: "tuple[Fraction, Fraction]"
    cell: "tuple[tuple[int, int], ...]"  # dual parallelogram vertices
    multiplicity: int
    hyperbolic: bool


@dataclass
class TropicalCurve:
    polynomial: TropicalPolynomial
    subdivision: "DualSubdivision | None"
    vertices: "list[CurveVertex]"
    segments: "list[Segment]"
    rays: "list[Ray]"
    lines: "list[FullLine]"
    faces: "list[Face]"

    def vertex_position(self, i):
        return self.vertices[i].position


def _vertex_of_cell(cell):
    A, B, _ = cell.plane
    return (-A, -B)


def _boundary_side_direction(poly: LatticePolygon, a, b):
    """CCW direction of the polygon side containing segment (a, b)."""
    for p, q in poly.sides():
        if (
            lattice.orient(p, q, a) == 0
            and lattice.orient(p, q, b) == 0
            and dot(sub(a, p), sub(a, q)) <= 0
            and dot(sub(b, p), sub(b, q)) <= 0
        ):
            d, _ = primitive(sub(q, p))
            return d
    raise AssertionError("boundary edge not on any polygon side")


def _build_line_curve(f: TropicalPolynomial) -> TropicalCurve:
    col = _collinear_envelope(f)
    if col is None:  # single monomial: empty zero set
        return TropicalCurve(f, None, [], [], [], [], [])
    d, _, hull = col
    lines = []
    for (t1, e1, c1), (t2, e2, c2) in zip(hull, hull[1:]):
        # the two monomials tie where (e2 - e1) . (x, y) = c1 - c2
        delta = sub(e2, e1)
        k = t2 - t1
        val = Fraction(c1 - c2, k)
        den = d[0] * d[0] + d[1] * d[1]
        anchor = (Fraction(val * d[0], den), Fraction(val * d[1], den))
        lines.append(
            FullLine(
                anchor=anchor,
                direction=lattice.perp(d),
                weight=k,
                dual=(e1, e2),
            )
        )
    return TropicalCurve(f, None, [], [], [], lines, [])


def build_curve(f: TropicalPolynomial) -> TropicalCurve:
    """Corner locus of f with duality data.

    Supports spanning only a line produce curves made of parallel full
    lines; a single monomial produces the empty curve.  Everything else is
    built from the dual subdivision.
    """
    try:
        sub_ = dual_subdivision(f)
    except DegenerateNewtonPolygon:
        return _build_line_curve(f)

    vertices = [
        CurveVertex(_vertex_of_cell(c), i, c.kind) for i, c in enumerate(sub_.cells)
    ]
    positions = [v.position for v in vertices]
    assert len(set(positions)) == len(positions), "coincident dual vertices"

    segments = []
    rays = []
    for edge in sub_.edges:
        (a, b) = edge.endpoints
        w = edge.length
        if edge.on_boundary:
            (ci,) = edge.cells
            d = _boundary_side_direction(sub_.polygon, a, b)
            rays.append(Ray(ci, (d[1], -d[0]), w, (a, b)))
        else:
            ci, cj = edge.cells
            dvec = (
                positions[cj][0] - positions[ci][0],
                positions[cj][1] - positions[ci][1],
            )
            num0 = dvec[0].numerator * dvec[1].denominator
            num1 = dvec[1].numerator * dvec[0].denominator
            d, _ = primitive((num0, num1))
            assert dot(d, sub(b, a)) == 0, "segment not orthogonal to dual edge"
            segments.append(Segment(ci, cj, d, w, (a, b)))

    g_points = set(sub_.interior_vertices())
    faces = [Face(v, v in g_points) for v in sub_.vertices]
    return TropicalCurve(f, sub_, vertices, segments, rays, [], faces)


def check_balancing(C: TropicalCurve) -> bool:
    """Weighted primitive directions sum to zero at every vertex."""
    for i in range(len(C.vertices)):
        total = (0, 0)
        for s in C.segments:
            if s.v0 == i:
                total = add(total, lattice.scale(s.weight, s.direction))
            elif s.v1 == i:
                total = add(total, lattice.scale(-s.weight, s.direction))
        for r in C.rays:
            if r.vertex == i:
                total = add(total, lattice.scale(r.weight, r.direction))
        if total != (0, 0):
            return False
    return True


def is_simple(C: TropicalCurve) -> bool:
    """Every dual cell is a triangle or a parallelogram."""
    if C.subdivision is None:
        raise DegenerateNewtonPolygon("line curves have no 2-D subdivision")
    return all(c.kind in ("triangle", "parallelogram") for c in C.subdivision.cells)


def _require_simple(C):
    if not is_simple(C):
        raise NotSimple("dual subdivision has a cell that is neither a "
                        "triangle nor a parallelogram")


def nodes(C: TropicalCurve):
    """One node per parallelogram cell of the dual subdivision."""
    _require_simple(C)
    out = []
    for i, cell in enumerate(C.subdivision.cells):
        if cell.kind != "parallelogram":
            continue
        m = 2 * cell.area()
        assert m.denominator == 1
        out.append(
            Node(
                position=C.vertices[i].position,
                cell=cell.vertices,
                multiplicity=int(m),
                hyperbolic=m == 2,
            )
        )
    return out


# ---------------------------------------------------------------------------
# normalization: trivalent graph of maximal straight chains


@dataclass
class Chain:
    """Maximal straight run of curve pieces, merged through node crossings.

    ends are ('v', site) for a trivalent site or ('inf',) past a ray;
    pieces are ('s', i) / ('r', i) references into the curve.
    """

    ends: "tuple[tuple, tuple]"
    pieces: "list[tuple[str, int]]"
    direction: "tuple[int, int]"  # primitive, oriented from ends[0] to ends[1]
    weight: int
    node_passes: "list[int]"  # node site indices, ordered along direction


@dataclass
class NormalizationGraph:
    curve: TropicalCurve
    sites: "list[int]"  # curve vertex indices that are trivalent
    node_sites: "list[int]"  # curve vertex indices that are nodes
    edges: "list[Chain]"  # both ends at sites
    leaves: "list[Chain]"  # ends[0] at a site, ends[1] at infinity
    free_lines: "list[Chain]"  # both ends at infinity

    @property
    def vertex_count(self):
        return len(self.sites)

    @property
    def puncture_count(self):
        return len(self.leaves) + 2 * len(self.free_lines)

    def components(self):
        """Connected components as lists of site indices; free lines count
        as separate components and are returned as empty lists."""
        parent = {s: s for s in self.sites}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ch in self.edges:
            a = find(ch.ends[0][1])
            b = find(ch.ends[1][1])
            parent[a] = b
        groups = {}
        for s in self.sites:
            groups.setdefault(find(s), []).append(s)
        comps = sorted(groups.values())
        comps.extend([[] for _ in self.free_lines])
        return comps

    @property
    def betti_one(self):
        return len(self.edges) - len(self.sites) + len(
            [c for c in self.components() if c]
        )


def _piece_endpoints(C, piece):
    kind, i = piece
    if kind == "s":
        s = C.segments[i]
        return (("v", s.v0), ("v", s.v1))
    r = C.rays[i]
    return (("v", r.vertex), ("inf",))


def _piece_weight(C, piece):
    kind, i = piece
    return C.segments[i].weight if kind == "s" else C.rays[i].weight


def _piece_dual(C, piece):
    kind, i = piece
    return C.segments[i].dual if kind == "s" else C.rays[i].dual


def normalize(C: TropicalCurve) -> NormalizationGraph:
    """Separate the two straight strands at every node.

    Opposite sides of a node's dual parallelogram pair the incident pieces
    into straight pass-throughs; maximal chains of paired pieces become the
    edges, leaves, and free lines of a trivalent graph.
    """
    _require_simple(C)
    sub_ = C.subdivision
    sites = [i for i, v in enumerate(C.vertices) if v.kind == "triangle"]
    node_sites = [i for i, v in enumerate(C.vertices) if v.kind == "parallelogram"]

    pieces = [("s", i) for i in range(len(C.segments))] + [
        ("r", i) for i in range(len(C.rays))
    ]
    by_dual = {}
    for p in pieces:
        key = tuple(sorted(_piece_dual(C, p)))
        by_dual[key] = p

    # at each node, pair the pieces dual to opposite parallelogram sides
    partner = {}  # (node_site, piece) -> piece
    for ni in node_sites:
        cell = sub_.cells[C.vertices[ni].cell]
        v = cell.vertices
        for k in range(2):
            e1 = tuple(sorted((v[k], v[k + 1])))
            e2 = tuple(sorted((v[k + 2], v[(k + 3) % 4])))
            p1, p2 = by_dual[e1], by_dual[e2]
            assert _piece_weight(C, p1) == _piece_weight(C, p2)
            partner[(ni, p1)] = p2
            partner[(ni, p2)] = p1

    def other_end(piece, end):
        a, b = _piece_endpoints(C, piece)
        return b if end == a else a

    def walk(piece, start_end):
        """Follow pass-through pairings from start_end through the piece."""
        chain = [piece]
        end = other_end(piece, start_end)
        passes = []
        while end[0] == "v" and C.vertices[end[1]].kind == "parallelogram":
            passes.append(end[1])
            piece = partner[(end[1], piece)]
            chain.append(piece)
            end = other_end(piece, end)
        return chain, end, passes

    consumed = set()
    edges, leaves, free_lines = [], [], []

    def chain_geometry(chain_pieces, start_end, end_end):
        w = _piece_weight(C, chain_pieces[0])
        if start_end[0] == "v":
            p0 = C.vertices[start_end[1]].position
            if end_end[0] == "v":
                p1 = C.vertices[end_end[1]].position
                dvec = (p1[0] - p0[0], p1[1] - p0[1])
                d, _ = primitive(
                    (
                        dvec[0].numerator * dvec[1].denominator,
                        dvec[1].numerator * dvec[0].denominator,
                    )
                )
            else:
                kind, i = chain_pieces[-1]
                d = C.rays[i].direction
            return d, w
        kind, i = chain_pieces[0]
        return lattice.neg(C.rays[i].direction), w

    for p in pieces:
        if p in consumed:
            continue
        a, b = _piece_endpoints(C, p)
        start = None
        if a[0] == "inf" or (a[0] == "v" and C.vertices[a[1]].kind == "triangle"):
            start = a
        elif b[0] == "inf" or (b[0] == "v" and C.vertices[b[1]].kind == "triangle"):
            start = b
        if start is None:
            continue  # interior piece of a chain; reached from an end
        chain, end, passes = walk(p, start)
        consumed.update(chain)
        d, w = chain_geometry(chain, start, end)
        if start[0] == "v" and end[0] == "v":
            ch = Chain((start, end), chain, d, w, passes)
            edges.append(ch)
        elif start[0] == "v":
            leaves.append(Chain((start, end), chain, d, w, passes))
        elif end[0] == "v":
            rev = list(reversed(chain))
            leaves.append(
                Chain((end, start), rev, lattice.neg(d), w, list(reversed(passes)))
            )
        else:
            free_lines.append(Chain((start, end), chain, d, w, passes))

    assert len(consumed) == len(pieces), "chain walk missed a piece"

    # dedupe edges found from both ends
    seen = set()
    uniq_edges = []
    for ch in edges:
        key = frozenset(ch.pieces)
        if key in seen:
            continue
        seen.add(key)
        uniq_edges.append(ch)
    n = NormalizationGraph(C, sites, node_sites, uniq_edges, leaves, free_lines)
    for s in sites:
        deg = sum(
            (ch.ends[0][1] == s) + (ch.ends[1][1] == s) for ch in uniq_edges
        ) + sum(ch.ends[0][1] == s for ch in leaves)
        assert deg == 3, f"site {s} is {deg}-valent after normalization"
    return n


def is_irreducible(C: TropicalCurve) -> bool:
    """True iff the normalization is connected."""
    N = normalize(C)
    return len(N.components()) == 1


@dataclass
class CurveInvariants:
    betti_one: int
    leaves: int
    vertex_count: int
    log_gauss_degree: int
    components: int


def curve_invariants(C: TropicalCurve) -> CurveInvariants:
    """Counts of the normalization; the degree of the tropical logarithmic
    Gauss map equals the number of trivalent vertices."""
    N = normalize(C)
    return CurveInvariants(
        betti_one=N.betti_one,
        leaves=N.puncture_count,
        vertex_count=N.vertex_count,
        log_gauss_degree=N.vertex_count,
        components=len(N.components()),
    )


def bounded_faces(C: TropicalCurve) -> int:
    """Number of bounded complement components: faces whose dominating
    exponent is interior to the Newton polygon."""
    return sum(1 for f in C.faces if f.bounded)


def image_cycle_rank(C: TropicalCurve) -> int:
    """First Betti number of the embedded curve (nodes NOT separated);
    an independent oracle for bounded_faces."""
    if C.subdivision is None:
        return 0
    verts = set(range(len(C.vertices)))
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    e = 0
    for s in C.segments:
        e += 1
        parent[find(s.v0)] = find(s.v1)
    comps = len({find(v) for v in verts})
    return e - len(verts) + comps
