"""Harnack condition, real lifts, twists, and inflection patterns.

A real structure over a simple tropical curve assigns to each of the two
lifted copies (rails) of every edge and leaf a quadrant sign in (Z_2)^2.
The two rails of an element differ by weight * direction mod 2, and at a
trivalent vertex the ribbon boundary glues the left side of each outgoing
end to the right side of the next end counter-clockwise.  Twisting an edge
swaps its rail pairing at the head endpoint.  The curve is Harnack exactly
when this sign system is solvable with no twists, which is equivalent to a
mod-2 parity condition on the inflecting edges of every oriented loop.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from fractions import Fraction

from .curve import NormalizationGraph, TropicalCurve, is_irreducible, is_simple, normalize
from .errors import NotIrreducible, NotLiftable, NotSimple, TooManyCycles
from .lattice import cross, neg, scale

DEFAULT_MAX_CYCLES = 100_000


def _max_cycles(limit=None):
    if limit is not None:
        return limit
    env = os.environ.get("TROPICURVE_MAX_CYCLES")
    return int(env) if env else DEFAULT_MAX_CYCLES


@dataclass(frozen=True)
class OrientedLoop:
    """Cyclic sequence of oriented normalization edges.

    Each step is (edge index, +1/-1): +1 traverses the chain along its
    stored direction.  Straight node pass-throughs are already merged into
    the chains, so consecutive steps always meet at trivalent vertices.
    """

    steps: "tuple[tuple[int, int], ...]"

    def reversed(self):
        return OrientedLoop(tuple((e, -o) for e, o in reversed(self.steps)))


def _edge_endpoints(N, i):
    ch = N.edges[i]
    return ch.ends[0][1], ch.ends[1][1]


def enumerate_loops(N: NormalizationGraph, limit=None):
    """All simple cycles of the normalization, one orientation each.

    Exhaustive DFS; raises TooManyCycles past the limit (default 10^5,
    overridable via TROPICURVE_MAX_CYCLES).
    """
    limit = _max_cycles(limit)
    adj = {s: [] for s in N.sites}
    for i in range(len(N.edges)):
        a, b = _edge_endpoints(N, i)
        assert a != b, "self-loop in normalization"
        adj[a].append((b, i))
        adj[b].append((a, i))
    for s in adj:
        adj[s].sort()

    loops = []  # (site path, edge path) pairs
    order = {s: k for k, s in enumerate(sorted(N.sites))}

    def dfs(start, v, path_sites, path_edges, used):
        for w, ei in adj[v]:
            if ei in used:
                continue
            if w == start:
                if len(path_sites) >= 3 and order[path_sites[1]] < order[v]:
                    loops.append((path_sites, path_edges + [ei]))
                    if len(loops) > limit:
                        raise TooManyCycles(f"more than {limit} simple cycles")
                continue
            if order[w] <= order[start] or w in path_sites:
                continue
            dfs(start, w, path_sites + [w], path_edges + [ei], used | {ei})

    for s in sorted(N.sites, key=order.get):
        dfs(s, s, [s], [], frozenset())

    out = []
    for sites, edge_list in loops:
        steps = []
        for k, ei in enumerate(edge_list):
            a, b = _edge_endpoints(N, ei)
            steps.append((ei, 1 if sites[k] == a else -1))
            assert sites[k] in (a, b)
        out.append(OrientedLoop(tuple(steps)))
    return out


def _step_direction(N, step):
    ei, o = step
    d = N.edges[ei].direction
    return d if o == 1 else neg(d)


def gamma_set(N: NormalizationGraph, loop: OrientedLoop):
    """Steps of the loop at which the three consecutive edges bend in
    opposite senses (an inflection along the loop).  Invariant, as an
    unoriented edge set, under reversing the loop."""
    k = len(loop.steps)
    dirs = [_step_direction(N, s) for s in loop.steps]
    out = []
    for i in range(k):
        turn_in = cross(dirs[(i - 1) % k], dirs[i])
        turn_out = cross(dirs[i], dirs[(i + 1) % k])
        if turn_in * turn_out < 0:
            out.append(loop.steps[i])
    return frozenset(out)


def loop_condition(N: NormalizationGraph, loop: OrientedLoop) -> bool:
    """Mod-2 closing condition: the weighted directions of the inflecting
    edges must sum to zero in (Z_2)^2."""
    sx = sy = 0
    for ei, o in gamma_set(N, loop):
        ch = N.edges[ei]
        sx += ch.weight * ch.direction[0]
        sy += ch.weight * ch.direction[1]
    return sx % 2 == 0 and sy % 2 == 0


# ---------------------------------------------------------------------------
# rails, arcs, and the sign system


def _angle_key(d):
    """Total CCW order on nonzero integer directions starting at +x."""

    def cmp(a, b):
        def half(v):
            return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        c = cross(a, b)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return functools.cmp_to_key(cmp)(d)


def _element_dir(N, elem):
    kind, i = elem
    arr = {"e": N.edges, "l": N.leaves, "f": N.free_lines}[kind]
    return arr[i].direction


def _element_weight(N, elem):
    kind, i = elem
    arr = {"e": N.edges, "l": N.leaves, "f": N.free_lines}[kind]
    return arr[i].weight


def _parity_offset(N, elem):
    d = _element_dir(N, elem)
    w = _element_weight(N, elem)
    return ((w * d[0]) % 2, (w * d[1]) % 2)


def _site_ends(N):
    """For each trivalent site: the incident element-ends with outward
    directions, CCW-sorted."""
    ends = {s: [] for s in N.sites}
    for i, ch in enumerate(N.edges):
        ends[ch.ends[0][1]].append((("e", i), 0, ch.direction))
        ends[ch.ends[1][1]].append((("e", i), 1, neg(ch.direction)))
    for i, ch in enumerate(N.leaves):
        ends[ch.ends[0][1]].append((("l", i), 0, ch.direction))
    for s in ends:
        ends[s].sort(key=lambda t: _angle_key(t[2]))
        assert len(ends[s]) == 3
    return ends


def _outward_rails(elem, end_index, twisted):
    """(left rail, right rail) of an element-end, sides named with respect
    to the element's stored direction.

    At the head end the outward direction is reversed, so left and right
    swap; a twist swaps the pairing there once more.
    """
    if end_index == 0:
        return (elem + ("L",), elem + ("R",))
    if twisted:
        return (elem + ("L",), elem + ("R",))
    return (elem + ("R",), elem + ("L",))


def _arcs(N, twists):
    """Ribbon-boundary gluing: one arc per angular sector of each site,
    joining the left rail of an end to the right rail of the next end
    counter-clockwise.  Returns a dict (rail, end_index) -> (rail, end_index)."""

    def is_twisted(elem):
        return elem[0] == "e" and twists.get(elem[1], 1) == -1

    pairing = {}
    for s, ends in _site_ends(N).items():
        k = len(ends)
        for j in range(k):
            elem_a, end_a, _ = ends[j]
            elem_b, end_b, _ = ends[(j + 1) % k]
            la, _ = _outward_rails(elem_a, end_a, is_twisted(elem_a))
            _, rb = _outward_rails(elem_b, end_b, is_twisted(elem_b))
            pairing[(la, end_a)] = (rb, end_b)
            pairing[(rb, end_b)] = (la, end_a)
    return pairing


@dataclass
class Strand:
    """Maximal connected run of rails; carries one constant quadrant."""

    rails: "tuple[tuple[tuple, int], ...]"  # ((kind, index, side), orient)
    closed: bool
    quadrant: "tuple[int, int]"


@dataclass
class RealLift:
    curve: TropicalCurve
    normalization: NormalizationGraph
    twists: "dict[int, int]"
    base: "tuple[int, int]"
    strands: "list[Strand]"

    def rail_quadrant(self, rail):
        return self.strands[self._rail_index()[rail]].quadrant

    def _rail_index(self):
        if not hasattr(self, "_rail_map"):
            self._rail_map = {
                rail: si
                for si, st in enumerate(self.strands)
                for rail, _ in st.rails
            }
        return self._rail_map

    def element_rails(self, elem):
        return (elem + ("L",), elem + ("R",))


def _all_rails(N):
    rails = []
    for i in range(len(N.edges)):
        rails += [("e", i, "L"), ("e", i, "R")]
    for i in range(len(N.leaves)):
        rails += [("l", i, "L"), ("l", i, "R")]
    for i in range(len(N.free_lines)):
        rails += [("f", i, "L"), ("f", i, "R")]
    return rails


def _trace_strands(N, twists):
    """Split the rail set into maximal chains through the arc pairing.

    Open strands start and end at infinity (leaf or line rails); closed
    strands are cycles of edge rails.  Each rail is recorded with its
    traversal orientation relative to the chain's stored direction.
    """
    pairing = _arcs(N, twists)
    rails = _all_rails(N)
    visited = set()
    strands = []

    def walk(rail, slot):
        """Traverse from `rail`, entered through end `slot` (None = from
        the free/infinite end).  Returns (path, closed)."""
        start = (rail, slot)
        path = []
        while True:
            visited.add(rail)
            kind = rail[0]
            if kind == "e":
                orient = 1 if slot == 0 else -1
                exit_slot = 1 - slot
            elif kind == "l":
                # leaf chains are oriented site -> infinity
                orient, exit_slot = (-1, 0) if slot is None else (1, None)
            else:  # free line
                orient, exit_slot = 1, None
            path.append((rail, orient))
            if exit_slot is None:
                return path, False
            nxt = pairing[(rail, exit_slot)]
            if nxt == start:
                return path, True
            rail, slot = nxt

    # open strands first: start from every free end
    for rail in sorted(r for r in rails if r[0] in ("l", "f")):
        if rail in visited:
            continue
        path, _ = walk(rail, None)
        strands.append((tuple(path), False))

    # remaining rails form closed cycles
    for rail in sorted(r for r in rails if r not in visited):
        if rail in visited:
            continue
        path, closed = walk(rail, 0)
        assert closed, "edge rail chain did not close"
        strands.append((tuple(path), True))
    return strands


def _solve_signs(N, strands, base):
    """Assign one quadrant per strand subject to the per-element parity
    offsets; raises NotLiftable on an inconsistent cycle."""
    rail_strand = {}
    for si, (path, _) in enumerate(strands):
        for rail, _ in path:
            rail_strand[rail] = si

    graph = {si: [] for si in range(len(strands))}
    elems = [("e", i) for i in range(len(N.edges))]
    elems += [("l", i) for i in range(len(N.leaves))]
    elems += [("f", i) for i in range(len(N.free_lines))]
    for elem in elems:
        off = _parity_offset(N, elem)
        sL = rail_strand[elem + ("L",)]
        sR = rail_strand[elem + ("R",)]
        graph[sL].append((sR, off))
        graph[sR].append((sL, off))

    sign = {}
    for root in range(len(strands)):
        if root in sign:
            continue
        sign[root] = base
        stack = [root]
        while stack:
            u = stack.pop()
            for v, off in graph[u]:
                want = ((sign[u][0] + off[0]) % 2, (sign[u][1] + off[1]) % 2)
                if v in sign:
                    if sign[v] != want:
                        raise NotLiftable(
                            "sign system is inconsistent around a cycle"
                        )
                else:
                    sign[v] = want
                    stack.append(v)
    return sign


def build_lift(C: TropicalCurve, twists=None, base=(0, 0)) -> RealLift:
    """Solve the rail-sign system and return the real lift.

    `twists` maps normalization edge indices to +-1 (default all +1);
    `base` seeds the quadrant of the first strand of each component.
    Raises NotLiftable when the constraints are inconsistent; with no
    twists that happens exactly when the curve is not Harnack.
    """
    if not is_simple(C):
        raise NotSimple("lift needs a simple curve")
    N = normalize(C)
    twists = dict(twists or {})
    for ei, t in twists.items():
        if t not in (1, -1):
            raise ValueError("twists must be +-1")
        if not 0 <= ei < len(N.edges):
            raise ValueError(f"no edge {ei}")
    base = (int(base[0]) % 2, int(base[1]) % 2)
    strands = _trace_strands(N, twists)
    sign = _solve_signs(N, strands, base)
    return RealLift(
        curve=C,
        normalization=N,
        twists=twists,
        base=base,
        strands=[
            Strand(rails=path, closed=closed, quadrant=sign[si])
            for si, (path, closed) in enumerate(strands)
        ],
    )


def check_two_to_one(lift: RealLift) -> bool:
    """Every edge/leaf/line of the curve has exactly two lifted rails."""
    counts = {}
    for st in lift.strands:
        for (kind, i, side), _ in st.rails:
            counts[(kind, i, side)] = counts.get((kind, i, side), 0) + 1
    N = lift.normalization
    for elem in (
        [("e", i) for i in range(len(N.edges))]
        + [("l", i) for i in range(len(N.leaves))]
        + [("f", i) for i in range(len(N.free_lines))]
    ):
        total = sum(counts.get(elem + (s,), 0) for s in ("L", "R"))
        if total != 2:
            return False
    return True


def _lifted_direction(N, quadrant, rail, orient):
    d = _element_dir(N, rail[:2])
    v = d if orient == 1 else neg(d)
    return ((-1) ** quadrant[0] * v[0], (-1) ** quadrant[1] * v[1])


def inflection_patterns(lift: RealLift):
    """Non-convex triples of consecutive lifted elements.

    The lifted arcs over a strand live in one quadrant of the signed-log
    chart, where directions pick up the quadrant's coordinate sign flips.
    A triple is an inflection when the bends at its two junctions have
    opposite senses.
    """
    N = lift.normalization
    patterns = []
    for st in lift.strands:
        m = len(st.rails)
        if m < 3:
            continue
        dirs = [
            _lifted_direction(N, st.quadrant, rail, o) for rail, o in st.rails
        ]
        turns = []
        rng = range(m) if st.closed else range(m - 1)
        turns = {i: cross(dirs[i], dirs[(i + 1) % m]) for i in rng}
        mids = range(m) if st.closed else range(1, m - 1)
        for i in mids:
            t_in = turns.get((i - 1) % m)
            t_out = turns.get(i)
            if t_in is None or t_out is None:
                continue
            if t_in * t_out < 0:
                patterns.append(
                    (
                        st.rails[(i - 1) % m][0],
                        st.rails[i][0],
                        st.rails[(i + 1) % m][0],
                    )
                )
    return patterns


def is_harnack(C: TropicalCurve, oracle: str = "csp", max_cycles=None) -> bool:
    """Decide the Harnack condition for a simple irreducible curve.

    oracle="csp" solves the untwisted sign system (near-linear); the
    "loops" mode exhaustively checks the parity condition on every simple
    cycle.  The two must agree.
    """
    if not is_simple(C):
        raise NotSimple("Harnack condition needs a simple curve")
    if not is_irreducible(C):
        raise NotIrreducible("Harnack condition needs an irreducible curve")
    if oracle == "csp":
        try:
            build_lift(C)
            return True
        except NotLiftable:
            return False
    if oracle == "loops":
        N = normalize(C)
        loops = enumerate_loops(N, max_cycles)
        return all(loop_condition(N, lp) for lp in loops)
    raise ValueError(f"unknown oracle {oracle!r}")


def distinct_lifts(C: TropicalCurve, twists=None):
    """All distinct lifts over the four base quadrants, keyed by their rail
    sign tables."""
    seen = {}
    for base in ((0, 0), (0, 1), (1, 0), (1, 1)):
        lift = build_lift(C, twists, base)
        key = tuple(
            sorted(
                (rail, st.quadrant)
                for st in lift.strands
                for rail, _ in st.rails
            )
        )
        seen.setdefault(key, lift)
    return list(seen.values())


def node_crossings(lift: RealLift):
    """For each node: the two lifted branches meeting at the real crossing.

    The crossing happens in the unique quadrant shared between the lifts of
    the two chains through the node.  Returns a dict
    node_site -> (quadrant, [(rail, pass_position), (rail, pass_position)]).
    """
    N = lift.normalization
    per_node = {}
    arrays = {"e": N.edges, "l": N.leaves, "f": N.free_lines}
    for kind in ("e", "l", "f"):
        for i, ch in enumerate(arrays[kind]):
            for pos, nsite in enumerate(ch.node_passes):
                per_node.setdefault(nsite, []).append(((kind, i), pos))
    out = {}
    for nsite, passes in sorted(per_node.items()):
        assert len(passes) == 2, "node with wrong number of strands"
        (e1, p1), (e2, p2) = passes
        q1 = {s: lift.rail_quadrant(e1 + (s,)) for s in ("L", "R")}
        q2 = {s: lift.rail_quadrant(e2 + (s,)) for s in ("L", "R")}
        shared = [
            (q1[s1], e1 + (s1,), e2 + (s2,))
            for s1 in ("L", "R")
            for s2 in ("L", "R")
            if q1[s1] == q2[s2]
        ]
        assert len(shared) == 1, "crossing quadrant is not unique"
        q, r1, r2 = shared[0]
        out[nsite] = (q, [(r1, p1), (r2, p2)])
    return out
