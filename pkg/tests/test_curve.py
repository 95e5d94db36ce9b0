import random
from fractions import Fraction

import pytest

from tropicurve.curve import (
    bounded_faces,
    build_curve,
    check_balancing,
    curve_invariants,
    image_cycle_rank,
    is_irreducible,
    is_simple,
    nodes,
    normalize,
)
from tropicurve.errors import NotSimple
from tropicurve.lattice import area
from tropicurve.polynomial import (
    dual_subdivision,
    tropical_polynomial,
    tropical_product,
)

LINE = tropical_polynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0})


def honeycomb(d):
    return tropical_polynomial(
        {
            (a, b): -(a * a + a * b + b * b)
            for a in range(d + 1)
            for b in range(d + 1 - a)
        }
    )


def random_poly(rng, d=4):
    pts = [(a, b) for a in range(d + 1) for b in range(d + 1 - a)]
    rng.shuffle(pts)
    chosen = pts[: rng.randint(3, len(pts))]
    return tropical_polynomial(
        {e: Fraction(rng.randint(-60, 60), rng.randint(1, 6)) for e in chosen}
    )


class TestTropicalLine:
    def test_structure(self):
        C = build_curve(LINE)
        assert len(C.vertices) == 1
        assert C.vertices[0].position == (0, 0)
        assert len(C.segments) == 0
        dirs = sorted(r.direction for r in C.rays)
        assert dirs == [(-1, 0), (0, -1), (1, 1)]
        assert all(r.weight == 1 for r in C.rays)

    def test_balanced(self):
        assert check_balancing(build_curve(LINE))

    def test_perturbed_direction_unbalances(self):
        C = build_curve(LINE)
        C.rays[0].direction = (1, 0) if C.rays[0].direction != (1, 0) else (0, 1)
        assert not check_balancing(C)


class TestTwoMonomialLine:
    def test_weight_two_vertical_line(self):
        f = tropical_polynomial({(0, 0): 0, (2, 0): 0})
        C = build_curve(f)
        assert not C.vertices and not C.segments and not C.rays
        assert len(C.lines) == 1
        ln = C.lines[0]
        assert ln.weight == 2
        assert ln.direction in ((0, 1), (0, -1))
        assert ln.anchor == (0, 0)

    def test_breakpoint_spacing(self):
        # max(0, x, 2x-10): two parallel vertical lines at x = 0 and x = 10
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (2, 0): -10})
        C = build_curve(f)
        assert len(C.lines) == 2
        xs = sorted(ln.anchor[0] for ln in C.lines)
        assert xs == [0, 10]
        assert all(ln.weight == 1 for ln in C.lines)


class TestHoneycombCubic:
    C = build_curve(honeycomb(3))

    def test_counts(self):
        assert len(self.C.vertices) == 9
        assert len(self.C.rays) == 9
        assert len(self.C.segments) == 9
        assert bounded_faces(self.C) == 1

    def test_simple_and_balanced(self):
        assert is_simple(self.C)
        assert check_balancing(self.C)

    def test_duality_counts(self):
        sub = self.C.subdivision
        assert len(self.C.vertices) == len(sub.cells)
        assert len(self.C.segments) + len(self.C.rays) == len(sub.edges)

    def test_ray_directions_orthogonal_to_duals(self):
        from tropicurve.lattice import dot, sub as vsub

        for r in self.C.rays:
            a, b = r.dual
            assert dot(r.direction, vsub(b, a)) == 0

    def test_normalization(self):
        N = normalize(self.C)
        assert N.vertex_count == 9
        assert N.betti_one == 1
        assert N.puncture_count == 9

    def test_irreducible(self):
        assert is_irreducible(self.C)

    def test_no_nodes(self):
        assert nodes(self.C) == []

    def test_invariants_identity(self):
        inv = curve_invariants(self.C)
        assert inv.vertex_count == 9
        assert inv.log_gauss_degree == 9
        assert inv.vertex_count == 2 * inv.betti_one - 2 + inv.leaves


class TestSimplicity:
    def test_trapezoid_cell_not_simple(self):
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (2, 0): 0, (0, 1): 0})
        assert not is_simple(build_curve(f))

    def test_flat_square_is_simple(self):
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 0})
        assert is_simple(build_curve(f))

    def test_not_simple_guard(self):
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (2, 0): 0, (0, 1): 0})
        C = build_curve(f)
        with pytest.raises(NotSimple):
            nodes(C)
        with pytest.raises(NotSimple):
            normalize(C)


class TestNodes:
    def test_flat_square_single_hyperbolic_node(self):
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 0})
        C = build_curve(f)
        (n,) = nodes(C)
        assert n.multiplicity == 2
        assert n.hyperbolic

    def test_multiplicity_from_parallelogram_area(self):
        # two monomial pairs with a common difference produce a wide
        # parallelogram: conv{(0,0),(2,0),(2,2),(4,2)} has area 4
        f = tropical_polynomial({(0, 0): 0, (2, 0): 0, (2, 2): 0, (4, 2): 0})
        C = build_curve(f)
        (n,) = nodes(C)
        assert n.multiplicity == 8
        assert not n.hyperbolic

    def test_smooth_curve_empty(self):
        assert nodes(build_curve(honeycomb(2))) == []


class TestReducibility:
    def test_union_of_two_lines(self):
        g = tropical_polynomial({(0, 0): 0, (1, 0): -3, (0, 1): -1})
        f = tropical_product(LINE, g)
        C = build_curve(f)
        assert is_simple(C)
        (n,) = nodes(C)
        assert n.hyperbolic
        N = normalize(C)
        assert len(N.components()) == 2
        assert not is_irreducible(C)

    def test_line_is_irreducible(self):
        assert is_irreducible(build_curve(LINE))


class TestHoneycombFamily:
    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_euler_counts(self, d):
        inv = curve_invariants(build_curve(honeycomb(d)))
        assert inv.vertex_count == d * d
        assert inv.betti_one == (d - 1) * (d - 2) // 2
        assert inv.leaves == 3 * d
        assert inv.vertex_count == 2 * inv.betti_one - 2 + inv.leaves

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_bounded_faces_equal_interior_points(self, d):
        C = build_curve(honeycomb(d))
        assert bounded_faces(C) == (d - 1) * (d - 2) // 2
        assert bounded_faces(C) == image_cycle_rank(C)


class TestFuzz:
    @pytest.mark.parametrize("seed", range(30))
    def test_balancing_and_duality(self, seed):
        rng = random.Random(seed)
        f = random_poly(rng)
        try:
            C = build_curve(f)
        except Exception as exc:  # degenerate supports are fine to skip
            from tropicurve.errors import DegenerateNewtonPolygon

            assert isinstance(exc, DegenerateNewtonPolygon)
            return
        if C.subdivision is None:
            return
        assert check_balancing(C)
        sub = C.subdivision
        assert len(C.vertices) == len(sub.cells)
        assert len(C.segments) + len(C.rays) == len(sub.edges)
        assert sum(c.area() for c in sub.cells) == area(sub.polygon)
        assert bounded_faces(C) <= len(sub.interior_vertices())

    @pytest.mark.parametrize("seed", range(20))
    def test_simple_curve_structure(self, seed):
        rng = random.Random(seed + 1000)
        f = random_poly(rng)
        try:
            C = build_curve(f)
        except Exception:
            return
        if C.subdivision is None or not is_simple(C):
            return
        N = normalize(C)
        inv = curve_invariants(C)
        # per component the trivalent Euler identity holds; summed over
        # components: V = 2 b1 - 2 #components + n
        assert inv.vertex_count == 2 * inv.betti_one - 2 * inv.components + inv.leaves
        assert len(nodes(C)) == sum(
            1 for c in C.subdivision.cells if c.kind == "parallelogram"
        )
        assert inv.vertex_count == sum(
            1 for c in C.subdivision.cells if c.kind == "triangle"
        )
        # faces of the image: cycle rank oracle counts holes created by
        # nodes as well
        assert bounded_faces(C) == image_cycle_rank(C)
