import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropicurve.errors import DegenerateNewtonPolygon, ParseError
from tropicurve.lattice import area, polygon_from_points
from tropicurve.polynomial import (
    TropicalPolynomial,
    canonicalize,
    contributing_support,
    dual_subdivision,
    evaluate,
    newton_polygon,
    parse_polynomial,
    tropical_polynomial,
    tropical_product,
)

LINE = tropical_polynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0})


def honeycomb_terms(d):
    return {
        (a, b): -(a * a + a * b + b * b)
        for a in range(d + 1)
        for b in range(d + 1 - a)
    }


rationals = st.fractions(
    min_value=-20, max_value=20, max_denominator=8
)


def random_poly(rng, d=4, n=None):
    pts = [(a, b) for a in range(d + 1) for b in range(d + 1 - a)]
    rng.shuffle(pts)
    n = n or rng.randint(3, len(pts))
    chosen = pts[:n]
    return tropical_polynomial(
        {e: Fraction(rng.randint(-60, 60), rng.randint(1, 6)) for e in chosen}
    )


class TestEvaluate:
    def test_line_at_origin(self):
        assert evaluate(LINE, (0, 0)) == 0

    def test_line_generic(self):
        assert evaluate(LINE, (2, 1)) == 2

    @given(
        st.dictionaries(
            st.tuples(st.integers(0, 4), st.integers(0, 4)),
            rationals,
            min_size=1,
            max_size=8,
        ),
        st.tuples(rationals, rationals),
    )
    def test_matches_term_by_term_maximum(self, terms, p):
        f = tropical_polynomial(terms)
        brute = max(c + a * p[0] + b * p[1] for (a, b), c in f.items)
        assert evaluate(f, p) == brute


class TestNormalization:
    def test_translated_support_touches_axes(self):
        f = tropical_polynomial({(2, 3): 0, (3, 3): 1, (2, 5): 2})
        assert min(a for a, _ in f.support) == 0
        assert min(b for _, b in f.support) == 0

    def test_empty_support_rejected(self):
        with pytest.raises(ParseError):
            tropical_polynomial({})


class TestNewtonPolygon:
    def test_line(self):
        assert newton_polygon(LINE).vertices == ((0, 0), (1, 0), (0, 1))

    def test_full_cubic_support(self):
        f = tropical_polynomial(honeycomb_terms(3))
        assert set(newton_polygon(f).vertices) == {(0, 0), (3, 0), (0, 3)}

    def test_interior_points_do_not_change_hull(self):
        f = tropical_polynomial({(0, 0): 0, (3, 0): 0, (0, 3): 0, (1, 1): 5})
        assert set(newton_polygon(f).vertices) == {(0, 0), (3, 0), (0, 3)}


class TestDualSubdivision:
    def test_line_single_cell(self):
        sub = dual_subdivision(LINE)
        assert len(sub.cells) == 1
        assert sub.cells[0].kind == "triangle"
        assert sub.cells[0].vertices == ((0, 0), (1, 0), (0, 1))

    def test_honeycomb_cubic_unimodular_triangulation(self):
        sub = dual_subdivision(tropical_polynomial(honeycomb_terms(3)))
        assert len(sub.cells) == 9
        assert all(c.kind == "triangle" for c in sub.cells)
        assert all(c.area() == Fraction(1, 2) for c in sub.cells)
        # every support point is a vertex of some cell
        assert set(sub.vertices) == set(honeycomb_terms(3))

    def test_degenerate_support_raises(self):
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (2, 0): -10})
        with pytest.raises(DegenerateNewtonPolygon):
            dual_subdivision(f)

    def test_flat_lift_merges_cells(self):
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 0})
        sub = dual_subdivision(f)
        assert len(sub.cells) == 1
        assert sub.cells[0].kind == "parallelogram"

    def test_boundary_midpoint_contact_declassifies_triangle(self):
        # with a flat lift the middle of the bottom edge stays in contact
        # with the single face, so the cell is not counted as a triangle
        f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (2, 0): 0, (0, 1): 0})
        sub = dual_subdivision(f)
        assert len(sub.cells) == 1
        assert sub.cells[0].kind == "other"

    @pytest.mark.parametrize("seed", range(12))
    def test_cell_areas_tile_newton_polygon(self, seed):
        rng = random.Random(seed)
        f = random_poly(rng)
        try:
            sub = dual_subdivision(f)
        except DegenerateNewtonPolygon:
            return
        assert sum(c.area() for c in sub.cells) == area(sub.polygon)
        for e in sub.edges:
            assert len(e.cells) in (1, 2)


class TestBreakpointConvention:
    """The 1-D forcing example: support {0, 1, 2} on the x-axis with
    coefficients (0, 0, -10) tropically reads max(0, x, 2x - 10); the middle
    monomial wins for 0 < x < 10, so all three support points contribute and
    the induced subdivision of the segment is {[0,1], [1,2]}."""

    f = tropical_polynomial({(0, 0): 0, (1, 0): 0, (2, 0): -10})

    def test_breakpoints(self):
        from tropicurve.polynomial import argmax_terms

        assert argmax_terms(self.f, (-1, 0)) == [(0, 0)]
        assert argmax_terms(self.f, (5, 0)) == [(1, 0)]
        assert argmax_terms(self.f, (20, 0)) == [(2, 0)]
        assert set(argmax_terms(self.f, (0, 0))) == {(0, 0), (1, 0)}
        assert set(argmax_terms(self.f, (10, 0))) == {(1, 0), (2, 0)}

    def test_middle_point_contributes(self):
        assert contributing_support(self.f) == {(0, 0), (1, 0), (2, 0)}

    def test_canonicalize_keeps_the_middle_coefficient(self):
        assert canonicalize(self.f) == self.f


class TestCanonicalize:
    def test_low_interior_coefficient_raised(self):
        f = tropical_polynomial({(0, 0): 0, (2, 0): 0, (0, 2): 0, (1, 0): -50})
        g = canonicalize(f)
        assert g.coefficient((1, 0)) == 0
        rng = random.Random(1)
        for _ in range(100):
            p = (Fraction(rng.randint(-40, 40), 3), Fraction(rng.randint(-40, 40), 3))
            assert evaluate(f, p) == evaluate(g, p)

    def test_already_canonical_identity(self):
        f = tropical_polynomial(honeycomb_terms(2))
        assert canonicalize(f) == f

    def test_single_monomial_identity(self):
        f = tropical_polynomial({(3, 4): Fraction(5, 7)})
        assert canonicalize(f) == f

    @pytest.mark.parametrize("seed", range(8))
    def test_evaluation_preserved_on_grid(self, seed):
        rng = random.Random(seed)
        f = random_poly(rng)
        g = canonicalize(f)
        for _ in range(60):
            p = (
                Fraction(rng.randint(-50, 50), rng.randint(1, 4)),
                Fraction(rng.randint(-50, 50), rng.randint(1, 4)),
            )
            assert evaluate(f, p) == evaluate(g, p)


class TestProduct:
    def test_union_of_lines_support(self):
        g = tropical_polynomial({(0, 0): 0, (1, 0): -3, (0, 1): -1})
        h = tropical_product(LINE, g)
        assert set(h.support) == {
            (0, 0),
            (1, 0),
            (0, 1),
            (2, 0),
            (1, 1),
            (0, 2),
        }


class TestParse:
    def test_line(self):
        assert parse_polynomial("0 + x + y") == LINE

    def test_coefficients_and_powers(self):
        f = parse_polynomial("1/2 * x^2 * y + -3 * y^2 + 0.25")
        assert f.terms == {
            (2, 1): Fraction(1, 2),
            (0, 2): Fraction(-3),
            (0, 0): Fraction(1, 4),
        }

    def test_decimals_are_exact(self):
        f = parse_polynomial("0.1 * x + 0")
        assert f.coefficient((1, 0)) == Fraction(1, 10)

    def test_laurent_exponents_normalize(self):
        f = parse_polynomial("0 * x^-2 + 1 * y^-1 + 0 * x")
        assert min(a for a, _ in f.support) == 0
        assert min(b for _, b in f.support) == 0

    def test_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse_polynomial("z^2 + w")

    def test_json_roundtrip(self):
        f = parse_polynomial("1/2 * x^2 * y + -3 * y^2 + 0.25")
        assert TropicalPolynomial.from_json(f.to_json()) == f
