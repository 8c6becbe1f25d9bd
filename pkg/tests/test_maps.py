"""Unit tests for the polynomial families, orbits, roots and the domain V."""

import cmath
import math

import numpy as np
import pytest

from src.cfrac import RotationNumber
from src.core.errors import DegenerateParameterError
from src.maps import (
    IS_DOMAIN,
    Family,
    PolynomialMap,
    cluster_roots,
    count_preimages_in,
    is_in_V,
    orbit,
    polynomial_roots,
    quadratic_like_radius,
    segment_distance,
    verify_quadratic_like,
)
from src.maps.roots import _polish


GOLDEN = RotationNumber.golden()


class TestFamilies:
    """Tests for coefficients, critical points and fixed points."""

    def test_quadratic_coefficients(self):
        f = PolynomialMap.quad_bc(GOLDEN)
        lam = cmath.exp(2j * math.pi * float(GOLDEN))
        assert abs(f.lam - lam) < 1e-15
        assert np.allclose(f.coeffs, [0, lam, 1])
        assert abs(f(0.3j) - (lam * 0.3j + (0.3j) ** 2)) < 1e-15

    def test_cubic_critical_points(self):
        """The cubic has critical points -1 and -1/3 with v = -4 lambda / 27."""
        f = PolynomialMap.cubic_siegel(GOLDEN)
        (c1, v1), (c2, v2) = f.critical_points()
        assert c1 == -1 and v1 == 0
        assert abs(c2 + 1 / 3) < 1e-15
        assert abs(v2 + 4 * f.lam / 27) < 1e-15
        assert abs(f.deriv(c2)) < 1e-14
        assert abs(f(c2) - v2) < 1e-14

    def test_quad_is_critical_value(self):
        f = PolynomialMap.quad_is(0.05)
        (c, v), = f.critical_points()
        assert abs(v + 4 / 27) < 1e-14
        assert abs(f(c) - v) < 1e-14

    def test_perturbed_critical_points(self):
        f = PolynomialMap.perturbed_quad(GOLDEN, 1e-3, 3)
        points = f.critical_points()
        assert len(points) == 2
        for c, v in points:
            assert abs(f.deriv(c)) < 1e-9
            assert abs(f(c) - v) < 1e-9

    @pytest.mark.parametrize("family", [Family.QUAD_BC, Family.CUBIC_SIEGEL, Family.QUAD_IS])
    def test_fixed_points(self, family):
        f = PolynomialMap(family, 0.3, degree=3 if family == Family.CUBIC_SIEGEL else 2)
        for p in f.nonzero_fixed_points():
            assert abs(f(p) - p) < 1e-12

    @pytest.mark.parametrize("family", [Family.QUAD_BC, Family.CUBIC_SIEGEL, Family.QUAD_IS, Family.PERTURBED_QUAD])
    def test_deriv_matches_central_difference(self, family):
        degree = 3 if family in (Family.CUBIC_SIEGEL, Family.PERTURBED_QUAD) else 2
        f = PolynomialMap(family, GOLDEN, epsilon=1e-2, degree=degree)
        z = np.array([0.3 + 0.1j, -0.7j, -0.5 + 0.4j])
        h = 1e-6
        numeric = (f(z + h) - f(z - h)) / (2 * h)
        assert np.max(np.abs(f.deriv(z) - numeric)) < 1e-7

    def test_critical_identities_random_parameters(self):
        rng = np.random.default_rng(11)
        for theta in rng.random(20):
            cubic = PolynomialMap.cubic_siegel(float(theta))
            assert abs(cubic(-1.0)) < 1e-12
            assert abs(cubic(-1 / 3) + 4 / 27 * cubic.lam) < 1e-12
            for c, v in cubic.critical_points():
                assert abs(cubic.deriv(c)) < 1e-12
            quad = PolynomialMap.quad_is(float(theta))
            (c, v), = quad.critical_points()
            assert abs(quad.deriv(c)) < 1e-12
            assert abs(quad(c) + 4 / 27) < 1e-12

    @pytest.mark.parametrize("alpha,tol", [(1e-3, 0.05), (1e-4, 0.005)])
    def test_sigma_asymptotics(self, alpha, tol):
        """sigma_alpha behaves like -32 pi i alpha / 27 as alpha -> 0."""
        f = PolynomialMap.quad_is(alpha)
        sigma = f.small_fixed_point()
        lam = cmath.exp(2j * math.pi * alpha)
        assert abs(sigma - 16 / 27 * (1 - lam) / lam ** 2) < 1e-15
        assert abs(sigma * 27 / (-32j * math.pi * alpha) - 1) < tol

    def test_degenerate_rotation(self):
        """A rotation of 0 collides the fixed point with 0."""
        with pytest.raises(DegenerateParameterError):
            PolynomialMap.quad_bc(0.0).nonzero_fixed_points()

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            PolynomialMap.perturbed_quad(GOLDEN, 0.1, 2)
        with pytest.raises(ValueError):
            PolynomialMap(Family.QUAD_BC)

    def test_square(self):
        f = PolynomialMap.square()
        assert f.rotation is None
        assert f.critical_points() == [(0j, 0j)]
        assert f(2) == 4

    def test_dict_roundtrip(self):
        f = PolynomialMap.perturbed_quad(GOLDEN, 0.01, 4)
        g = PolynomialMap.from_dict(f.to_dict())
        assert g.family == Family.PERTURBED_QUAD
        assert g.degree == 4
        assert np.allclose(g.coeffs, f.coeffs)
        assert g.label() == f.label()


class TestRoots:
    """Tests for the simultaneous root finder."""

    def test_unit_roots(self):
        roots = polynomial_roots([-1, 0, 0, 1])
        assert len(roots) == 3
        assert np.allclose(sorted(np.abs(roots)), [1, 1, 1])
        assert np.allclose(np.prod(roots), 1)

    def test_zero_roots_split_off(self):
        roots = polynomial_roots([0, 0, -3, 1])
        assert sorted(roots, key=abs) == pytest.approx([0, 0, 3])

    def test_invalid_degree(self):
        with pytest.raises(ValueError):
            polynomial_roots([1])
        with pytest.raises(ValueError):
            polynomial_roots([1] * 10)

    def test_known_roots(self):
        rng = np.random.default_rng(3)
        expected = (0.5 + 0.5 * rng.random(5)) * np.exp(2j * np.pi * (np.arange(5) + 0.3 * rng.random(5)) / 5)
        roots = polynomial_roots(np.poly(expected)[::-1])
        for r in expected:
            assert np.min(np.abs(roots - r)) < 1e-10

    def test_polish_refines_nearby_roots(self):
        expected = np.array([0.5, -0.25 + 0.75j, -1.5j])
        c = np.poly(expected)[::-1].astype(complex)
        polished = _polish(c, expected + 1e-5)
        assert np.max(np.abs(polished - expected)) < 1e-12

    @pytest.mark.parametrize("family", [Family.QUAD_BC, Family.CUBIC_SIEGEL, Family.QUAD_IS])
    def test_fixed_points_match_closed_form(self, family):
        """Roots of p(z) - z are 0 and the closed-form nonzero fixed points."""
        f = PolynomialMap(family, 0.3, degree=3 if family == Family.CUBIC_SIEGEL else 2)
        c = f.effective_coeffs.copy()
        c[1] -= 1
        roots = polynomial_roots(c)
        expected = [0j] + f.nonzero_fixed_points()
        assert len(roots) == len(expected)
        for p in expected:
            assert np.min(np.abs(roots - p)) < 1e-10

    def test_cluster_roots(self):
        clusters = cluster_roots(np.array([1.0, 1.0 + 1e-9, -2.0]))
        assert sorted(len(c) for c in clusters) == [1, 2]

    def test_count_preimages(self):
        """z^2 = 1/4 has two solutions in the unit disk, one with Re z > 0."""
        f = PolynomialMap.square()
        assert count_preimages_in(f, 0.25, lambda z: abs(z) < 1) == 2
        assert count_preimages_in(f, 0.25, lambda z: z.real > 0) == 1


class TestOrbit:
    """Tests for orbits and distances to curves."""

    def test_escape(self):
        rec = orbit(PolynomialMap.square(), 2.0, 50)
        assert rec.escaped
        assert rec.escape_index == 2
        assert rec.points == [2, 4, 16]

    def test_bounded(self):
        rec = orbit(PolynomialMap.square(), 0.5, 5)
        assert not rec.escaped
        assert len(rec.points) == 6

    def test_invalid(self):
        with pytest.raises(ValueError):
            orbit(PolynomialMap.square(), 0.5, 0)
        with pytest.raises(ValueError):
            orbit(PolynomialMap.square(), 0.5, 5, R_escape=1.5)

    def test_segment_distance(self):
        square = np.array([0, 1, 1 + 1j, 1j])
        d = segment_distance(np.array([0.5 + 2j, 0.5 + 0.5j]), square)
        assert d == pytest.approx([1.0, 0.5])


class TestDomain:
    """Tests for membership in V."""

    def test_points(self):
        assert is_in_V(0j)
        assert is_in_V(0.01)
        assert not is_in_V(100.0)

    def test_vectorized(self):
        out = is_in_V(np.array([0.01, 100.0]))
        assert list(out) == [True, False]

    def test_critical_points_of_cubic(self):
        """-1/3 has the preimage 5 + sqrt(24) outside E; -1 only has the double preimage 1."""
        assert is_in_V(-1 / 3)
        assert not is_in_V(-1.0)

    def test_agrees_with_winding(self):
        rng = np.random.default_rng(0)
        boundary = IS_DOMAIN.boundary()
        pad_x = 0.1 * np.ptp(boundary.real)
        pad_y = 0.1 * np.ptp(boundary.imag)
        pts = rng.uniform(boundary.real.min() - pad_x, boundary.real.max() + pad_x, 100) + 1j * rng.uniform(
            boundary.imag.min() - pad_y, boundary.imag.max() + pad_y, 100
        )
        pts = pts[segment_distance(pts, boundary) > 1e-2]
        assert len(pts) > 80
        inside = IS_DOMAIN.contains(pts)
        assert np.array_equal(inside, IS_DOMAIN.contains_by_winding(pts))
        assert 0 < inside.sum() < len(pts)

    def test_critical_orbit_stays_in_V(self):
        f = PolynomialMap.cubic_siegel(GOLDEN)
        rec = orbit(f, -1 / 3, 10 ** 4, restrict_to_V=True)
        assert rec.left_domain is None
        assert not rec.escaped
        assert len(rec.points) == 10 ** 4 + 1
        assert orbit(f, -1.0, 10, restrict_to_V=True).left_domain == 0


class TestQuadraticLike:
    """Tests for the quadratic-like restriction search."""

    def test_radius(self):
        radius = quadratic_like_radius(PolynomialMap.quad_bc(GOLDEN), m=90)
        assert radius.R_prime == 2 * radius.R
        assert radius.margin_R > 0 and radius.margin_R_prime > 0

    def test_radius_needs_quadratic(self):
        with pytest.raises(ValueError):
            quadratic_like_radius(PolynomialMap.cubic_siegel(GOLDEN))

    def test_small_perturbation_has_two_preimages(self):
        """Every sampled w in D_R has exactly two preimages in V."""
        radius = quadratic_like_radius(PolynomialMap.quad_bc(GOLDEN), m=90)
        f = PolynomialMap.perturbed_quad(GOLDEN, 1e-3, 3)
        check = verify_quadratic_like(f, radius, 20, np.random.default_rng(0), boundary_points=90)
        assert check.all_two
        assert check.to_dict()["samples"] == 20
