"""Unit tests for the model coordinate, Fatou charts and the Exp projection."""

import cmath
import math

import numpy as np
import pytest

from src.cfrac import RotationNumber
from src.core.errors import AbelResidualExceededError
from src.fatou import ModelCoordinate, SectorKind, build_chart, cut_log, exp_inverse, exp_map, sector
from src.maps import PolynomialMap


class TestExp:
    """Tests for Exp and its fundamental-strip inverse."""

    def test_critical_value(self):
        """Exp(0) is the critical value -4/27 of the quadratic class."""
        assert abs(exp_map(0) + 4 / 27) < 1e-15
        assert abs(exp_map(1.0) + 4 / 27) < 1e-15

    @pytest.mark.parametrize("z", [0.3 + 0.2j, -0.01j, 1e-4 + 0j, -2 - 5j])
    def test_inverse(self, z):
        zeta = exp_inverse(z)
        assert 0.5 <= zeta.real < 1.5
        assert abs(exp_map(zeta) - z) < 1e-12 * max(1.0, abs(z))

    def test_small_z_has_large_imaginary_part(self):
        assert exp_inverse(1e-8).imag > exp_inverse(1e-2).imag > 0

    def test_zero(self):
        with pytest.raises(ValueError):
            exp_inverse(0)


class TestModelCoordinate:
    """Tests for the branch-cut logarithm and the model coordinate."""

    @pytest.mark.parametrize("cut", [0.0, 1.0, -2.5, math.pi])
    def test_cut_log(self, cut):
        for x in (1 + 0.5j, -1 + 0.1j, 0.3 - 2j):
            value = cut_log(x, cut)
            assert abs(cmath.exp(value) - x) < 1e-14
            assert cut < value.imag <= cut + 2 * math.pi

    def test_derivative(self):
        m = ModelCoordinate(sigma=0.05 + 0.01j, alpha=0.05, log_mu=complex(-0.01, -2 * math.pi * 0.05))
        z, h = 0.3 + 0.4j, 1e-6
        numeric = (m(z + h) - m(z - h)) / (2 * h)
        assert abs(numeric - m.deriv(z)) < 1e-5 * abs(m.deriv(z))

    def test_inverse_from_nearby_seed(self):
        m = ModelCoordinate(sigma=0.05 + 0.01j, alpha=0.05, log_mu=complex(-0.01, -2 * math.pi * 0.05))
        z = 0.3 + 0.4j
        assert abs(m.inverse(m(z), seed=z * (1 + 1e-3)) - z) < 1e-10


class TestChart:
    """Tests for Fatou charts of the Inou-Shishikura quadratic."""

    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            build_chart(PolynomialMap.quad_is(0.2), 0.2)

    @pytest.mark.slow
    def test_chart_of_high_type_rotation(self):
        """alpha = [0; 12, 1, 1, ...] gives a chart with Phi(c_g) = 0 and Phi(g) = Phi + 1."""
        alpha = RotationNumber((0, 12), (1,))
        fmap = PolynomialMap.quad_is(alpha)
        chart = build_chart(fmap, float(alpha), validation_sample_size=30)

        assert abs(chart.phi(chart.c_g)) < 1e-12
        assert chart.validation.abel_median < 1e-3
        assert abs(chart.phi(chart.critical_value) - 1.0) < 1e-2
        assert chart.k_estimate >= 0

        w = 2.0 + 0.5j
        z = chart.phi_inverse(w)
        assert abs(chart.phi(z) - w) < 1e-9

    @pytest.mark.slow
    def test_sector_edges(self):
        alpha = RotationNumber((0, 12), (1,))
        chart = build_chart(PolynomialMap.quad_is(alpha), float(alpha), validation_sample_size=20)
        C = sector(chart, SectorKind.C, points=16)
        assert C.edge_error < 1e-6
        assert len(C.boundary) == 64
        assert C.to_dict()["kind"] == "C"
        frame = C.to_frame()
        assert list(frame.columns) == ["kind", "k", "re", "im"]
        assert np.isfinite(frame[["re", "im"]].to_numpy()).all()

    @pytest.mark.slow
    def test_tight_holomorphy_tolerance_rejects_chart(self):
        alpha = RotationNumber((0, 12), (1,))
        with pytest.raises(AbelResidualExceededError, match="holomorphic"):
            build_chart(PolynomialMap.quad_is(alpha), float(alpha), validation_sample_size=10,
                        holomorphy_tolerance=0.0)

    @pytest.mark.slow
    def test_non_holomorphic_coordinate_fails_validation(self):
        """A coordinate that solves the Abel equation but is not holomorphic is rejected."""
        alpha = RotationNumber((0, 12), (1,))
        chart = build_chart(PolynomialMap.quad_is(alpha), float(alpha), validation_sample_size=20)
        assert chart.validation.holomorphy_defect < chart.holomorphy_tolerance
        assert chart.validation.window_shift < 0.1

        good = chart._raw
        # periodic in Phi, so Phi(g(z)) = Phi(z) + 1 still holds
        chart._raw = lambda z, middle=None: good(z, middle) + 0.5 * np.cos(2 * np.pi * good(z, middle).real)
        chart.validation = chart.validate(20, seed=1)

        assert chart.validation.abel_median < 1e-3
        assert chart.validation.holomorphy_defect > 0.05
        with pytest.raises(AbelResidualExceededError, match="holomorphic"):
            chart.check()
