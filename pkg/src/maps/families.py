"""The polynomial families and their critical/fixed-point structure."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import mpmath
import numpy as np
from mpmath import mp, mpf

from ..cfrac.rotation import RotationNumber
from ..core.errors import DegenerateParameterError


class Family(str, Enum):
    """Polynomial family"""
    QUAD_BC = "quad_bc"              # e^{2 pi i t} z + z^2
    CUBIC_SIEGEL = "cubic_siegel"    # e^{2 pi i t} z (1 + z)^2
    QUAD_IS = "quad_is"              # e^{2 pi i a} z + (27/16) e^{4 pi i a} z^2
    PERTURBED_QUAD = "perturbed_quad"  # e^{2 pi i t} z + z^2 + eps z^d
    SQUARE = "square"                # z^2, calibration harness


Rotation = Union[RotationNumber, float, Fraction, mpf]

DEGENERATE_TOL = 1e-14


def _rotation_value(rotation: Rotation, precision_bits: int) -> mpf:
    with mp.workprec(precision_bits):
        if isinstance(rotation, RotationNumber):
            return +rotation.value
        if isinstance(rotation, Fraction):
            return mpf(rotation.numerator) / rotation.denominator
        return mpf(rotation)


@dataclass(frozen=True)
class PolynomialMap:
    """
    One member of the studied families.

    ``coeffs`` holds ascending complex coefficients (coeffs[k] multiplies z^k).
    The multiplier at 0 is computed once from the high-precision rotation value.
    """
    family: Family
    rotation: Optional[Rotation] = None
    epsilon: float = 0.0
    degree: int = 2
    precision_bits: int = 512
    theta: mpf = field(init=False, repr=False, compare=False)
    lam: complex = field(init=False, repr=False, compare=False)
    coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.family != Family.SQUARE and self.rotation is None:
            raise ValueError(f"{self.family.value} needs a rotation parameter")
        if self.family == Family.SQUARE:
            theta = mpf(0)
            lam = 0j
        else:
            theta = _rotation_value(self.rotation, self.precision_bits)
            with mp.workprec(self.precision_bits):
                lam = complex(mpmath.expjpi(2 * theta))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "coeffs", self._build_coeffs(lam))
        self.coeffs.setflags(write=False)

    def _build_coeffs(self, lam: complex) -> np.ndarray:
        if self.family == Family.QUAD_BC:
            return np.array([0, lam, 1], dtype=complex)
        if self.family == Family.CUBIC_SIEGEL:
            return np.array([0, lam, 2 * lam, lam], dtype=complex)
        if self.family == Family.QUAD_IS:
            with mp.workprec(self.precision_bits):
                lam2 = complex(mpmath.expjpi(4 * self.theta))
            return np.array([0, lam, 27.0 / 16.0 * lam2], dtype=complex)
        if self.family == Family.PERTURBED_QUAD:
            if self.degree < 3:
                raise ValueError("perturbation degree must be >= 3")
            c = np.zeros(self.degree + 1, dtype=complex)
            c[1], c[2], c[self.degree] = lam, 1.0, self.epsilon
            return c
        return np.array([0, 0, 1], dtype=complex)

    # constructors

    @classmethod
    def quad_bc(cls, theta: Rotation) -> "PolynomialMap":
        return cls(Family.QUAD_BC, theta)

    @classmethod
    def cubic_siegel(cls, theta: Rotation) -> "PolynomialMap":
        return cls(Family.CUBIC_SIEGEL, theta, degree=3)

    @classmethod
    def quad_is(cls, alpha: Rotation) -> "PolynomialMap":
        return cls(Family.QUAD_IS, alpha)

    @classmethod
    def perturbed_quad(cls, theta: Rotation, epsilon: float, degree: int) -> "PolynomialMap":
        return cls(Family.PERTURBED_QUAD, theta, epsilon=float(epsilon), degree=int(degree))

    @classmethod
    def square(cls) -> "PolynomialMap":
        return cls(Family.SQUARE)

    def with_rotation(self, rotation: Rotation) -> "PolynomialMap":
        """Same family and perturbation with another rotation parameter."""
        return PolynomialMap(self.family, rotation, self.epsilon, self.degree, self.precision_bits)

    # evaluation

    @property
    def effective_coeffs(self) -> np.ndarray:
        """Coefficients with vanishing top terms removed."""
        c = self.coeffs
        top = len(c) - 1
        while top > 0 and c[top] == 0:
            top -= 1
        return c[: top + 1]

    def eval(self, z):
        """Horner evaluation; accepts scalars and numpy arrays."""
        acc = np.zeros_like(z, dtype=complex) if isinstance(z, np.ndarray) else 0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def deriv(self, z):
        acc = np.zeros_like(z, dtype=complex) if isinstance(z, np.ndarray) else 0j
        n = len(self.coeffs) - 1
        for k in range(n, 0, -1):
            acc = acc * z + k * self.coeffs[k]
        return acc

    __call__ = eval

    def critical_points(self) -> List[Tuple[complex, complex]]:
        """Finite critical points with their values, sorted by real part."""
        lam = self.lam
        if self.family == Family.QUAD_BC:
            pts = [(-lam / 2, -lam * lam / 4)]
        elif self.family == Family.CUBIC_SIEGEL:
            pts = [(-1 + 0j, 0j), (-1 / 3 + 0j, -4 / 27 * lam)]
        elif self.family == Family.QUAD_IS:
            pts = [(-8 / 27 / lam, -4 / 27 + 0j)]
        elif self.family == Family.SQUARE:
            pts = [(0j, 0j)]
        else:
            from .roots import polynomial_roots
            d = self.effective_coeffs
            dc = np.array([k * d[k] for k in range(1, len(d))], dtype=complex)
            pts = [(c, self.eval(c)) for c in polynomial_roots(dc)]
        return sorted(pts, key=lambda p: (p[0].real, p[0].imag))

    def nonzero_fixed_points(self) -> List[complex]:
        """
        Finite fixed points other than 0.

        Raises:
            DegenerateParameterError: rotation parameter is 0 mod 1
        """
        if self.family == Family.SQUARE:
            return [1 + 0j]
        lam = self.lam
        if abs(1 - lam) < DEGENERATE_TOL:
            raise DegenerateParameterError(
                "Fixed point collides with 0", {"family": self.family.value, "theta": float(self.theta)}
            )
        if self.family == Family.QUAD_BC:
            return [1 - lam]
        if self.family == Family.CUBIC_SIEGEL:
            with mp.workprec(self.precision_bits):
                half = complex(mpmath.expjpi(-self.theta))
            return [half - 1, -half - 1]
        if self.family == Family.QUAD_IS:
            return [16 / 27 * (1 - lam) / (lam * lam)]
        from .roots import polynomial_roots
        d = self.effective_coeffs.copy()
        d[1] -= 1
        # p(z) - z = z * q(z)
        return list(polynomial_roots(d[1:]))

    def small_fixed_point(self) -> complex:
        """Nonzero fixed point closest to 0."""
        return min(self.nonzero_fixed_points(), key=abs)

    def to_dict(self) -> Dict[str, Any]:
        """Descriptor; rotation numbers are written as digit streams."""
        data: Dict[str, Any] = {"family": self.family.value}
        if isinstance(self.rotation, RotationNumber):
            data["theta"] = self.rotation.to_dict()
        elif self.rotation is not None:
            data["theta_value"] = float(self.rotation)
        if self.family == Family.PERTURBED_QUAD:
            data["epsilon"] = self.epsilon
            data["degree"] = self.degree
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], precision_bits: int = 512) -> "PolynomialMap":
        family = Family(data["family"])
        rotation: Optional[Rotation] = None
        if "theta" in data:
            rotation = RotationNumber.from_dict(data["theta"], precision_bits)
        elif "theta_value" in data:
            rotation = float(data["theta_value"])
        degree = int(data.get("degree", 3 if family == Family.CUBIC_SIEGEL else 2))
        return cls(family, rotation, float(data.get("epsilon", 0.0)), degree, precision_bits)

    def label(self) -> str:
        """Short descriptor string for report rows."""
        if self.rotation is None:
            return self.family.value
        rot = repr(self.rotation) if isinstance(self.rotation, RotationNumber) else f"{float(self.rotation):.12g}"
        if self.family == Family.PERTURBED_QUAD:
            return f"{self.family.value}({rot},eps={self.epsilon:g},d={self.degree})"
        return f"{self.family.value}({rot})"
