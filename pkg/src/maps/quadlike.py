"""Quadratic-like restriction of the perturbed quadratic family."""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np
from loguru import logger

from .families import Family, PolynomialMap
from .roots import cluster_roots, count_preimages_in, polynomial_roots
from ..core.errors import SearchFailureError


@dataclass
class QuadraticLikeRadius:
    """Disk radii R < R' = 2R with their containment margins."""
    R: float
    R_prime: float
    margin_R: float
    margin_R_prime: float
    doublings: int

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "R": self.R,
            "R_prime": self.R_prime,
            "margin_R": self.margin_R,
            "margin_R_prime": self.margin_R_prime,
            "doublings": self.doublings,
        }


@dataclass
class QuadraticLikeCheck:
    """Sampled verification for one perturbed map."""
    radius: QuadraticLikeRadius
    counts: List[int] = field(default_factory=list)
    boundary_clear: bool = False
    boundary_min_modulus: float = 0.0
    v_margin: float = 0.0
    critical_value_inside: bool = False

    @property
    def all_two(self) -> bool:
        return bool(self.counts) and all(c == 2 for c in self.counts)

    @property
    def passed(self) -> bool:
        return self.all_two and self.v_margin > 0 and self.boundary_clear and self.critical_value_inside

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            **self.radius.to_dict(),
            "samples": len(self.counts),
            "count_min": min(self.counts) if self.counts else 0,
            "count_max": max(self.counts) if self.counts else 0,
            "all_two": self.all_two,
            "boundary_clear": self.boundary_clear,
            "boundary_min_modulus": self.boundary_min_modulus,
            "v_margin": self.v_margin,
            "critical_value_inside": self.critical_value_inside,
            "passed": self.passed,
        }


def _circle(R: float, m: int) -> np.ndarray:
    return R * np.exp(2j * np.pi * np.arange(m) / m)


def _preimage_sup(fmap: PolynomialMap, R: float, m: int) -> float:
    """max |z| over solutions of fmap(z) = w, |w| = R."""
    sup = 0.0
    for w in _circle(R, m):
        c = np.array(fmap.effective_coeffs, dtype=complex)
        c[0] -= w
        sup = max(sup, float(np.max(np.abs(polynomial_roots(c)))))
    return sup


def quadratic_like_radius(quad: PolynomialMap, r_start: float = 3.0, m: int = 360,
                          max_doublings: int = 12) -> QuadraticLikeRadius:
    """
    Doubling search for R with R' = 2R.

    Accepts R once D_R holds the finite critical value of the quadratic and the
    preimages of both D_R and D_R' lie compactly inside D_R.

    Raises:
        SearchFailureError: no admissible R within max_doublings
    """
    if quad.family != Family.QUAD_BC:
        raise ValueError("radius search runs on the unperturbed quadratic")
    cv = max(abs(v) for _, v in quad.critical_points())
    R = float(r_start)
    for k in range(max_doublings + 1):
        margin_R = R - _preimage_sup(quad, R, m)
        margin_Rp = R - _preimage_sup(quad, 2 * R, m)
        logger.debug(f"R={R:g}: margin(R)={margin_R:.4g}, margin(2R)={margin_Rp:.4g}")
        if cv < R and margin_R > 0 and margin_Rp > 0:
            return QuadraticLikeRadius(R, 2 * R, margin_R, margin_Rp, k)
        R *= 2
    raise SearchFailureError("No quadratic-like radius found", {"r_start": r_start, "doublings": max_doublings})


def verify_quadratic_like(fmap: PolynomialMap, radius: QuadraticLikeRadius, samples: int,
                          rng: np.random.Generator, boundary_points: int = 360) -> QuadraticLikeCheck:
    """
    Count preimages of sampled w in D_R inside V = f^-1(D_R) ∩ U_R'.

    U_R' is the preimage of D_R' under the unperturbed quadratic.
    """
    quad = PolynomialMap.quad_bc(fmap.rotation)
    R, Rp = radius.R, radius.R_prime

    def in_v(z: complex) -> bool:
        return abs(quad.eval(z)) < Rp and abs(fmap.eval(z)) < R

    check = QuadraticLikeCheck(radius=radius)
    r = R * np.sqrt(rng.random(samples))
    t = 2 * np.pi * rng.random(samples)
    for w in r * np.exp(1j * t):
        check.counts.append(count_preimages_in(fmap, complex(w), in_v))

    # boundary of U_R' is the quadratic preimage of |w| = R'
    ring = []
    for w in _circle(Rp, boundary_points):
        c = np.array(quad.effective_coeffs, dtype=complex)
        c[0] -= w
        ring.extend(polynomial_roots(c))
    ring_values = np.abs(fmap.eval(np.array(ring)))
    check.boundary_min_modulus = float(np.min(ring_values))
    check.boundary_clear = check.boundary_min_modulus >= R

    # boundary of V: preimages of |w| = R inside U_R'
    sup = 0.0
    for w in _circle(R, boundary_points):
        c = np.array(fmap.effective_coeffs, dtype=complex)
        c[0] -= w
        for cl in cluster_roots(polynomial_roots(c)):
            z = complex(np.mean(cl))
            if abs(quad.eval(z)) < Rp:
                sup = max(sup, abs(z))
    check.v_margin = R - sup

    check.critical_value_inside = any(
        abs(quad.eval(cp)) < Rp and abs(cv) < R for cp, cv in fmap.critical_points()
    )
    logger.info(
        f"{fmap.label()}: counts in [{min(check.counts)}, {max(check.counts)}], "
        f"V margin {check.v_margin:.4g}, boundary clear {check.boundary_clear}"
    )
    return check
