"""Perturbed Fatou coordinates of near-parabolic maps."""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from .model import ModelCoordinate
from ..core.errors import (
    AbelResidualExceededError,
    DegenerateParameterError,
    NewtonDivergenceError,
    NoConvergenceError,
    NoSigmaError,
    OutsidePetalError,
)
from ..maps.roots import polynomial_roots


ALPHA_STAR = 0.1
SIGMA_TOL = 1e-12
ESCAPE = 10.0
# accepted range for one step of the model coordinate
STEP_LO, STEP_HI = 0.5, 1.5


def _window(s: float) -> float:
    return math.cos(0.5 * math.pi * s) ** 2 if abs(s) < 1.0 else 0.0


@dataclass
class ChartValidation:
    """Statistics of a chart over its validation sample."""
    sample_size: int = 0
    evaluated: int = 0
    abel_median: float = math.inf
    abel_p95: float = math.inf
    abel_max: float = math.inf
    roundtrip_max: float = math.inf
    holomorphy_defect: float = math.inf
    window_shift: float = math.inf

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "sample_size": self.sample_size,
            "evaluated": self.evaluated,
            "abel_median": self.abel_median,
            "abel_p95": self.abel_p95,
            "abel_max": self.abel_max,
            "roundtrip_max": self.roundtrip_max,
            "holomorphy_defect": self.holomorphy_defect,
            "window_shift": self.window_shift,
        }


@dataclass
class FatouChart:
    """
    Fatou coordinate Phi of g on its petal, normalized by Phi(c_g) = 0.

    Phi(z) averages w(g^j z) - j over the iterates crossing the middle of the
    petal, weighted by a cos^2 window in Re w. Shifting z along its orbit shifts
    the window terms by one index, so Phi(g(z)) = Phi(z) + 1 up to rounding.
    """
    map: Any
    alpha: float
    sigma: complex
    c_g: complex
    model: ModelCoordinate
    middle: float
    n_span: int
    normalization_offset: complex = 0j
    validation: ChartValidation = field(default_factory=ChartValidation)
    tolerance: float = 1e-3
    holomorphy_tolerance: float = 0.05

    @property
    def k_estimate(self) -> int:
        """Integer k with Re-extent of the petal close to 1/alpha - k."""
        return int(round(1.0 / self.alpha - self.n_span))

    @property
    def model_params(self) -> Dict[str, Any]:
        return {
            "log_mu": [self.model.log_mu.real, self.model.log_mu.imag],
            "middle": self.middle,
            "n_span": self.n_span,
        }

    @property
    def critical_value(self) -> complex:
        return complex(self.map.eval(self.c_g))

    # evaluation

    def _preimage(self, z: complex, target: complex) -> complex:
        c = np.array(self.map.effective_coeffs, dtype=complex)
        c[0] -= z
        roots = polynomial_roots(c)
        return complex(min(roots, key=lambda r: abs(self.model(r) - target)))

    def _raw(self, z: complex, middle: Optional[float] = None) -> complex:
        middle = self.middle if middle is None else middle
        w = self.model(z)
        direction = 1 if w.real <= middle else -1
        max_steps = int(math.ceil(1.0 / self.alpha)) + 4
        num, den = 0j, 0.0
        zj, j = complex(z), 0
        for _ in range(max_steps):
            s = w.real - middle
            weight = _window(s)
            if weight > 0:
                num += weight * (w - direction * j)
                den += weight
            if direction * s >= 1.0:
                return num / den
            if direction > 0:
                nxt = complex(self.map.eval(zj))
            else:
                nxt = self._preimage(zj, w - 1)
            w_next = self.model(nxt)
            step = direction * (w_next.real - w.real)
            if not (STEP_LO <= step <= STEP_HI) or abs(nxt) > ESCAPE:
                raise OutsidePetalError("Orbit leaves the petal before the chart window", {"z": z, "step": j})
            zj, w, j = nxt, w_next, j + 1
        raise OutsidePetalError("Orbit does not reach the chart window", {"z": z})

    def phi(self, z: complex) -> complex:
        """
        Raises:
            OutsidePetalError: z is outside the validated petal
        """
        return self._raw(complex(z)) - self.normalization_offset

    def _jacobian(self, z: complex, f0: complex, h: float) -> np.ndarray:
        fx = (self.phi(z + h) - f0) / h
        fy = (self.phi(z + 1j * h) - f0) / h
        return np.array([[fx.real, fy.real], [fx.imag, fy.imag]])

    def _newton(self, w: complex, z: complex, tol: float, max_iter: int) -> complex:
        f = self.phi(z) - w
        for _ in range(max_iter):
            if abs(f) <= tol * max(1.0, abs(w)):
                return z
            h = 1e-7 * max(abs(z), 1e-3)
            jac = self._jacobian(z, f + w, h)
            try:
                dx, dy = np.linalg.solve(jac, [-f.real, -f.imag])
            except np.linalg.LinAlgError as e:
                raise NewtonDivergenceError("Singular Jacobian", {"w": w, "z": z}) from e
            step = complex(dx, dy)
            t = 1.0
            while t > 1e-4:
                try:
                    trial = z + t * step
                    f_trial = self.phi(trial) - w
                    if abs(f_trial) < abs(f):
                        z, f = trial, f_trial
                        break
                except OutsidePetalError:
                    pass
                t *= 0.5
            else:
                break
        if abs(f) <= tol * max(1.0, abs(w)):
            return z
        raise NewtonDivergenceError("Inverse Fatou coordinate did not converge", {"w": w, "residual": abs(f)})

    def model_seed(self, w: complex) -> complex:
        """Model prediction for Phi^-1(w)."""
        return self.model.inverse(w + self.model(self.c_g))

    def phi_inverse(self, w: complex, seed: Optional[complex] = None, tol: float = 1e-12,
                    max_iter: int = 40) -> complex:
        """
        z with Phi(z) = w, by Newton on (Re, Im) with a finite-difference Jacobian.

        Failing from the seed, the target is approached from Phi(c_g) = 0 in
        halving steps.

        Raises:
            NewtonDivergenceError: continuation failed
        """
        w = complex(w)
        try:
            z0 = self.model_seed(w) if seed is None else complex(seed)
            return self._newton(w, z0, tol, max_iter)
        except (NewtonDivergenceError, OutsidePetalError):
            logger.debug(f"Newton from model seed failed at w={w:.6g}; continuing from c_g")
        return self._continuation(w, self.c_g, 0j, tol, max_iter, depth=0)

    def _continuation(self, w: complex, z_a: complex, w_a: complex, tol: float, max_iter: int,
                      depth: int) -> complex:
        if depth > 6:
            raise NewtonDivergenceError("Continuation for the inverse Fatou coordinate failed", {"w": w})
        pieces = 4
        z = z_a
        for i in range(1, pieces + 1):
            target = w_a + (w - w_a) * i / pieces
            try:
                z = self._newton(target, z, tol, max_iter)
            except (NewtonDivergenceError, OutsidePetalError):
                prev = w_a + (w - w_a) * (i - 1) / pieces
                z = self._continuation(target, z, prev, tol, max_iter, depth + 1)
        return z

    def abel_residual(self, z: complex) -> float:
        return abs(self.phi(self.map.eval(z)) - self.phi(z) - 1.0)

    def holomorphy_defect(self, z: complex, h: float = 1e-6) -> float:
        """|dPhi/dzbar| / |dPhi/dz| by central differences."""
        dx = (self.phi(z + h) - self.phi(z - h)) / (2 * h)
        dy = (self.phi(z + 1j * h) - self.phi(z - 1j * h)) / (2 * h)
        dz = 0.5 * (dx - 1j * dy)
        dzbar = 0.5 * (dx + 1j * dy)
        return abs(dzbar) / abs(dz)

    @property
    def shifted_middle(self) -> float:
        """Centre of a second window, a quarter of the petal before the chart window."""
        return max(self.middle - 0.25 * self.n_span, self.model(self.c_g).real + 1.0)

    def window_shift(self, z: complex) -> float:
        """
        |Phi(z) - Phi'(z)| where Phi' averages over the second window.

        Both windows normalize at c_g. Their averages run over different
        iterates, so they agree only when the terms w(g^j z) - j settle to a
        common limit along the orbit.
        """
        shifted = self.shifted_middle
        other = self._raw(complex(z), shifted) - self._raw(self.c_g, shifted)
        return abs(self.phi(z) - other)

    def check(self) -> None:
        """
        Raises:
            AbelResidualExceededError: the validation statistics exceed the chart tolerances
        """
        v = self.validation
        if v.evaluated == 0 or v.abel_median > self.tolerance:
            raise AbelResidualExceededError(
                "Abel residual above tolerance", {"median": v.abel_median, "evaluated": v.evaluated}
            )
        if not v.holomorphy_defect <= self.holomorphy_tolerance:
            raise AbelResidualExceededError(
                "Fatou coordinate is not holomorphic to tolerance",
                {"holomorphy_defect": v.holomorphy_defect, "tolerance": self.holomorphy_tolerance},
            )

    def sample_petal(self, rng: np.random.Generator, size: int, im_halfwidth: float = 2.0) -> List[complex]:
        """Points whose model coordinate is uniform over the petal interior."""
        x_c = self.model(self.c_g)
        re = x_c.real + 0.5 + rng.random(size) * max(self.n_span - 2.0, 0.5)
        im = x_c.imag + im_halfwidth * (2 * rng.random(size) - 1)
        points = []
        for w in re + 1j * im:
            try:
                points.append(self.model.inverse(complex(w)))
            except NewtonDivergenceError:
                continue
        return points

    def validate(self, size: int, seed: int = 0) -> ChartValidation:
        rng = np.random.default_rng(seed)
        residuals, roundtrip, defect, shift = [], [], [], []
        for z in self.sample_petal(rng, size):
            try:
                residuals.append(self.abel_residual(z))
                defect.append(self.holomorphy_defect(z, 1e-6 * max(abs(z), 1e-3)))
                if len(roundtrip) < 20:
                    roundtrip.append(abs(self.phi_inverse(self.phi(z)) - z))
                    shift.append(self.window_shift(z))
            except (OutsidePetalError, NewtonDivergenceError):
                continue
        v = ChartValidation(sample_size=size, evaluated=len(residuals))
        if residuals:
            v.abel_median = float(np.median(residuals))
            v.abel_p95 = float(np.percentile(residuals, 95))
            v.abel_max = float(np.max(residuals))
            v.holomorphy_defect = float(np.median(defect))
        if roundtrip:
            v.roundtrip_max = float(np.max(roundtrip))
        if shift:
            v.window_shift = float(np.median(shift))
        return v

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "map": self.map.to_dict(),
            "sigma": [self.sigma.real, self.sigma.imag],
            "alpha": self.alpha,
            "c_g": [self.c_g.real, self.c_g.imag],
            "normalization_offset": [self.normalization_offset.real, self.normalization_offset.imag],
            "model_params": self.model_params,
            "k_estimate": self.k_estimate,
            "tolerance": self.tolerance,
            "holomorphy_tolerance": self.holomorphy_tolerance,
            "validation": self.validation.to_dict(),
        }

    def save_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2))
        return path


def _locate_sigma(fmap) -> complex:
    try:
        sigma = complex(fmap.small_fixed_point())
    except (DegenerateParameterError, NoConvergenceError) as e:
        raise NoSigmaError("Nonzero fixed point near 0 not found", {"map": fmap.label()}) from e
    # polish with Newton on g(z) - z
    for _ in range(5):
        d = complex(fmap.deriv(sigma)) - 1.0
        if d == 0:
            break
        sigma -= (complex(fmap.eval(sigma)) - sigma) / d
    if not np.isfinite(sigma) or abs(complex(fmap.eval(sigma)) - sigma) >= SIGMA_TOL or sigma == 0:
        raise NoSigmaError("Fixed point residual too large", {"map": fmap.label(), "sigma": sigma})
    return sigma


def _petal_critical_point(fmap) -> complex:
    # the critical point whose orbit crosses the gate; skip those mapped onto 0
    pts = [c for c, v in fmap.critical_points() if abs(v) > 1e-12]
    if not pts:
        raise NoSigmaError("No critical point with a nonzero value", {"map": fmap.label()})
    return complex(min(pts, key=abs))


def _critical_span(fmap, model: ModelCoordinate, c_g: complex, alpha: float) -> Tuple[int, float]:
    z, w = c_g, model(c_g)
    n = 0
    for _ in range(int(math.ceil(2.0 / alpha))):
        nxt = complex(fmap.eval(z))
        w_next = model(nxt)
        if not (STEP_LO <= w_next.real - w.real <= STEP_HI) or abs(nxt) > ESCAPE:
            break
        z, w, n = nxt, w_next, n + 1
    return n, w.real


def build_chart(fmap, alpha: float, validation_sample_size: int = 200, alpha_star: float = ALPHA_STAR,
                tolerance: float = 1e-3, seed: int = 0, holomorphy_tolerance: float = 0.05) -> FatouChart:
    """
    Fatou chart of a near-parabolic map with rotation alpha.

    Raises:
        NoSigmaError: the fixed point near 0 could not be located
        AbelResidualExceededError: validation median or holomorphy defect above tolerance
    """
    if not 0 < alpha < alpha_star:
        raise ValueError(f"alpha must lie in (0, {alpha_star})")
    sigma = _locate_sigma(fmap)
    mu = complex(fmap.deriv(sigma))
    model = ModelCoordinate(sigma=sigma, alpha=float(alpha), log_mu=complex(np.log(mu)))
    c_g = _petal_critical_point(fmap)
    n_span, _ = _critical_span(fmap, model, c_g, alpha)
    if n_span < 4:
        raise AbelResidualExceededError("Critical orbit does not cross the petal", {"n_span": n_span})
    middle = model(c_g).real + 0.5 * n_span

    chart = FatouChart(
        map=fmap, alpha=float(alpha), sigma=sigma, c_g=c_g, model=model,
        middle=middle, n_span=n_span, tolerance=tolerance, holomorphy_tolerance=holomorphy_tolerance,
    )
    chart.normalization_offset = chart._raw(c_g)
    chart.validation = chart.validate(validation_sample_size, seed)
    v = chart.validation
    logger.info(
        f"Fatou chart {fmap.label()}: n_span={n_span}, k={chart.k_estimate}, "
        f"abel median {v.abel_median:.3g}, p95 {v.abel_p95:.3g}, holomorphy {v.holomorphy_defect:.3g}, "
        f"window shift {v.window_shift:.3g} over {v.evaluated} points"
    )
    chart.check()
    return chart


def phi(chart: FatouChart, z: complex) -> complex:
    return chart.phi(z)


def phi_inverse(chart: FatouChart, w: complex) -> complex:
    return chart.phi_inverse(w)
