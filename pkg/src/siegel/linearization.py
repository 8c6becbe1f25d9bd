"""Linearizing power series at an irrationally indifferent fixed point."""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import mpmath
import numpy as np
from loguru import logger
from mpmath import mp, mpf

from ..core.errors import ResonantDenominatorError, UnstableEstimateError


RESONANCE_FLOOR = 1e-300
PILOT_ORDER = 80
MIN_RADIUS_ORDER = 50
# rms of the log|b_k| regression, in nats
UNSTABLE_RESIDUAL = 3.0


@dataclass(frozen=True)
class RadiusEstimate:
    """Cauchy-Hadamard radius from the coefficient tail."""
    value: float
    residual: float
    unbounded: bool = False
    unstable: bool = False

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "radius": self.value,
            "residual": self.residual,
            "unbounded": self.unbounded,
            "unstable": self.unstable,
        }


@dataclass
class LinearizationSeries:
    """
    phi(z) = sum_k b_k z^k with b_1 = 1 and f(phi(z)) = phi(lambda z).

    Coefficients are held for the rescaled variable u = z / scale, so
    ``scaled[k] = b_k * scale**(k - 1)`` stays of order one up to the radius.
    """
    lam: complex
    scaled: np.ndarray
    scale: float
    map_coeffs: np.ndarray
    radius: RadiusEstimate
    label: str = ""

    @property
    def K(self) -> int:
        return len(self.scaled) - 1

    @property
    def radius_estimate(self) -> float:
        return self.radius.value

    @property
    def coeffs(self) -> np.ndarray:
        """Unscaled b_0..b_K."""
        k = np.arange(self.K + 1)
        with np.errstate(over="ignore"):
            return self.scaled * self.scale ** (1.0 - k)

    def __call__(self, z):
        """Evaluate phi by Horner in the scaled variable."""
        u = np.asarray(z, dtype=complex) / self.scale
        acc = np.zeros_like(u)
        for c in self.scaled[::-1]:
            acc = acc * u + c
        out = self.scale * acc
        return complex(out) if np.ndim(out) == 0 else out

    def tail_term(self, rho: float, last: int = 10) -> float:
        """Largest |b_k| rho^k among the last coefficients, relative to rho."""
        t = rho / self.scale
        k = np.arange(self.K - last + 1, self.K + 1)
        with np.errstate(over="ignore", divide="ignore"):
            terms = np.abs(self.scaled[k]) * np.exp(k * np.log(t)) * self.scale
        return float(np.max(terms)) / rho

    def functional_residual(self, rho: float, m: int = 256) -> float:
        """max |f(phi(z)) - phi(lambda z)| on |z| = rho."""
        z = rho * np.exp(2j * np.pi * np.arange(m) / m)
        w = self(z)
        fw = np.zeros_like(w)
        for c in self.map_coeffs[::-1]:
            fw = fw * w + c
        return float(np.max(np.abs(fw - self(self.lam * z))))

    def to_dict(self) -> Dict[str, Any]:
        """JSON form; ``coeffs`` are the scaled coefficients as [re, im] pairs."""
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "K": self.K,
            "scale": self.scale,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.scaled],
            "map_coeffs": [[float(c.real), float(c.imag)] for c in self.map_coeffs],
            "radius_estimate": self.radius.value,
            "radius": self.radius.to_dict(),
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LinearizationSeries":
        r = data["radius"]
        return cls(
            lam=complex(*data["lambda"]),
            scaled=np.array([complex(a, b) for a, b in data["coeffs"]]),
            scale=float(data["scale"]),
            map_coeffs=np.array([complex(a, b) for a, b in data["map_coeffs"]]),
            radius=RadiusEstimate(r["radius"], r["residual"], r["unbounded"], r["unstable"]),
            label=data.get("label", ""),
        )

    def save_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2))
        return path

    @classmethod
    def load_json(cls, path: Union[str, Path]) -> "LinearizationSeries":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _csum(values: np.ndarray) -> complex:
    # compensated sums of the real and imaginary parts
    return complex(math.fsum(values.real), math.fsum(values.imag))


def small_denominators(theta, K: int, precision_bits: int = 512) -> np.ndarray:
    """
    lambda^k - lambda for k = 0..K, with lambda^k taken from frac(k theta).

    Raises:
        ResonantDenominatorError: |lambda^k - lambda| < 1e-300 for some 2 <= k <= K
    """
    out = np.zeros(K + 1, dtype=complex)
    with mp.workprec(precision_bits):
        t = mpf(theta)
        lam = mpmath.expjpi(2 * t)
        for k in range(2, K + 1):
            kt = k * t
            d = mpmath.expjpi(2 * (kt - mpmath.floor(kt))) - lam
            if abs(d) < RESONANCE_FLOOR:
                raise ResonantDenominatorError(
                    "Small denominator vanished", {"k": k, "theta": mpmath.nstr(t, 20)}
                )
            out[k] = complex(d)
    return out


def _recursion(c: np.ndarray, denom: np.ndarray, K: int) -> np.ndarray:
    """b_k (lambda^k - lambda) = sum_{j>=2} c_j [z^k] phi^j, order by order."""
    d = len(c) - 1
    b = np.zeros(K + 1, dtype=complex)
    b[1] = 1.0
    if d < 2 or K < 2:
        return b
    # powers[j][k] = [z^k] phi^j
    powers = np.zeros((d + 1, K + 1), dtype=complex)
    powers[1, 1] = 1.0
    for j in range(2, d + 1):
        powers[j, j] = 1.0
    for k in range(2, K + 1):
        total = []
        for j in range(2, d + 1):
            if k > j:
                powers[j, k] = _csum(b[1:k] * powers[j - 1, k - 1:0:-1])
            if c[j] != 0:
                total.append(c[j] * powers[j, k])
        b[k] = _csum(np.array(total, dtype=complex)) / denom[k] if total else 0j
        powers[1, k] = b[k]
    return b


def estimate_radius(scaled: Sequence[complex], scale: float = 1.0) -> RadiusEstimate:
    """
    Tail-weighted regression of log|b_k| on k over the last K/2 coefficients.

    Exactly vanishing coefficients are skipped; a series with no nonzero
    coefficient past b_1 is flagged unbounded.
    """
    b = np.asarray(scaled, dtype=complex)
    K = len(b) - 1
    k = np.arange(max(2, K // 2), K + 1)
    mag = np.abs(b[k])
    keep = mag > 0
    if np.count_nonzero(np.abs(b[2:]) > 0) == 0:
        return RadiusEstimate(math.inf, 0.0, unbounded=True)
    if np.count_nonzero(keep) < 2:
        k = np.arange(2, K + 1)
        mag = np.abs(b[k])
        keep = mag > 0
    kk = k[keep].astype(float)
    y = np.log(mag[keep])
    w = kk / kk.max()
    slope, intercept = np.polyfit(kk, y, 1, w=np.sqrt(w))
    resid = y - (slope * kk + intercept)
    rms = float(np.sqrt(np.average(resid ** 2, weights=w)))
    value = scale * math.exp(min(-slope, 700.0))
    return RadiusEstimate(value, rms, unbounded=False, unstable=rms > UNSTABLE_RESIDUAL)


def linearize_coefficients(coeffs, theta, K: int, precision_bits: int = 512,
                           label: str = "", pilot_order: int = PILOT_ORDER) -> LinearizationSeries:
    """
    Linearizing series of sum_j coeffs[j] z^j, coeffs[1] = e^{2 pi i theta}.

    A pilot run at low order fixes the scale that keeps the full-order
    coefficients bounded.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(c) < 2 or c[0] != 0:
        raise ValueError("map must fix 0 with a nonzero linear term")
    if K < 1:
        raise ValueError("order must be >= 1")
    denom = small_denominators(theta, K, precision_bits)

    scale = 1.0
    if K > pilot_order:
        pilot = estimate_radius(_recursion(c, denom, pilot_order))
        if not pilot.unbounded and 0 < pilot.value < math.inf:
            scale = pilot.value
    cs = c * scale ** np.arange(-1.0, len(c) - 1.0)
    scaled = _recursion(cs, denom, K)
    radius = estimate_radius(scaled, scale)
    lam = complex(c[1])
    logger.debug(f"linearized {label or 'map'} to order {K}: radius {radius.value:.6g} (scale {scale:.4g})")
    return LinearizationSeries(lam, scaled, scale, c, radius, label)


def linearize(fmap, K: int) -> LinearizationSeries:
    """
    Linearizing series of a family member at 0.

    Raises:
        ResonantDenominatorError: the rotation number is rational at working precision
    """
    if fmap.rotation is None:
        raise ValueError(f"{fmap.label()} has no indifferent fixed point at 0")
    return linearize_coefficients(fmap.effective_coeffs, fmap.theta, K, fmap.precision_bits, fmap.label())


def conformal_radius(series: LinearizationSeries, strict: bool = False) -> float:
    """
    Radius of convergence estimate; inf for a series with no nonlinear terms.

    Raises:
        UnstableEstimateError: only with ``strict`` and a noisy regression
    """
    if series.K < MIN_RADIUS_ORDER:
        raise ValueError(f"radius estimate needs K >= {MIN_RADIUS_ORDER}")
    if series.radius.unstable:
        logger.warning(f"unstable radius estimate for {series.label}: residual {series.radius.residual:.3g}")
        if strict:
            raise UnstableEstimateError("Radius regression residual too large", series.radius.to_dict())
    return series.radius.value
