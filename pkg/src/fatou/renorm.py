"""Pointwise near-parabolic renormalization by first return to the fundamental strip."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np
from loguru import logger

from .chart import ESCAPE, FatouChart
from .sector import IM_BOTTOM, RE_LEFT, RE_RIGHT, exp_inverse, exp_map
from ..core.errors import DynLabError, NewtonDivergenceError, NoReturnError, OutsidePetalError


# model-coordinate slack around the entrance strip when screening candidates
ENTRANCE_SLACK = 4.0


@dataclass
class RenormOrbit:
    """One evaluation of the return map with its intermediate orbit."""
    z: complex
    zeta: complex
    points: List[complex] = field(default_factory=list)
    zeta_return: complex = 0j
    value: complex = 0j
    T: int = 0
    k1: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "z": [self.z.real, self.z.imag],
            "zeta": [self.zeta.real, self.zeta.imag],
            "zeta_return": [self.zeta_return.real, self.zeta_return.imag],
            "value": [self.value.real, self.value.imag],
            "T": self.T,
            "k1": self.k1,
            "max_modulus": max(abs(p) for p in self.points) if self.points else 0.0,
        }


def _last_petal_index(chart: FatouChart, zeta: complex) -> int:
    # last iterate before the orbit enters the unit strip ending at the exit of the petal
    return int(math.ceil(1.0 / chart.alpha - chart.k_estimate - 2 - zeta.real)) - 1


def renorm_orbit(chart: FatouChart, z: complex, k1_max: int) -> RenormOrbit:
    """
    Pull z back by Exp then phi_inverse, iterate g until Re Phi returns to
    [1/2, 3/2), and push forward by phi then Exp.

    Raises:
        NoReturnError: no return within 1/alpha + k1_max iterates, or escape
        OutsidePetalError: the pulled-back point is outside the chart
    """
    zeta = exp_inverse(z)
    if zeta.imag < IM_BOTTOM:
        raise OutsidePetalError("Exp preimage below the sectors", {"z": z, "zeta": zeta})
    z0 = chart.phi_inverse(zeta)
    rec = RenormOrbit(z=complex(z), zeta=zeta, points=[z0])

    x_entry = chart.model(chart.c_g).real
    limit = int(math.ceil(1.0 / chart.alpha)) + k1_max
    passed_middle = False
    zt = z0
    for t in range(1, limit + 1):
        zt = complex(chart.map.eval(zt))
        rec.points.append(zt)
        if abs(zt) > ESCAPE:
            raise NoReturnError("Return orbit escaped", {"z": z, "step": t})
        x = chart.model(zt).real
        if not passed_middle:
            passed_middle = x > chart.middle + 1.0
            continue
        if abs(x - x_entry - 1.0) > ENTRANCE_SLACK:
            continue
        try:
            w = chart.phi(zt)
        except OutsidePetalError:
            continue
        if RE_LEFT <= w.real < RE_RIGHT and w.imag >= IM_BOTTOM:
            rec.T = t
            rec.k1 = t - _last_petal_index(chart, zeta)
            if rec.k1 > k1_max:
                raise NoReturnError("Return count exceeds k1_max", {"k1": rec.k1, "k1_max": k1_max})
            rec.zeta_return = w
            rec.value = exp_map(w)
            return rec
    raise NoReturnError("No return to the fundamental strip", {"z": z, "iterates": limit})


def renorm_return(chart: FatouChart, z: complex, k1_max: int):
    """(R(z), k1) for the near-parabolic renormalization R of the chart's map."""
    rec = renorm_orbit(chart, z, k1_max)
    return rec.value, rec.k1


def multiplier_check(chart: FatouChart, radius: float, samples: int, k1_max: int) -> Dict[str, Any]:
    """
    Compare arg(R(z)/z) / 2 pi with frac(1/alpha) on the circle |z| = radius.
    """
    expected = (1.0 / chart.alpha) % 1.0
    errors, k1s = [], []
    for z in radius * np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples):
        value, k1 = renorm_return(chart, complex(z), k1_max)
        turn = (np.angle(value / z) / (2 * np.pi)) % 1.0
        d = abs(turn - expected)
        errors.append(min(d, 1.0 - d))
        k1s.append(k1)
    return {
        "expected": expected,
        "max_error": float(max(errors)),
        "k1_values": sorted(set(k1s)),
        "k1_constant": len(set(k1s)) == 1,
    }


def _confined(chart: FatouChart, polyline, zeta: complex, horizon: int, k1_max: int) -> bool:
    p = exp_map(zeta)
    for _ in range(horizon):
        try:
            rec = renorm_orbit(chart, p, k1_max)
        except DynLabError:
            return False
        if not polyline.contains(rec.points[-1])[0]:
            return False
        p = rec.value
    return True


def sector_siegel_check(chart: FatouChart, siegel_polyline, samples: int, horizon: int = 10,
                        k1_max: int = 400, seed: int = 0, truncation: float = 6.0) -> Dict[str, Any]:
    """
    Push points of (C ∪ C#) ∩ Siegel disk through Exp ∘ Phi and follow their
    return orbits for ``horizon`` returns.

    A point passes when every return succeeds and lands back inside the Siegel
    polyline. Points outside the polyline are followed too and reported as the
    complement sample.
    """
    rng = np.random.default_rng(seed)
    inside, outside = [], []
    attempts = 0
    while len(inside) < samples and attempts < 20 * samples:
        attempts += 1
        zeta = complex(RE_LEFT + rng.random(), IM_BOTTOM + (truncation - IM_BOTTOM) * rng.random())
        try:
            z = chart.phi_inverse(zeta)
        except (NewtonDivergenceError, OutsidePetalError):
            continue
        if siegel_polyline.contains(z)[0]:
            inside.append(zeta)
        elif len(outside) < samples:
            outside.append(zeta)

    passed = sum(_confined(chart, siegel_polyline, zeta, horizon, k1_max) for zeta in inside)
    outside_passed = sum(_confined(chart, siegel_polyline, zeta, horizon, k1_max) for zeta in outside)

    cv_image = exp_map(chart.phi(chart.critical_value))
    report = {
        "samples": len(inside),
        "attempts": attempts,
        "pass_fraction": passed / len(inside) if inside else 0.0,
        "complement_samples": len(outside),
        "complement_pass_fraction": outside_passed / len(outside) if outside else 0.0,
        "critical_value_error": abs(cv_image - (-4.0 / 27.0)),
    }
    logger.info(
        f"sector/Siegel check: {passed}/{len(inside)} confined, complement {outside_passed}/{len(outside)}"
    )
    return report
