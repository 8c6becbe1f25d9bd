"""Deep points: density of K(delta) around Siegel disk boundary points."""

from typing import Any, Dict, List

import numpy as np
from loguru import logger

from .context import RunContext
from .pool import run_tasks
from .report import CheckResult, CheckStatus, ExperimentReport, check_at_least
from ..core.config import DeepPointConfig
from ..maps.families import PolynomialMap
from ..measure import density_profile_detail, filled_julia_grid, k_delta_field
from ..measure.grid import GridSpec
from ..siegel import linearize, preimage_components, rdisk_boundary


COLUMNS = ["point", "re", "im", "radii", "profile", "cells", "monotone", "final"]
BBOX = (-2.5, -2.0, 1.5, 2.0)
CONTROL_INSET = 0.3


def boundary_points(series, radii: List[float], n_points: int, m: int) -> np.ndarray:
    """
    Points of the Siegel disk boundary by linear extrapolation to r = 1.

    Uses the two largest r-disk polylines at n_points equally spaced angles.
    """
    r_lo, r_hi = sorted(radii)[-2:]
    idx = (np.arange(n_points) * m) // n_points
    lo = rdisk_boundary(series, r_lo, m).points[idx]
    hi = rdisk_boundary(series, r_hi, m).points[idx]
    return hi + (1.0 - r_hi) * (hi - lo) / (r_hi - r_lo)


def _profile(z: complex, field_, radii: List[float], noise: float) -> Dict[str, Any]:
    rows = density_profile_detail(z, field_, radii)
    profile = [r["dens"] for r in rows]
    monotone = all(b >= a - noise for a, b in zip(profile, profile[1:]))
    return {
        "re": z.real, "im": z.imag, "radii": list(radii), "profile": profile,
        "cells": [r["cells"] for r in rows], "monotone": monotone, "final": profile[-1],
    }


def run_deep_point(cfg: DeepPointConfig, ctx: RunContext) -> ExperimentReport:
    """
    dens_{B(z, r)}(K(delta)) as r halves, at extrapolated boundary points z.

    The interior point 0 and a point outside the filled Julia set serve as controls.
    """
    th = ctx.thresholds
    report = ctx.new_report(COLUMNS, ["profile_noise", "profile_final"])
    fmap = PolynomialMap.cubic_siegel(cfg.theta.to_rotation(ctx.precision_bits))
    series = linearize(fmap, cfg.order)
    proxy = rdisk_boundary(series, cfg.proxy_r, cfg.polyline_points)
    ctx.save_polyline(f"{ctx.key}_proxy", proxy)
    points = boundary_points(series, cfg.extrapolation_r, cfg.n_points, cfg.polyline_points)

    spec = GridSpec.square(BBOX, cfg.resolution)
    kd = k_delta_field(fmap, cfg.delta, proxy, spec, cfg.resolution, cfg.horizon)
    ctx.save_field(f"{ctx.key}_kdelta", kd)
    radii = [cfg.r0 / 2 ** i for i in range(cfg.n_radii)]

    controls = {"interior": 0j, "exterior": complex(BBOX[0] + CONTROL_INSET, BBOX[1] + CONTROL_INSET)}
    named = [(f"z{k}", complex(z)) for k, z in enumerate(points)] + list(controls.items())
    tasks = [(name, lambda z=z: _profile(z, kd, radii, th["profile_noise"])) for name, z in named]
    results = run_tasks(tasks, ctx.max_workers, ctx.progress, desc=ctx.key)

    finals: List[float] = []
    broken: List[str] = []
    for (name, z), res in zip(named, results):
        if not res.ok:
            report.add_row(name, error=f"{res.error_type}: {res.error}", point=name, re=z.real, im=z.imag)
            report.add_error(f"profile_{name}", f"{res.error_type}: {res.error}")
            continue
        report.add_row(name, point=name, **res.result)
        logger.info(f"{ctx.key} {name}: profile {np.round(res.result['profile'], 4).tolist()}")
        if name in controls:
            report.add_check(CheckResult(
                f"control_{name}", CheckStatus.INFO, f"{name} control density {res.result['final']:.4f}",
                res.result["final"],
            ))
            continue
        finals.append(res.result["final"])
        if not res.result["monotone"]:
            broken.append(name)

    report.add_check(CheckResult(
        "profile_monotone", CheckStatus.PASS if finals and not broken else CheckStatus.FAIL,
        f"{len(broken)} of {len(finals)} profiles decrease by more than {th['profile_noise']:g}",
        float(len(broken)), 0.0, {"points": broken},
    ))
    report.add_check(check_at_least(
        "profile_final", min(finals) if finals else None, th["profile_final"], "min density at the smallest radius",
    ))

    filled = filled_julia_grid(fmap, spec, cfg.resolution, cfg.horizon)
    stray = int(np.count_nonzero(kd.inside & ~filled.inside & ~filled.undecided))
    report.add_check(CheckResult(
        "kdelta_in_filled", CheckStatus.PASS if stray == 0 else CheckStatus.FAIL,
        f"{stray} cells of K(delta) lie outside the filled Julia set", float(stray), 0.0,
    ))
    inner = rdisk_boundary(series, cfg.preimage_r, cfg.polyline_points)
    components = preimage_components(fmap, inner, BBOX, cfg.preimage_resolution)
    report.add_check(CheckResult(
        "preimage_components", CheckStatus.INFO,
        f"f^-1 of the r = {cfg.preimage_r:g} disk has {components} components", float(components),
    ))
    report.metadata["series"] = {"K": series.K, "radius": series.radius.to_dict()}
    return report
