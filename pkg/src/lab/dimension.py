"""Box-counting dimension of the Julia set boundary across resolutions."""

from typing import Any, Dict

from loguru import logger

from .context import RunContext
from .pool import run_tasks
from .report import CheckResult, CheckStatus, ExperimentReport, check_below
from ..core.config import DimensionConfig
from ..maps.families import PolynomialMap
from ..measure import GridField, GridSpec, boundary_area, box_dimension_detail, filled_julia_grid


COLUMNS = ["resolution", "dimension", "fit_residual", "boundary_cells", "boundary_area", "counts"]


def half_plane_field(bbox, resolution: int) -> GridField:
    """Cells left of the vertical midline; its boundary is a segment of dimension 1."""
    spec = GridSpec.square(bbox, resolution)
    mid = 0.5 * (spec.xmin + spec.xmax)
    return GridField.from_mask(spec, spec.centers().real < mid, params={"kind": "half_plane"})


def _measure(field_: GridField, cfg: DimensionConfig) -> Dict[str, Any]:
    detail = box_dimension_detail(field_, cfg.scales)
    return {
        "field": field_,
        "dimension": detail["dimension"],
        "fit_residual": detail["fit_residual"],
        "boundary_cells": detail["boundary_cells"],
        "boundary_area": boundary_area(field_),
        "counts": {str(k): v for k, v in detail["counts"].items()},
    }


def run_dimension(cfg: DimensionConfig, ctx: RunContext) -> ExperimentReport:
    """Box dimension of the boundary of K_theta at each resolution, with a segment control."""
    th = ctx.thresholds
    report = ctx.new_report(COLUMNS, ["max_dimension", "dimension_drift", "segment_tol"])
    fmap = PolynomialMap.cubic_siegel(cfg.theta.to_rotation(ctx.precision_bits))
    resolutions = sorted(cfg.resolutions)

    tasks = [
        (f"res={res}", lambda res=res: _measure(filled_julia_grid(fmap, cfg.bbox, res, cfg.horizon, cfg.r_escape), cfg))
        for res in resolutions
    ] + [("segment", lambda: _measure(half_plane_field(cfg.bbox, cfg.segment_resolution), cfg))]
    results = run_tasks(tasks, ctx.max_workers, ctx.progress, desc=ctx.key)

    dims: Dict[int, float] = {}
    areas: Dict[int, float] = {}
    for (tid, _), res, resolution in zip(tasks, results, resolutions + [cfg.segment_resolution]):
        if not res.ok:
            report.add_row(tid, error=f"{res.error_type}: {res.error}", resolution=resolution)
            report.add_error(tid, f"{res.error_type}: {res.error}")
            continue
        m = res.result
        field_ = m.pop("field")
        report.add_row(tid, resolution=resolution, **m)
        logger.info(f"{ctx.key} {tid}: dimension {m['dimension']:.4f}")
        if tid == "segment":
            report.add_check(check_below(
                "segment_control", abs(m["dimension"] - 1.0), th["segment_tol"], "|dimension of a segment - 1|",
            ))
            continue
        ctx.save_field(f"{ctx.key}_{resolution}", field_)
        dims[resolution] = m["dimension"]
        areas[resolution] = m["boundary_area"]

    if dims:
        top = max(dims)
        report.add_check(check_below("max_dimension", dims[top], th["max_dimension"], f"dimension at {top}"))
    if len(dims) >= 2:
        top, prev = sorted(dims)[-1], sorted(dims)[-2]
        report.add_check(check_below(
            "dimension_drift", abs(dims[top] - dims[prev]), th["dimension_drift"],
            f"|d({top}) - d({prev})|",
        ))
        series = [areas[r] for r in sorted(areas)]
        shrinking = all(b < a for a, b in zip(series, series[1:]))
        report.add_check(CheckResult(
            "boundary_area_trend", CheckStatus.INFO,
            f"boundary-cell area {'decreases' if shrinking else 'does not decrease'} with resolution: "
            + ", ".join(f"{a:.4g}" for a in series),
            series[-1],
        ))
    return report
