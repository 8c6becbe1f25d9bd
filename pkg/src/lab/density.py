"""Density persistence of restricted Siegel disks (quadratic and cubic families)."""

import math
from typing import Any, Dict, List

from loguru import logger

from .context import RunContext
from .pool import run_tasks
from .report import CheckResult, CheckStatus, ExperimentReport, check_at_least, check_below
from ..cfrac import an_condition_report, an_rule, denominators, is_high_type, perturbed_rotation
from ..core.config import DensityConfig
from ..core.errors import InvalidConfigError
from ..maps.families import Family, PolynomialMap
from ..measure.grid import GridSpec, dens_detail, window_field
from ..siegel import linearize, rasterize_polyline, rdisk_boundary, restricted_siegel_field


COLUMNS = [
    "n", "q_n", "N", "A_n_log10", "log_root", "log_bound", "an_condition", "alpha_n", "dens", "dens_doubled",
    "drift", "numerator", "denominator", "excluded", "window_dens",
]
ROW_KEYS = ("n", "q_n", "N", "A_n_log10", "log_root", "log_bound", "an_condition", "alpha_n")
BBOX_PAD = 0.05
LAST_N = 3


def _measure(fmap: PolynomialMap, disk, cfg: DensityConfig) -> Dict[str, Any]:
    field_ = restricted_siegel_field(fmap, disk, cfg.horizon)
    detail = dens_detail(disk, field_)
    out: Dict[str, Any] = {**detail, "field": field_}
    if cfg.horizon_doubling:
        doubled = dens_detail(disk, restricted_siegel_field(fmap, disk, 2 * cfg.horizon))
        out["dens_doubled"] = doubled["dens"]
        out["drift"] = abs(doubled["dens"] - detail["dens"])
    out["window_dens"] = [dens_detail(window_field(disk, w), field_)["dens"] for w in cfg.windows]
    return out


def run_density(cfg: DensityConfig, ctx: RunContext) -> ExperimentReport:
    """
    dens of the restricted Siegel disk of f_{alpha_n} inside Delta_alpha(r).

    alpha_n keeps the first n digits of alpha, inserts A_n and continues with
    the digits of theta.
    """
    prec = ctx.precision_bits
    alpha = cfg.alpha.to_rotation(prec)
    theta = cfg.theta.to_rotation(prec)
    family = Family(cfg.family)
    if family == Family.CUBIC_SIEGEL and not (
        is_high_type(alpha, cfg.high_type_n) and is_high_type(theta, cfg.high_type_n)
    ):
        raise InvalidConfigError(
            "alpha and theta must be of high type for the cubic family",
            path=f"{ctx.key}.alpha", value=cfg.high_type_n,
        )

    th = ctx.thresholds
    report = ctx.new_report(COLUMNS, ["an_log_degree", "dens_min", "dens_invariant", "horizon_drift"])
    base = PolynomialMap(family, alpha, degree=3 if family == Family.CUBIC_SIEGEL else 2, precision_bits=prec)
    series = linearize(base, cfg.order)
    polyline = rdisk_boundary(series, cfg.r, cfg.polyline_points)
    spec = GridSpec.around(polyline.points, BBOX_PAD, cfg.resolution)
    disk = rasterize_polyline(polyline, spec, cfg.resolution)
    ctx.save_polyline(f"{ctx.key}_rdisk", polyline)
    ctx.save_field(f"{ctx.key}_disk", disk)
    report.metadata["series"] = {"K": series.K, "radius": series.radius.to_dict(), "map": series.label}
    conditions = an_condition_report(alpha, cfg.n_values, cfg.an_rule, cfg.an_scale, th["an_log_degree"])
    report.metadata["an_conditions"] = conditions
    by_n = {row["n"]: row for row in conditions}
    N = cfg.high_type_n if family == Family.CUBIC_SIEGEL else None

    qs = denominators(alpha, max(cfg.n_values))
    items: List[Dict[str, Any]] = []
    tasks = []
    if cfg.include_unperturbed:
        items.append({"item": "unperturbed", "map": base})
    for n in cfg.n_values:
        A_n = an_rule(cfg.an_rule, n, qs[n - 1], cfg.an_scale)
        alpha_n = perturbed_rotation(alpha, n, A_n, theta)
        items.append({
            "item": f"n={n}", "n": n, "q_n": qs[n - 1], "N": N, "A_n_log10": math.log10(A_n),
            "log_root": by_n[n]["log_root"], "log_bound": by_n[n]["log_bound"],
            "an_condition": by_n[n]["log_root_ok"],
            "alpha_n": repr(alpha_n), "map": base.with_rotation(alpha_n),
        })
    for it in items:
        fmap = it["map"]
        tasks.append((it["item"], lambda fmap=fmap: _measure(fmap, disk, cfg)))

    results = run_tasks(tasks, ctx.max_workers, ctx.progress, desc=ctx.key)
    per_n: Dict[int, float] = {}
    drifts: List[float] = []
    unperturbed = None
    for it, res in zip(items, results):
        values = {k: it[k] for k in ROW_KEYS if k in it}
        if not res.ok:
            report.add_row(it["item"], error=f"{res.error_type}: {res.error}", **values)
            report.add_error(f"dens_{it['item']}", f"{res.error_type}: {res.error}")
            continue
        m = res.result
        ctx.save_field(f"{ctx.key}_{it['item'].replace('=', '')}", m.pop("field"))
        report.add_row(it["item"], **values, **m)
        if "drift" in m:
            drifts.append(m["drift"])
        if it["item"] == "unperturbed":
            unperturbed = m["dens"]
        else:
            per_n[it["n"]] = m["dens"]
        logger.info(f"{ctx.key} {it['item']}: dens={m['dens']:.4f}")

    violating = [row["n"] for row in conditions if not row["log_root_ok"]]
    report.add_check(CheckResult(
        "an_condition", CheckStatus.FAIL if violating else CheckStatus.PASS,
        f"(log A_n)^(1/q_n) exceeds (1 + q_n)^({th['an_log_degree']:g}/q_n) for n in {violating}"
        if violating else f"(log A_n)^(1/q_n) within (1 + q_n)^({th['an_log_degree']:g}/q_n) for every n",
        float(len(violating)), 0.0,
    ))
    tail = sorted(per_n)[-LAST_N:]
    if tail:
        report.add_check(check_at_least(
            "dens_persistence", min(per_n[n] for n in tail), th["dens_min"],
            f"min dens over n in {tail}; consistent with the liminf bound, not a proof of it",
        ))
    else:
        report.add_error("dens_persistence", "no perturbed item was measured")
    if cfg.horizon_doubling:
        report.add_check(check_below(
            "horizon_drift", max(drifts) if drifts else None, th["horizon_drift"], "max |dens(H) - dens(2H)|",
        ))
    if cfg.include_unperturbed:
        report.add_check(check_at_least("invariance", unperturbed, th["dens_invariant"], "dens of the unperturbed map"))
    if len(per_n) >= 2:
        ordered = [per_n[n] for n in sorted(per_n)]
        report.add_check(CheckResult(
            "dens_trend", CheckStatus.INFO, f"dens from {ordered[0]:.4f} to {ordered[-1]:.4f}",
            float(ordered[-1] - ordered[0]),
        ))
    return report
