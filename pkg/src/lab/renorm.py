"""Fatou chart validation, sectors and the renormalization return map."""

from typing import Any, Dict

import numpy as np
from loguru import logger

from .context import RunContext
from .pool import run_tasks
from .report import CheckResult, CheckStatus, ExperimentReport, check_at_least, check_below
from ..cfrac import RotationNumber
from ..core.config import RenormSectorConfig
from ..fatou import FatouChart, SectorKind, build_chart, multiplier_check, sector, sector_siegel_check
from ..maps.families import PolynomialMap
from ..siegel import linearize, rdisk_boundary


COLUMNS = [
    "alpha", "k_estimate", "n_span", "abel_median", "abel_p95", "roundtrip_max", "holomorphy_defect", "window_shift",
    "normalization", "max_error", "k1_values", "edge_error", "top_modulus", "samples", "pass_fraction",
    "complement_pass_fraction", "critical_value_error",
]
SHRINK_TRUNCATIONS = (4.0, 8.0)


def _chart(alpha: float, cfg: RenormSectorConfig, ctx: RunContext, rotation=None) -> FatouChart:
    fmap = PolynomialMap.quad_is(rotation if rotation is not None else alpha)
    return build_chart(
        fmap, alpha, cfg.validation_sample_size, ctx.config.fatou.alpha_star,
        ctx.thresholds["abel_median"], cfg.seed, ctx.thresholds["holomorphy_defect"],
    )


def _sector_item(chart: FatouChart, kind: SectorKind, cfg: RenormSectorConfig) -> Dict[str, Any]:
    sec = sector(chart, kind, cfg.sector_points)
    out: Dict[str, Any] = {"sector": sec, "edge_error": sec.edge_error}
    if kind == SectorKind.C:
        out["critical_value_winding"] = sec.winding_number(chart.critical_value)
    else:
        # the top edge of C# closes down on 0 as the truncation grows
        out["top_modulus"] = [
            float(np.max(np.abs(sector(chart, kind, cfg.sector_points, t).edges["up"])))
            for t in SHRINK_TRUNCATIONS
        ]
    return out


def _siegel_item(chart: FatouChart, cfg: RenormSectorConfig, ctx: RunContext) -> Dict[str, Any]:
    series = linearize(chart.map, cfg.siegel_order)
    polyline = rdisk_boundary(series, cfg.siegel_r, ctx.config.siegel.polyline_points)
    ctx.save_polyline(f"{ctx.key}_siegel", polyline)
    return sector_siegel_check(chart, polyline, cfg.siegel_samples, cfg.return_horizon, cfg.k1_max, cfg.seed)


def run_renorm_sector(cfg: RenormSectorConfig, ctx: RunContext) -> ExperimentReport:
    """
    Build the Fatou chart of g_alpha for alpha = [0; N, 1, 1, ...] and check the
    Abel equation, the sectors C and C#, the multiplier of the return map and
    the confinement of sector points in the Siegel disk.
    """
    th = ctx.thresholds
    report = ctx.new_report(COLUMNS, [
        "abel_median", "abel_p95", "normalization", "multiplier_arg", "holomorphy_defect", "window_shift",
        "sector_pass", "sector_edge",
    ])
    rotation = RotationNumber((0, cfg.high_type_n), (1,), ctx.precision_bits)
    alpha = float(rotation)
    chart = _chart(alpha, cfg, ctx, rotation)
    v = chart.validation
    norm = abs(chart.phi(chart.c_g))
    report.add_row(
        "chart", alpha=alpha, k_estimate=chart.k_estimate, n_span=chart.n_span, abel_median=v.abel_median,
        abel_p95=v.abel_p95, roundtrip_max=v.roundtrip_max, holomorphy_defect=v.holomorphy_defect,
        window_shift=v.window_shift, normalization=norm,
    )
    ctx.save_json(f"{ctx.key}_chart", chart.to_dict())
    report.add_check(check_below("abel_median", v.abel_median, th["abel_median"], "median Abel residual"))
    report.add_check(check_below("abel_p95", v.abel_p95, th["abel_p95"], "95th percentile Abel residual"))
    report.add_check(check_below("normalization", norm, th["normalization"], "|Phi(c_g)|"))
    report.add_check(check_below(
        "holomorphy_defect", v.holomorphy_defect, th["holomorphy_defect"], "median |dPhi/dzbar| / |dPhi/dz|",
    ))
    report.add_check(check_below(
        "window_shift", v.window_shift, th["window_shift"], "median |Phi - Phi over the shifted window|",
    ))

    tasks = [
        (f"alpha={a:g}", lambda a=a: _chart(a, cfg, ctx)) for a in cfg.alpha_pair
    ] + [
        ("multiplier", lambda: multiplier_check(chart, cfg.multiplier_radius, cfg.multiplier_samples, cfg.k1_max)),
        ("sector_C", lambda: _sector_item(chart, SectorKind.C, cfg)),
        ("sector_C_sharp", lambda: _sector_item(chart, SectorKind.C_SHARP, cfg)),
        ("siegel", lambda: _siegel_item(chart, cfg, ctx)),
    ]
    results = {tid: res for (tid, _), res in zip(tasks, run_tasks(tasks, ctx.max_workers, ctx.progress, ctx.key))}
    for tid, res in results.items():
        if not res.ok:
            report.add_row(tid, error=f"{res.error_type}: {res.error}")
            report.add_error(tid, f"{res.error_type}: {res.error}")

    pair = [results[f"alpha={a:g}"] for a in cfg.alpha_pair]
    if all(r.ok for r in pair):
        ks = [r.result.k_estimate for r in pair]
        for a, r in zip(cfg.alpha_pair, pair):
            report.add_row(f"alpha={a:g}", alpha=a, k_estimate=r.result.k_estimate, n_span=r.result.n_span,
                           abel_median=r.result.validation.abel_median)
        report.add_check(CheckResult(
            "k_stability", CheckStatus.PASS if len(set(ks)) == 1 else CheckStatus.FAIL,
            f"k estimates {ks} for alpha in {list(cfg.alpha_pair)}", float(max(ks) - min(ks)), 0.0,
        ))

    mult = results["multiplier"]
    if mult.ok:
        m = mult.result
        report.add_row("multiplier", alpha=alpha, max_error=m["max_error"], k1_values=m["k1_values"])
        report.add_check(check_below("multiplier", m["max_error"], th["multiplier_arg"], "max |arg(R(z)/z)/2pi - frac(1/alpha)|"))
        report.add_check(CheckResult(
            "k1_constant", CheckStatus.PASS if m["k1_constant"] else CheckStatus.FAIL,
            f"return counts k1 over the circle: {m['k1_values']}", float(len(m["k1_values"])), 1.0,
        ))

    edge_errors = []
    for tid, kind in (("sector_C", SectorKind.C), ("sector_C_sharp", SectorKind.C_SHARP)):
        res = results[tid]
        if not res.ok:
            continue
        s = res.result
        ctx.save_polyline(f"{ctx.key}_{tid}", s["sector"])
        edge_errors.append(s["edge_error"])
        report.add_row(tid, alpha=alpha, edge_error=s["edge_error"], top_modulus=s.get("top_modulus"))
        if kind == SectorKind.C:
            report.add_check(CheckResult(
                "critical_value_in_C", CheckStatus.PASS if s["critical_value_winding"] == 1 else CheckStatus.FAIL,
                f"winding number of the C boundary around g(c_g): {s['critical_value_winding']}",
                float(s["critical_value_winding"]), 1.0,
            ))
        else:
            tops = s["top_modulus"]
            report.add_check(CheckResult(
                "c_sharp_shrinks", CheckStatus.INFO,
                f"max |z| on the top edge of C#: {tops[0]:.3g} at Im {SHRINK_TRUNCATIONS[0]:g}, "
                f"{tops[1]:.3g} at Im {SHRINK_TRUNCATIONS[1]:g}",
                tops[1],
            ))
    if edge_errors:
        report.add_check(check_below("sector_edges", max(edge_errors), th["sector_edge"], "max |Phi(edge) - target|"))

    sieg = results["siegel"]
    if sieg.ok:
        s = sieg.result
        report.add_row(
            "siegel", alpha=alpha, samples=s["samples"], pass_fraction=s["pass_fraction"],
            complement_pass_fraction=s["complement_pass_fraction"], critical_value_error=s["critical_value_error"],
        )
        report.add_check(check_at_least("sector_siegel", s["pass_fraction"], th["sector_pass"], "confined fraction"))
        # Exp(Phi(g(c_g))) = -4/27 follows from the Abel equation and the normalization
        report.add_check(CheckResult(
            "critical_value", CheckStatus.INFO, f"|Exp(Phi(g(c_g))) + 4/27| = {s['critical_value_error']:.3g}",
            s["critical_value_error"],
        ))
        report.add_check(CheckResult(
            "complement", CheckStatus.INFO, f"complement confined fraction {s['complement_pass_fraction']:.3f}",
            s["complement_pass_fraction"],
        ))
    logger.info(f"{ctx.key}: chart k={chart.k_estimate}, {len(report.checks)} checks")
    return report
