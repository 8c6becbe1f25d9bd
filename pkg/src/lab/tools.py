"""Single-object tools: continued fraction expansion and Siegel disk linearization."""

from fractions import Fraction
from typing import List, Optional

from loguru import logger
from mpmath import mp, mpf

from .context import RunContext, build_map
from .report import CheckResult, CheckStatus, ExperimentReport
from ..cfrac import approximants, brjuno_sum, cf_expand
from ..core.config import CFToolConfig, SiegelToolConfig
from ..core.errors import DynLabError, InvalidConfigError
from ..siegel import conformal_radius, linearize, rdisk_boundary


CF_COLUMNS = ["n", "a_n", "p_n", "q_n", "abs_error", "scaled_error", "brjuno_partial"]
SIEGEL_COLUMNS = [
    "r", "rho", "tail", "diameter", "simple", "winding", "nested", "K", "radius", "radius_residual",
    "functional_residual",
]
RESIDUAL_FRACTIONS = (0.25, 0.5, 0.75)


def _parse_value(text: str, precision_bits: int):
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        with mp.workprec(precision_bits):
            return mpf(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidConfigError(f"Cannot parse value: {e}", path="cf.value", value=text)


def run_cf(cfg: CFToolConfig, ctx: RunContext) -> ExperimentReport:
    """Digits, convergents and partial Brjuno sums of one number."""
    prec = ctx.precision_bits
    report = ctx.new_report(CF_COLUMNS)
    if cfg.value is not None:
        x = _parse_value(cfg.value, prec)
        digits = cf_expand(x, cfg.n_terms, prec)
        with mp.workprec(prec):
            target = mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else x
    else:
        rotation = cfg.rotation.to_rotation(prec)
        digits = rotation.digits(cfg.n_terms)
        target = rotation.value
    n = len(digits) - 1
    report.metadata["digits"] = digits

    worst = 0.0
    with mp.workprec(prec):
        for a in approximants(digits, n):
            err = abs(target - mpf(a.p) / a.q)
            scaled = float(err * a.q * a.q)
            worst = max(worst, scaled)
            partial: Optional[float] = brjuno_sum(digits, a.index) if a.index < n else None
            report.add_row(
                f"n={a.index}", n=a.index, a_n=digits[a.index], p_n=a.p, q_n=a.q,
                abs_error=float(err), scaled_error=scaled, brjuno_partial=partial,
            )
    report.add_check(CheckResult(
        "digits", CheckStatus.INFO, f"{n} digits: [{digits[0]}; {', '.join(map(str, digits[1:]))}]", float(n),
    ))
    report.add_check(CheckResult(
        "approximation", CheckStatus.PASS if worst < 1.0 else CheckStatus.FAIL,
        f"max q^2 |x - p/q| = {worst:.4g}", worst, 1.0,
    ))
    return report


def run_siegel(cfg: SiegelToolConfig, ctx: RunContext) -> ExperimentReport:
    """Linearizing series, conformal radius estimate and nested r-disk boundaries."""
    fmap = build_map(cfg.map, ctx.precision_bits)
    report = ctx.new_report(SIEGEL_COLUMNS)
    series = linearize(fmap, cfg.order)
    radius = conformal_radius(series)
    ctx.save_json(f"{ctx.key}_series", series.to_dict())

    residuals = [series.functional_residual(t * radius) for t in RESIDUAL_FRACTIONS]
    report.add_row(
        "series", K=series.K, radius=radius, radius_residual=series.radius.residual,
        functional_residual=residuals,
    )
    logger.info(f"{fmap.label()}: radius {radius:.6g}, residuals {residuals}")

    polylines = []
    for r in sorted(cfg.r_values):
        try:
            polyline = rdisk_boundary(series, r, cfg.polyline_points)
        except (DynLabError, ValueError) as e:
            report.add_row(f"r={r:g}", error=f"{type(e).__name__}: {e}", r=r)
            report.add_error(f"rdisk_{r:g}", f"{type(e).__name__}: {e}")
            continue
        nested = polylines[-1].strictly_inside(polyline) if polylines else None
        polylines.append(polyline)
        ctx.save_polyline(f"{ctx.key}_r{r:g}", polyline)
        report.add_row(
            f"r={r:g}", r=r, rho=polyline.params["rho"], tail=polyline.params["tail"],
            diameter=polyline.diameter, simple=polyline.is_simple(), winding=polyline.winding_number(0j),
            nested=nested,
        )

    simple: List[bool] = [row["simple"] for row in report.rows if "simple" in row]
    report.add_check(CheckResult(
        "simple", CheckStatus.PASS if simple and all(simple) else CheckStatus.FAIL,
        f"{sum(simple)} of {len(simple)} r-disk boundaries are simple curves", float(sum(simple)),
    ))
    nested = [row["nested"] for row in report.rows if row.get("nested") is not None]
    if nested:
        report.add_check(CheckResult(
            "nested", CheckStatus.PASS if all(nested) else CheckStatus.FAIL,
            f"{sum(nested)} of {len(nested)} consecutive r-disks are strictly nested", float(sum(nested)),
        ))
    report.add_check(CheckResult(
        "functional_residual", CheckStatus.INFO,
        "max |f(phi) - phi(lambda z)| at " + ", ".join(f"{t:g}R" for t in RESIDUAL_FRACTIONS) + ": "
        + ", ".join(f"{v:.3g}" for v in residuals),
        residuals[1],
    ))
    return report
