"""Area of filled Julia sets: persistence under perturbation and along theta chains."""

import math
from typing import Any, Dict, List

from loguru import logger

from .context import RunContext, build_map
from .pool import run_tasks
from .report import CheckResult, CheckStatus, ExperimentReport, check_at_least
from ..cfrac import (
    RotationNumber,
    an_condition_report,
    an_rule,
    brjuno_divergence_witness,
    denominators,
    is_high_type,
    perturbed_rotation,
    theta_schedule,
)
from ..core.config import AreaChainConfig, AreaPersistenceConfig, AreaToolConfig, GridSpecModel
from ..core.errors import InvalidConfigError
from ..maps.families import PolynomialMap
from ..measure import area, filled_julia_grid, refinement_consistency


PERSISTENCE_COLUMNS = [
    "n", "q_n", "N", "A_n_log10", "log_root", "log_bound", "root", "root_min", "an_condition",
    "area", "undecided_mass", "ratio", "inverse_ratio", "refinement_difference", "refinement_bound",
    "refinement_passed",
]
SCHEDULE_KEYS = ("n", "q_n", "N", "A_n_log10", "log_root", "log_bound", "root", "root_min", "an_condition")
CHAIN_COLUMNS = ["level", "m", "A", "N", "area", "undecided_mass", "bound_factor", "ratio_to_bound"]
TOOL_COLUMNS = ["map", "resolution", "horizon", "value", "undecided_mass"]


def _julia(fmap: PolynomialMap, grid: GridSpecModel, resolution: int | None = None):
    return filled_julia_grid(fmap, grid.bbox, resolution or grid.resolution, grid.horizon, grid.r_escape)


def _area_with_refinement(fmap: PolynomialMap, cfg: AreaPersistenceConfig, c_bound: float) -> Dict[str, Any]:
    field_ = _julia(fmap, cfg.grid)
    coarse = _julia(fmap, cfg.grid, cfg.refinement_resolution)
    low, high = sorted((coarse, field_), key=lambda f: f.spec.nx)
    refinement = refinement_consistency(low, high, c_bound)
    estimate = area(field_)
    return {
        "field": field_,
        "area": estimate.value,
        "undecided_mass": estimate.undecided_mass,
        "refinement_difference": refinement["difference"],
        "refinement_bound": refinement["bound"],
        "refinement_passed": refinement["passed"],
    }


def run_area_persistence(cfg: AreaPersistenceConfig, ctx: RunContext) -> ExperimentReport:
    """
    area(K_{alpha_n}) / area(K_alpha) for alpha of high type.

    alpha_n keeps n digits of alpha, inserts A_n and continues with N forever.
    """
    prec = ctx.precision_bits
    alpha = cfg.alpha.to_rotation(prec)
    if not is_high_type(alpha, cfg.high_type_n):
        raise InvalidConfigError("alpha must be of high type", path=f"{ctx.key}.alpha", value=cfg.high_type_n)
    tail = RotationNumber((0,), (cfg.high_type_n,), prec)
    th = ctx.thresholds
    threshold = 1.0 - cfg.epsilon if cfg.epsilon is not None else th["area_ratio_min"]
    report = ctx.new_report(
        PERSISTENCE_COLUMNS, ["an_log_degree", "an_root_log_factor", "area_ratio_min", "refinement_c"],
    )
    report.thresholds["area_ratio_min"] = threshold

    qs = denominators(alpha, max(cfg.n_values))
    rows = an_condition_report(
        alpha, cfg.n_values, cfg.an_rule, cfg.an_scale, th["an_log_degree"], th["an_root_log_factor"],
    )
    report.metadata["an_conditions"] = rows
    conditions = {row["n"]: row for row in rows}
    violating = [row["n"] for row in rows if not (row["log_root_ok"] and row["root_ok"])]
    report.add_check(CheckResult(
        "an_condition", CheckStatus.FAIL if violating else CheckStatus.PASS,
        f"A_n misses a growth condition for n in {violating}" if violating
        else "(log A_n)^(1/q_n) and A_n^(1/q_n) within their bounds for every n",
        float(len(violating)), 0.0,
    ))
    base = PolynomialMap.cubic_siegel(alpha)
    items: List[Dict[str, Any]] = [{"item": "alpha", "N": cfg.high_type_n, "map": base}]
    for n in cfg.n_values:
        A_n = an_rule(cfg.an_rule, n, qs[n - 1], cfg.an_scale)
        items.append({
            "item": f"n={n}", "n": n, "q_n": qs[n - 1], "N": cfg.high_type_n, "A_n_log10": math.log10(A_n),
            **{k: conditions[n][k] for k in ("log_root", "log_bound", "root", "root_min")},
            "an_condition": conditions[n]["log_root_ok"] and conditions[n]["root_ok"],
            "map": base.with_rotation(perturbed_rotation(alpha, n, A_n, tail)),
        })
    tasks = [
        (it["item"], lambda fmap=it["map"]: _area_with_refinement(fmap, cfg, th["refinement_c"]))
        for it in items
    ]
    results = run_tasks(tasks, ctx.max_workers, ctx.progress, desc=ctx.key)

    base_result = results[0]
    if not base_result.ok:
        report.add_row("alpha", error=f"{base_result.error_type}: {base_result.error}")
        report.add_error("base_area", f"{base_result.error_type}: {base_result.error}")
        return report
    base_area = base_result.result["area"]
    ratios: Dict[int, float] = {}
    refinements: List[bool] = []
    for it, res in zip(items, results):
        values = {k: it[k] for k in SCHEDULE_KEYS if k in it}
        if not res.ok:
            report.add_row(it["item"], error=f"{res.error_type}: {res.error}", **values)
            report.add_error(f"area_{it['item']}", f"{res.error_type}: {res.error}")
            continue
        m = res.result
        ctx.save_field(f"{ctx.key}_{it['item'].replace('=', '')}", m.pop("field"))
        ratio = m["area"] / base_area if base_area > 0 else math.nan
        inverse = base_area / m["area"] if m["area"] > 0 else math.inf
        report.add_row(it["item"], **values, **m, ratio=ratio, inverse_ratio=inverse)
        refinements.append(m["refinement_passed"])
        if "n" in it:
            ratios[it["n"]] = ratio
        logger.info(f"{ctx.key} {it['item']}: area={m['area']:.6f}, ratio={ratio:.4f}")

    late = [n for n in ratios if n >= cfg.n0]
    if late:
        report.add_check(check_at_least(
            "area_ratio", min(ratios[n] for n in late), threshold, f"min area ratio over n >= {cfg.n0}",
        ))
    else:
        report.add_error("area_ratio", f"no measured n >= {cfg.n0}")
    failed = refinements.count(False)
    report.add_check(CheckResult(
        "refinement", CheckStatus.PASS if refinements and failed == 0 else CheckStatus.FAIL,
        f"{failed} of {len(refinements)} fields differ across resolutions by more than "
        f"{th['refinement_c']:g} boundary-cell areas",
        float(failed), 0.0,
    ))
    return report


def run_area_chain(cfg: AreaChainConfig, ctx: RunContext) -> ExperimentReport:
    """
    area(K_{theta_l}) >= prod_{j<=l} (1 - eps_j) area(K_{theta_0}) along the schedule,
    with the partial Brjuno sums of the limit rotation number reported alongside.
    """
    prec = ctx.precision_bits
    theta0 = cfg.theta0.to_rotation(prec)
    if not is_high_type(theta0, cfg.high_type_n):
        raise InvalidConfigError("theta0 must be of high type", path=f"{ctx.key}.theta0", value=cfg.high_type_n)
    schedule = theta_schedule(theta0, cfg.m_sequence, cfg.a_sequence, cfg.high_type_n, prec)
    report = ctx.new_report(CHAIN_COLUMNS)
    report.metadata["schedule"] = schedule.to_dict()

    levels = [("theta_0", theta0, None, None)] + [
        (f"theta_{l}", t, m, A)
        for l, (t, m, A) in enumerate(zip(schedule.thetas, cfg.m_sequence, cfg.a_sequence), start=1)
    ]
    tasks = [(name, lambda t=t: _julia(PolynomialMap.cubic_siegel(t), cfg.grid)) for name, t, _, _ in levels]
    results = run_tasks(tasks, ctx.max_workers, ctx.progress, desc=ctx.key)

    if not results[0].ok:
        report.add_row(
            "theta_0", error=f"{results[0].error_type}: {results[0].error}", level=0, N=cfg.high_type_n,
        )
        report.add_error("area_chain", f"{results[0].error_type}: {results[0].error}")
        return report
    base_area = area(results[0].result).value
    worst = math.inf
    factor = 1.0
    for level, ((name, _, m, A), res) in enumerate(zip(levels, results)):
        if level > 0:
            factor *= 1.0 - cfg.epsilons[level - 1]
        if not res.ok:
            report.add_row(
                name, error=f"{res.error_type}: {res.error}", level=level, m=m, A=A, N=cfg.high_type_n,
            )
            report.add_error(f"area_{name}", f"{res.error_type}: {res.error}")
            continue
        ctx.save_field(f"{ctx.key}_{name}", res.result)
        estimate = area(res.result)
        to_bound = estimate.value / (factor * base_area) if base_area > 0 else math.nan
        if level > 0:
            worst = min(worst, to_bound)
        report.add_row(
            name, level=level, m=m, A=A, N=cfg.high_type_n, area=estimate.value,
            undecided_mass=estimate.undecided_mass,
            bound_factor=factor, ratio_to_bound=to_bound,
        )
        logger.info(f"{ctx.key} {name}: area={estimate.value:.6f}, area/bound={to_bound:.4f}")

    if not math.isfinite(worst):
        report.add_error("area_chain", "chain areas could not be measured")
    else:
        report.add_check(check_at_least("area_chain", worst, 1.0, "min area / (prod(1 - eps_j) area_0)"))

    witness = brjuno_divergence_witness(schedule, cfg.brjuno_bound)
    report.metadata["brjuno"] = witness
    first = witness["first_exceeding"]
    report.add_check(CheckResult(
        "brjuno_divergence", CheckStatus.INFO,
        f"partial Brjuno sum of the limit exceeds {cfg.brjuno_bound:g} at index {first}"
        if first else f"partial Brjuno sums stay below {cfg.brjuno_bound:g} on this schedule",
        witness["partial_sums"][-1], cfg.brjuno_bound,
        {"level_terms": witness["level_terms"]},
    ))
    return report


def run_area(cfg: AreaToolConfig, ctx: RunContext) -> ExperimentReport:
    """Area of one filled Julia set."""
    fmap = build_map(cfg.map, ctx.precision_bits)
    report = ctx.new_report(TOOL_COLUMNS)
    field_ = _julia(fmap, cfg.grid)
    ctx.save_field(f"{ctx.key}_{fmap.family.value}", field_)
    estimate = area(field_)
    report.add_row(
        fmap.label(), map=fmap.label(), resolution=cfg.grid.resolution, horizon=cfg.grid.horizon,
        value=estimate.value, undecided_mass=estimate.undecided_mass,
    )
    report.add_check(CheckResult("area", CheckStatus.INFO, f"area {estimate.value:.6f}", estimate.value))
    return report
