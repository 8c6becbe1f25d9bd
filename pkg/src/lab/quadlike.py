"""Quadratic-like restriction of e^{2 pi i theta} z + z^2 + eps z^d."""

import numpy as np
from loguru import logger

from .context import RunContext
from .pool import run_tasks
from .report import CheckResult, CheckStatus, ExperimentReport
from ..core.config import QuadraticLikeConfig
from ..maps import PolynomialMap, quadratic_like_radius, verify_quadratic_like


COLUMNS = [
    "epsilon", "degree", "R", "R_prime", "samples", "count_min", "count_max", "all_two",
    "boundary_clear", "boundary_min_modulus", "v_margin", "critical_value_inside", "passed",
]


def run_quadratic_like(cfg: QuadraticLikeConfig, ctx: RunContext) -> ExperimentReport:
    """
    Sampled check that the perturbed map restricts to a degree-two branched cover V -> D_R.

    The unperturbed map (eps = 0) and a large control perturbation run alongside.
    """
    report = ctx.new_report(COLUMNS)
    theta = cfg.theta.to_rotation(ctx.precision_bits)
    radius = quadratic_like_radius(PolynomialMap.quad_bc(theta), cfg.r_start)
    report.metadata["radius"] = radius.to_dict()

    epsilons = {"unperturbed": 0.0, "perturbed": cfg.epsilon}
    if cfg.control_epsilon is not None:
        epsilons["control"] = cfg.control_epsilon
    tasks = []
    for offset, (name, eps) in enumerate(epsilons.items()):
        fmap = PolynomialMap.perturbed_quad(theta, eps, cfg.degree)
        rng = np.random.default_rng(cfg.seed + offset)
        tasks.append((name, lambda fmap=fmap, rng=rng: verify_quadratic_like(fmap, radius, cfg.samples, rng)))
    results = run_tasks(tasks, ctx.max_workers, ctx.progress, desc=ctx.key)

    for (name, eps), res in zip(epsilons.items(), results):
        if not res.ok:
            report.add_row(name, error=f"{res.error_type}: {res.error}", epsilon=eps, degree=cfg.degree)
            report.add_error(f"quadratic_like_{name}", f"{res.error_type}: {res.error}")
            continue
        data = res.result.to_dict()
        data.pop("margin_R", None)
        data.pop("margin_R_prime", None)
        data.pop("doublings", None)
        report.add_row(name, epsilon=eps, degree=cfg.degree, **data)
        passed = res.result.passed
        logger.info(f"{ctx.key} {name} eps={eps:g}: quadratic-like {passed}")
        if name == "perturbed":
            report.add_check(CheckResult(
                "quadratic_like", CheckStatus.PASS if passed else CheckStatus.FAIL,
                f"eps={eps:g}: counts in [{data['count_min']}, {data['count_max']}], "
                f"V margin {data['v_margin']:.4g}",
                float(data["v_margin"]), 0.0, data,
            ))
        else:
            report.add_check(CheckResult(
                f"quadratic_like_{name}", CheckStatus.INFO, f"eps={eps:g}: passed={passed}",
                float(data["v_margin"]),
            ))
    return report
