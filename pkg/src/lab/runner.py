"""Experiment registry and the run loop that writes the output bundle."""

import time
from pathlib import Path
from typing import Callable, Dict, Optional

from loguru import logger

from .area import run_area, run_area_chain, run_area_persistence
from .artifacts import OutputBundle
from .context import RunContext
from .deep import run_deep_point
from .density import run_density
from .dimension import run_dimension
from .quadlike import run_quadratic_like
from .renorm import run_renorm_sector
from .report import ExperimentReport
from .tools import run_cf, run_siegel
from ..core.config import LabConfig
from ..core.errors import InvalidConfigError, NumericalError


Runner = Callable[..., ExperimentReport]

RUNNERS: Dict[str, Runner] = {
    "e1": run_density,
    "e1b": run_density,
    "e2": run_area_persistence,
    "e3": run_deep_point,
    "e4": run_quadratic_like,
    "e5": run_renorm_sector,
    "e6": run_dimension,
    "e7": run_area_chain,
    "cf": run_cf,
    "siegel": run_siegel,
    "area": run_area,
}


def output_root(config: LabConfig, key: str) -> Path:
    section = config.experiment(key)
    return Path(section.output_dir) if section.output_dir else Path(config.output_dir) / key


def run_experiment(config: LabConfig, key: str, output_dir: Optional[str | Path] = None,
                   progress: bool = True) -> ExperimentReport:
    """
    Run one experiment and write report.csv, checks.csv and metadata.json.

    A numerical failure that stops the experiment is recorded as an error
    check, so the bundle is still written and the exit code is 3.

    Raises:
        InvalidConfigError: unknown key or a configuration the experiment rejects
    """
    if key not in RUNNERS:
        raise InvalidConfigError(f"Unknown experiment: {key}", value=sorted(RUNNERS))
    section = config.experiment(key)
    bundle = OutputBundle(Path(output_dir) if output_dir else output_root(config, key))
    ctx = RunContext(config, key, bundle, progress)
    logger.info(f"running {section.experiment_id.value} into {bundle.root}")

    start = time.perf_counter()
    try:
        report = RUNNERS[key](section, ctx)
    except NumericalError as e:
        if e.exit_code == InvalidConfigError.exit_code:
            raise
        logger.error(f"{key} stopped: {type(e).__name__}: {e}")
        report = ctx.new_report([])
        report.add_error(key, f"{type(e).__name__}: {e}")
        report.metadata["error"] = e.to_dict()
    report.wall_time = time.perf_counter() - start

    bundle.write_report(report)
    bundle.write_metadata(report, {"seed": section.seed, "config": section.model_dump(mode="json")})
    logger.info(
        f"{report.experiment}: {'PASS' if report.overall_pass else 'FAIL'} "
        f"(exit {report.exit_code}) in {report.wall_time:.1f}s"
    )
    return report
