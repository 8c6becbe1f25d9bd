"""Main CLI entry point for dynlab."""

import sys
from pathlib import Path
from typing import Optional

import click

from ..core.config import LabConfig, MapSpec
from ..core.errors import DynLabError, InvalidConfigError


EXPERIMENTS = {
    "e1": "Density of restricted Siegel disks, quadratic family.",
    "e1b": "Density of restricted Siegel disks, cubic family of high type.",
    "e2": "Area persistence of filled Julia sets under perturbed rotation numbers.",
    "e3": "Density profiles of K(delta) at Siegel disk boundary points.",
    "e4": "Quadratic-like restriction of the perturbed quadratic.",
    "e5": "Fatou chart, sectors and renormalization return map.",
    "e6": "Box dimension of the Julia set across resolutions.",
    "e7": "Area along the theta chain and Brjuno divergence.",
}


@click.group()
@click.version_option(version="1.0.0")
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="YAML, JSON or TOML configuration")
@click.option("--out", type=click.Path(path_type=Path), help="Output directory (default: <output_dir>/<command>)")
@click.option("--threads", type=click.IntRange(min=1), help="Worker threads for numba kernels and item pools")
@click.option("--seed", type=int, help="Seed for sampled checks")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.pass_context
def cli(ctx, config_path: Optional[Path], out: Optional[Path], threads: Optional[int], seed: Optional[int],
        log_level: Optional[str]):
    """dynlab - numerical laboratory for Siegel disks and Julia set area.

    Exit codes: 0 all checks pass, 1 a measured check fails,
    2 invalid configuration, 3 numerical failure.
    """
    ctx.ensure_object(dict)
    ctx.obj.update(config_path=config_path, out=out, threads=threads, seed=seed, log_level=log_level)


def _load(ctx) -> LabConfig:
    opts = ctx.obj
    try:
        config = LabConfig.from_file(opts["config_path"]) if opts["config_path"] else LabConfig()
    except InvalidConfigError as e:
        click.echo(f"✗ {e}", err=True)
        ctx.exit(InvalidConfigError.exit_code)
    if opts["threads"]:
        config.system.threads = opts["threads"]
    if opts["log_level"]:
        config.system.log_level = opts["log_level"].upper()
    return config


def _run(ctx, config: LabConfig, key: str) -> None:
    from ..core.dynlab import DynLab

    if ctx.obj["seed"] is not None:
        config.experiment(key).seed = ctx.obj["seed"]
    if ctx.obj["threads"]:
        config.experiment(key).max_workers = ctx.obj["threads"]
    lab = DynLab(config=config)
    try:
        report = lab.run(key, ctx.obj["out"])
    except DynLabError as e:
        click.echo(f"✗ {type(e).__name__}: {e}", err=True)
        ctx.exit(e.exit_code)
    except ValueError as e:
        click.echo(f"✗ Invalid input: {e}", err=True)
        ctx.exit(InvalidConfigError.exit_code)

    for check in report.checks:
        mark = {"pass": "✓", "fail": "✗", "error": "✗", "info": "·"}[check.status.value]
        click.echo(f"{mark} {check.name}: {check.message}")
    click.echo("")
    click.echo(f"{report.experiment}: {'PASS' if report.overall_pass else 'FAIL'} ({len(report.rows)} rows, "
               f"{report.wall_time:.1f}s)")
    ctx.exit(report.exit_code)


def _experiment_command(key: str, help_text: str):
    @click.pass_context
    def command(ctx):
        _run(ctx, _load(ctx), key)

    command.__doc__ = help_text
    return click.command(key)(command)


for _key, _help in EXPERIMENTS.items():
    cli.add_command(_experiment_command(_key, _help))


@cli.command("cf")
@click.option("--value", help="Number in (0, 1), as a decimal string or p/q")
@click.option("--n-terms", type=click.IntRange(min=1), help="Number of digits to expand")
@click.pass_context
def cf(ctx, value: Optional[str], n_terms: Optional[int]):
    """Continued fraction digits, convergents and partial Brjuno sums."""
    config = _load(ctx)
    if value is not None:
        config.cf.value = value
    if n_terms is not None:
        config.cf.n_terms = n_terms
    _run(ctx, config, "cf")


@cli.command("siegel")
@click.option("--family", type=click.Choice(["quad_bc", "cubic_siegel", "quad_is"]), help="Polynomial family")
@click.option("--order", type=click.IntRange(min=2), help="Truncation order of the linearizing series")
@click.pass_context
def siegel(ctx, family: Optional[str], order: Optional[int]):
    """Linearizing series, conformal radius and r-disk boundaries."""
    config = _load(ctx)
    if family is not None:
        config.siegel_tool.map = MapSpec(family=family, theta=config.siegel_tool.map.theta)
    if order is not None:
        config.siegel_tool.order = order
    _run(ctx, config, "siegel")


@cli.command("area")
@click.option("--family", type=click.Choice(["quad_bc", "cubic_siegel", "quad_is", "square"]),
              help="Polynomial family")
@click.option("--resolution", type=click.IntRange(min=8), help="Grid cells per side")
@click.option("--horizon", type=click.IntRange(min=1), help="Escape-time iteration count")
@click.pass_context
def area(ctx, family: Optional[str], resolution: Optional[int], horizon: Optional[int]):
    """Area of a filled Julia set on a grid."""
    config = _load(ctx)
    if family is not None:
        config.area.map = MapSpec(family=family, theta=config.area.map.theta)
    if resolution is not None:
        config.area.grid.resolution = resolution
    if horizon is not None:
        config.area.grid.horizon = horizon
    _run(ctx, config, "area")


def main():
    cli(obj={})


if __name__ == "__main__":
    sys.exit(main())
