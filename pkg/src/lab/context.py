"""Shared state handed to every experiment driver."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from .artifacts import OutputBundle
from .report import ExperimentReport
from ..core.config import LabConfig, MapSpec
from ..maps.families import Family, PolynomialMap


@dataclass
class RunContext:
    """Configuration, output bundle and seed of one run."""
    config: LabConfig
    key: str
    bundle: Optional[OutputBundle] = None
    progress: bool = True

    @property
    def section(self):
        return self.config.experiment(self.key)

    @property
    def thresholds(self) -> Dict[str, float]:
        return self.config.thresholds

    @property
    def precision_bits(self) -> int:
        return self.config.cfrac.precision_bits

    @property
    def seed(self) -> int:
        return self.section.seed

    @property
    def max_workers(self) -> int:
        return self.section.max_workers

    @property
    def config_hash(self) -> str:
        return self.config.config_hash(self.key)

    def new_report(self, columns: List[str], threshold_keys: List[str] | None = None) -> ExperimentReport:
        keys = threshold_keys or []
        return ExperimentReport(
            experiment=self.section.experiment_id.value,
            config_hash=self.config_hash,
            columns=columns,
            thresholds={k: self.thresholds[k] for k in keys},
        )

    def save_field(self, name: str, field_) -> None:
        if self.bundle is not None:
            self.bundle.add_field(name, field_)

    def save_polyline(self, name: str, polyline) -> None:
        if self.bundle is not None:
            self.bundle.add_polyline(name, polyline)

    def save_json(self, name: str, data: Dict[str, Any]) -> None:
        if self.bundle is not None:
            self.bundle.add_json(name, data)


def build_map(spec: MapSpec, precision_bits: int = 512) -> PolynomialMap:
    """PolynomialMap from a config descriptor."""
    family = Family(spec.family)
    if family == Family.SQUARE:
        return PolynomialMap.square()
    rotation = spec.theta.to_rotation(precision_bits)
    if family == Family.PERTURBED_QUAD:
        return PolynomialMap.perturbed_quad(rotation, spec.epsilon, spec.degree)
    return PolynomialMap(family, rotation, precision_bits=precision_bits)


def open_bundle(root: Optional[str | Path]) -> Optional[OutputBundle]:
    return OutputBundle(Path(root)) if root else None
