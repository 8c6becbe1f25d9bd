"""Output bundle: report tables, rasters, polylines and metadata.json."""

import hashlib
import json
import platform
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata as importlib_metadata
from pathlib import Path
from typing import Any, Dict, List, Optional

from loguru import logger

from .report import ExperimentReport
from ..measure.grid import GridField
from ..measure.raster import write_gf01, write_ppm


TRACKED_PACKAGES = (
    "numpy", "scipy", "numba", "mpmath", "pandas", "scikit-image", "pydantic", "click", "loguru",
)


def package_versions() -> Dict[str, str]:
    versions = {}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = importlib_metadata.version(name)
        except importlib_metadata.PackageNotFoundError:
            versions[name] = "not installed"
    return versions


@dataclass
class OutputBundle:
    """Files of one run under ``root``."""
    root: Path
    files: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.root = Path(self.root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _track(self, path: Path) -> Path:
        rel = path.relative_to(self.root).as_posix()
        if rel not in self.files:
            self.files.append(rel)
        return path

    def add_field(self, name: str, field_: GridField) -> Path:
        """fields/<name>.gf01 plus a P6 preview."""
        path = write_gf01(field_, self.root / "fields" / f"{name}.gf01")
        self._track(path)
        self._track(write_ppm(field_, self.root / "fields" / f"{name}.ppm"))
        return path

    def add_polyline(self, name: str, polyline) -> Path:
        return self._track(polyline.save_csv(self.root / "polylines" / f"{name}.csv"))

    def add_json(self, name: str, data: Dict[str, Any]) -> Path:
        path = self.root / f"{name}.json"
        path.write_text(json.dumps(data, indent=2, sort_keys=True, default=str))
        return self._track(path)

    def write_report(self, report: ExperimentReport) -> Path:
        body = report.to_csv()
        path = self.root / "report.csv"
        path.write_text(body, encoding="utf-8")
        self._track(path)
        self._track(self._write_text("checks.csv", report.checks_csv()))
        return path

    def _write_text(self, name: str, text: str) -> Path:
        path = self.root / name
        path.write_text(text, encoding="utf-8")
        return path

    def calculate_checksum(self) -> str:
        """sha256 over report.csv."""
        path = self.root / "report.csv"
        return hashlib.sha256(path.read_bytes()).hexdigest() if path.exists() else ""

    def write_metadata(self, report: ExperimentReport, extra: Optional[Dict[str, Any]] = None) -> Path:
        meta = {
            "experiment": report.experiment,
            "config_hash": report.config_hash,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "wall_time": report.wall_time,
            "python": sys.version.split()[0],
            "platform": platform.platform(),
            "versions": package_versions(),
            "checksum": self.calculate_checksum(),
            "overall_pass": report.overall_pass,
            "exit_code": report.exit_code,
            "checks": [c.to_dict() for c in report.checks],
            "thresholds": report.thresholds,
            "files": sorted(self.files),
            **report.metadata,
            **(extra or {}),
        }
        path = self.root / "metadata.json"
        path.write_text(json.dumps(meta, indent=2, default=str))
        logger.info(f"wrote {len(self.files)} files and metadata.json to {self.root}")
        return path

    def validate_structure(self) -> List[str]:
        errors = []
        for required in ("report.csv", "metadata.json"):
            if not (self.root / required).exists():
                errors.append(f"Missing required file: {required}")
        meta_path = self.root / "metadata.json"
        if meta_path.exists():
            try:
                meta = json.loads(meta_path.read_text())
                for key in ("config_hash", "versions", "wall_time", "checksum"):
                    if key not in meta:
                        errors.append(f"Missing required metadata field: {key}")
                if meta.get("checksum") != self.calculate_checksum():
                    errors.append("report.csv checksum mismatch")
            except json.JSONDecodeError as e:
                errors.append(f"Invalid JSON in metadata.json: {e}")
        return errors
