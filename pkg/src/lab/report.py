"""Experiment reports: measurement rows, pass/fail checks and exit codes."""

import io
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..core.errors import DynLabError


FLOAT_FORMAT = "%.17g"
COMMON_COLUMNS = ["experiment", "config_hash", "item"]
TRAILING_COLUMNS = ["error"]
CHECK_COLUMNS = ["experiment", "config_hash", "check", "status", "measured", "threshold", "message"]


class CheckStatus(Enum):
    """Check evaluation status."""
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"
    ERROR = "error"


@dataclass
class CheckResult:
    """Result of a single acceptance check."""
    name: str
    status: CheckStatus
    message: str
    measured: Optional[float] = None
    threshold: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "check": self.name,
            "status": self.status.value,
            "measured": self.measured,
            "threshold": self.threshold,
            "message": self.message,
            "details": self.details,
        }


def check_at_least(name: str, measured: Optional[float], threshold: float, what: str) -> CheckResult:
    if measured is None or not np.isfinite(measured):
        return CheckResult(name, CheckStatus.ERROR, f"{what}: no measurement", measured, threshold)
    ok = measured >= threshold
    return CheckResult(
        name, CheckStatus.PASS if ok else CheckStatus.FAIL,
        f"{what} {measured:.6g} {'>=' if ok else '<'} {threshold:g}", float(measured), threshold,
    )


def check_below(name: str, measured: Optional[float], threshold: float, what: str) -> CheckResult:
    if measured is None or not np.isfinite(measured):
        return CheckResult(name, CheckStatus.ERROR, f"{what}: no measurement", measured, threshold)
    ok = measured < threshold
    return CheckResult(
        name, CheckStatus.PASS if ok else CheckStatus.FAIL,
        f"{what} {measured:.6g} {'<' if ok else '>='} {threshold:g}", float(measured), threshold,
    )


def _cell(value: Any) -> Any:
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    if isinstance(value, (list, dict, tuple)):
        return json.dumps(value, sort_keys=True)
    if isinstance(value, np.generic):
        return value.item()
    return value


@dataclass
class ExperimentReport:
    """Rows and checks of one experiment run."""
    experiment: str
    config_hash: str
    columns: List[str]
    thresholds: Dict[str, float] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    checks: List[CheckResult] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    def add_row(self, item: str, error: Optional[str] = None, **values: Any) -> Dict[str, Any]:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"columns not in the {self.experiment} schema: {sorted(unknown)}")
        row = {"experiment": self.experiment, "config_hash": self.config_hash, "item": item,
               **values, "error": error or ""}
        self.rows.append(row)
        return row

    def add_check(self, check: CheckResult) -> None:
        self.checks.append(check)

    def add_error(self, name: str, error: DynLabError | str) -> None:
        self.checks.append(CheckResult(name, CheckStatus.ERROR, str(error)))

    @property
    def all_columns(self) -> List[str]:
        return COMMON_COLUMNS + self.columns + TRAILING_COLUMNS

    @property
    def overall_pass(self) -> bool:
        return all(c.status in (CheckStatus.PASS, CheckStatus.INFO) for c in self.checks)

    @property
    def exit_code(self) -> int:
        """0 pass, 1 a measured criterion unmet, 3 a criterion could not be measured."""
        statuses = {c.status for c in self.checks}
        if CheckStatus.ERROR in statuses:
            return 3
        if CheckStatus.FAIL in statuses:
            return 1
        return 0

    def to_frame(self) -> pd.DataFrame:
        data = [{k: _cell(row.get(k)) for k in self.all_columns} for row in self.rows]
        return pd.DataFrame(data, columns=self.all_columns)

    def checks_frame(self) -> pd.DataFrame:
        data = [
            {"experiment": self.experiment, "config_hash": self.config_hash, "check": c.name,
             "status": c.status.value, "measured": c.measured, "threshold": c.threshold, "message": c.message}
            for c in self.checks
        ]
        return pd.DataFrame(data, columns=CHECK_COLUMNS)

    def to_csv(self) -> str:
        """report.csv body; identical configs give identical bytes."""
        buf = io.StringIO()
        self.to_frame().to_csv(buf, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buf.getvalue()

    def checks_csv(self) -> str:
        buf = io.StringIO()
        self.checks_frame().to_csv(buf, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buf.getvalue()

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "experiment": self.experiment,
            "config_hash": self.config_hash,
            "overall_pass": self.overall_pass,
            "exit_code": self.exit_code,
            "thresholds": self.thresholds,
            "checks": [c.to_dict() for c in self.checks],
            "rows": len(self.rows),
            "wall_time": self.wall_time,
        }
