"""Orbits with escape and domain-exit detection."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .domain import is_in_V
from ..core.errors import DegenerateParameterError


@dataclass
class OrbitRecord:
    """Trajectory truncated at escape, V-exit or horizon."""
    points: List[complex] = field(default_factory=list)
    escaped: bool = False
    escape_index: Optional[int] = None
    left_domain: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "length": len(self.points),
            "escaped": self.escaped,
            "escape_index": self.escape_index,
            "left_domain": self.left_domain,
        }


def orbit(fmap, z0: complex, horizon: int, R_escape: float = 10.0, restrict_to_V: bool = False) -> OrbitRecord:
    """
    Forward orbit z0, f(z0), ..., up to ``horizon`` steps.

    With ``restrict_to_V`` the orbit stops at the first point outside V and
    records its index in ``left_domain``.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    bound = 2.0
    try:
        bound = max(bound, max(abs(p) for p in fmap.nonzero_fixed_points()) + 1)
    except DegenerateParameterError:
        pass
    if R_escape <= bound:
        raise ValueError(f"R_escape must exceed {bound:.3g}")

    rec = OrbitRecord()
    z = complex(z0)
    for k in range(horizon + 1):
        rec.points.append(z)
        if abs(z) > R_escape:
            rec.escaped = True
            rec.escape_index = k
            break
        if restrict_to_V and not is_in_V(z):
            rec.left_domain = k
            break
        if k < horizon:
            z = complex(fmap.eval(z))
    return rec


def segment_distance(points: np.ndarray, curve: np.ndarray) -> np.ndarray:
    """Distance from each point to a closed polyline."""
    a = curve
    b = np.roll(curve, -1)
    ab = b - a
    denom = np.where(np.abs(ab) == 0, 1.0, np.abs(ab) ** 2)
    out = np.empty(len(points))
    for i, p in enumerate(np.asarray(points, dtype=complex)):
        t = np.clip(np.real((p - a) * np.conj(ab)) / denom, 0.0, 1.0)
        out[i] = np.min(np.abs(a + t * ab - p))
    return out


def postcritical_excursion(fmap, curve: np.ndarray, horizon: int, R_escape: float = 10.0) -> Dict[str, Any]:
    """
    Closest approach of each critical orbit to a closed curve.

    Used to confirm the postcritical set keeps a positive distance from the
    boundary of an r-disk.
    """
    rows = []
    for c, _ in fmap.critical_points():
        rec = orbit(fmap, c, horizon, R_escape)
        pts = np.array(rec.points[1:], dtype=complex)
        d = segment_distance(pts, curve) if len(pts) else np.array([np.inf])
        rows.append({
            "critical_point": c,
            "min_distance": float(np.min(d)),
            "escaped": rec.escaped,
        })
    return {"orbits": rows, "min_distance": min(r["min_distance"] for r in rows)}
