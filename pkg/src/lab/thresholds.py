"""Shared pass/fail constants for every experiment.

Each experiment reads its tolerances from one table so that reports can carry
the exact values in force next to every measurement.
"""

from typing import Dict


DEFAULT_THRESHOLDS: Dict[str, float] = {
    # A_n schedules
    "an_log_degree": 3.0,
    "an_root_log_factor": 1.0,
    # density persistence
    "dens_min": 0.45,
    "dens_invariant": 0.99,
    "horizon_drift": 0.01,
    # area persistence
    "area_ratio_min": 0.8,
    "refinement_c": 2.0,
    # deep points
    "profile_noise": 0.02,
    "profile_final": 0.95,
    # fatou charts
    "abel_median": 1e-3,
    "abel_p95": 1e-2,
    "normalization": 1e-9,
    "multiplier_arg": 0.01,
    "holomorphy_defect": 0.05,
    "window_shift": 0.1,
    "sector_pass": 0.95,
    "sector_edge": 1e-3,
    # dimension
    "max_dimension": 1.98,
    "dimension_drift": 0.1,
    "segment_tol": 0.05,
}


class ThresholdProfile:
    """Named threshold profiles."""

    DEFAULT = DEFAULT_THRESHOLDS

    # looser grid tolerances for quick runs at reduced resolution
    QUICK = {
        **DEFAULT_THRESHOLDS,
        "dens_min": 0.4,
        "horizon_drift": 0.02,
        "dimension_drift": 0.15,
    }

    @classmethod
    def get_profile(cls, profile_name: str) -> Dict[str, float]:
        """Get threshold profile by name."""
        profiles = {
            "default": cls.DEFAULT,
            "quick": cls.QUICK,
        }
        return dict(profiles.get(profile_name.lower(), cls.DEFAULT))
