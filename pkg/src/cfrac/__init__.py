"""Continued fractions, approximants, Brjuno sums and perturbation schedules"""

from .rotation import RotationNumber, cf_expand, cf_eval, convergent
from .convergents import Approximant, approximants, brjuno_sum, denominators, is_high_type
from .schedule import (
    ThetaSchedule,
    an_condition_report,
    an_rule,
    brjuno_divergence_witness,
    perturbed_rotation,
    shared_convergents,
    theta_schedule,
)

__all__ = [
    "RotationNumber",
    "cf_expand",
    "cf_eval",
    "convergent",
    "Approximant",
    "approximants",
    "brjuno_sum",
    "denominators",
    "is_high_type",
    "ThetaSchedule",
    "an_condition_report",
    "an_rule",
    "brjuno_divergence_witness",
    "perturbed_rotation",
    "shared_convergents",
    "theta_schedule",
]
