"""Exception hierarchy for dynlab with CLI exit codes."""

from typing import Any, Dict, Optional


class DynLabError(Exception):
    """Base error with actionable message and optional details."""

    exit_code: int = 3

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        msg = self.message
        if self.details:
            extra = ", ".join(f"{k}={v}" for k, v in self.details.items())
            msg += f" ({extra})"
        return msg

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "details": self.details,
        }


class InvalidConfigError(DynLabError):
    """Configuration could not be loaded or failed validation."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None, value: Any = None):
        details: Dict[str, Any] = {}
        if path:
            details["path"] = path
        if value is not None:
            details["value"] = value
        super().__init__(message, details)
        self.path = path
        self.value = value


class NumericalError(DynLabError):
    """A numerical procedure failed or lost meaning."""

    exit_code = 3


# cfrac

class PrecisionExhaustedError(NumericalError):
    """Digit extraction ran out of working precision."""


class InvalidScheduleError(NumericalError):
    """Perturbation schedule parameters are inconsistent."""

    exit_code = 2


# maps

class DegenerateParameterError(NumericalError):
    """Rotation parameter collides a fixed point with 0."""


class NoConvergenceError(NumericalError):
    """Root finder did not converge."""


class SearchFailureError(NumericalError):
    """Doubling search for a quadratic-like radius failed."""


# siegel

class ResonantDenominatorError(NumericalError):
    """Small denominator lambda^k - lambda vanished at working precision."""


class UnstableEstimateError(NumericalError):
    """Radius regression residual exceeds threshold."""


class SeriesDivergenceError(NumericalError):
    """Requested radius exceeds the validated convergence of the series."""


class ZeroComponentError(NumericalError):
    """Cell containing 0 was excluded from a restricted field."""


# measure

class BboxTooSmallError(NumericalError):
    """A non-escaping cell touches the bounding box boundary."""


class EmptyRegionError(NumericalError):
    """Reference region has no decided member cells."""


class RadiusBelowResolutionError(NumericalError):
    """Ball radius is below three cell sides."""


class InsufficientScalesError(NumericalError):
    """Box counting needs at least four usable scales."""


# fatou

class NoSigmaError(NumericalError):
    """Nonzero fixed point near 0 could not be located."""


class AbelResidualExceededError(NumericalError):
    """Chart failed its Abel residual tolerance on the validation sample."""


class OutsidePetalError(NumericalError):
    """Point lies outside the chart's validated petal region."""


class NewtonDivergenceError(NumericalError):
    """Inverse Fatou coordinate iteration diverged."""


class NoReturnError(NumericalError):
    """Orbit did not return to the fundamental strip within the allowed count."""
