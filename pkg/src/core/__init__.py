"""Core components of dynlab"""

from .config import LabConfig
from .errors import DynLabError, InvalidConfigError, NumericalError

__all__ = ["LabConfig", "DynLabError", "InvalidConfigError", "NumericalError"]
