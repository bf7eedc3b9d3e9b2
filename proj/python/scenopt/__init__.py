"""Scenario-based minimum-variance portfolio optimization with shortfall constraints."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    ScenoptError,
    DimensionError,
    ValidationError,
    InfeasibleBoundsError,
    ConfigError,
    IoError,
    FormatError,
    InsufficientDataError,
    ComplexityGuardError,
)

__version__ = "0.1.0"
