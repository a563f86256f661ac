"""Core package initialization."""

from spinform.core.base import PIPELINES, RunConfig, SolverConfig, ToleranceGate
from spinform.core.constants import (
    DEFAULT_RESOLUTION,
    MAX_GENERATORS,
    MIN_RESOLUTION,
    REPORT_SCHEMA_VERSION,
)
from spinform.core.exceptions import (
    DegenerateMetricError,
    FrameDiscontinuityError,
    PoleError,
    SceneError,
    SignatureMismatchError,
    SpinformError,
    SpinGroupError,
)

__all__ = [
    # Constants
    "DEFAULT_RESOLUTION",
    "MAX_GENERATORS",
    "MIN_RESOLUTION",
    "REPORT_SCHEMA_VERSION",
    # Config dataclasses
    "PIPELINES",
    "RunConfig",
    "SolverConfig",
    "ToleranceGate",
    # Exceptions
    "DegenerateMetricError",
    "FrameDiscontinuityError",
    "PoleError",
    "SceneError",
    "SignatureMismatchError",
    "SpinformError",
    "SpinGroupError",
]
