"""Continuous-sensing toolkit: sensor registry, beacon proximity, export and energy modelling."""

from sensekit.core import (
    ANDROID,
    IOS,
    AccuracyMode,
    Availability,
    PlatformProfile,
    Role,
    SensorConfig,
    SensorManager,
    SensorSample,
    SensorType,
)

__version__ = "0.1.0"

__all__ = [
    "ANDROID",
    "IOS",
    "AccuracyMode",
    "Availability",
    "PlatformProfile",
    "Role",
    "SensorConfig",
    "SensorManager",
    "SensorSample",
    "SensorType",
    "__version__",
]
