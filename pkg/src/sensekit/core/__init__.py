"""Sensor registry, configuration, samples and the session time-base."""

from sensekit.core.sensors import (
    ANDROID,
    BUILTIN_PROFILES,
    DEVICE_MOTION_SENSORS,
    EVENT_DRIVEN_SENSORS,
    IOS,
    AccuracyMode,
    Availability,
    PlatformProfile,
    Role,
    SensorConfig,
    SensorSample,
    SensorType,
    format_platform_profile,
    get_platform_profile,
    is_sensor_available,
    parse_platform_profile,
)
from sensekit.core.clock import (
    RealTimeBase,
    SessionClock,
    SimulatedTimeBase,
    TimeBase,
    new_session_clock,
    session_timestamp,
)
from sensekit.core.manager import SensorManager, SensorState

__all__ = [
    "ANDROID",
    "BUILTIN_PROFILES",
    "DEVICE_MOTION_SENSORS",
    "EVENT_DRIVEN_SENSORS",
    "IOS",
    "AccuracyMode",
    "Availability",
    "PlatformProfile",
    "RealTimeBase",
    "Role",
    "SensorConfig",
    "SensorManager",
    "SensorSample",
    "SensorState",
    "SensorType",
    "SessionClock",
    "SimulatedTimeBase",
    "TimeBase",
    "format_platform_profile",
    "get_platform_profile",
    "is_sensor_available",
    "new_session_clock",
    "parse_platform_profile",
    "session_timestamp",
]
