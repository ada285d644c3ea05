"""Sensor kinds, platform availability profiles, configuration and samples."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

from sensekit.errors import InvalidConfig, ParseError, UnknownProfile, UnknownSensor


class SensorType(str, Enum):
    """The sensing modules a device can expose. Values are canonical names."""

    ACCELEROMETER = "Accelerometer"
    GRAVITY = "Gravity"
    LINEAR_ACCELERATION = "LinearAcceleration"
    GYROSCOPE = "Gyroscope"
    ROTATION = "Rotation"
    MAGNETOMETER = "Magnetometer"
    PEDOMETER = "Pedometer"
    ALTIMETER = "Altimeter"
    HUMIDITY = "Humidity"
    LIGHT = "Light"
    AMBIENT_TEMPERATURE = "AmbientTemperature"
    LOCATION = "Location"
    MOTION_ACTIVITY = "MotionActivity"
    BATTERY = "Battery"
    SCREEN_STATUS = "ScreenStatus"
    MICROPHONE = "Microphone"
    BLUETOOTH_CLASSIC = "BluetoothClassic"
    IBEACON_PROXIMITY = "IBeaconProximity"
    EDDYSTONE_PROXIMITY = "EddystoneProximity"

    @property
    def canonical_name(self) -> str:
        return self.value

    @property
    def kebab_name(self) -> str:
        return re.sub(r"(?<!^)(?=[A-Z])", "-", self.value).lower().replace("i-beacon", "ibeacon")

    @property
    def is_event_driven(self) -> bool:
        return self in EVENT_DRIVEN_SENSORS

    @property
    def is_beacon(self) -> bool:
        return self in BEACON_SENSORS

    @classmethod
    def parse(cls, name: str) -> "SensorType":
        """Look up a sensor by canonical, kebab-case or loosely-cased name."""
        key = name.strip().replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        if key in _SENSOR_ALIASES:
            return _SENSOR_ALIASES[key]
        raise UnknownSensor(f"unknown sensor {name!r}")

    def __str__(self) -> str:
        return self.value


EVENT_DRIVEN_SENSORS = frozenset(
    {SensorType.BATTERY, SensorType.SCREEN_STATUS, SensorType.MOTION_ACTIVITY, SensorType.PEDOMETER}
)
BEACON_SENSORS = frozenset({SensorType.IBEACON_PROXIMITY, SensorType.EDDYSTONE_PROXIMITY})
# Fused outputs that iOS serves from its single Device Motion sensor.
DEVICE_MOTION_SENSORS = frozenset({SensorType.GRAVITY, SensorType.LINEAR_ACCELERATION, SensorType.ROTATION})

_SENSOR_ALIASES = {
    "ibeacon": SensorType.IBEACON_PROXIMITY,
    "eddystone": SensorType.EDDYSTONE_PROXIMITY,
    "bluetooth": SensorType.BLUETOOTH_CLASSIC,
    "temperature": SensorType.AMBIENT_TEMPERATURE,
    "screen": SensorType.SCREEN_STATUS,
    "activity": SensorType.MOTION_ACTIVITY,
    "gps": SensorType.LOCATION,
}


class Availability(str, Enum):
    FULL = "full"
    SCAN_ONLY = "scan-only"
    UNAVAILABLE = "unavailable"

    @property
    def display_name(self) -> str:
        return {"full": "Full", "scan-only": "ScanOnly", "unavailable": "Unavailable"}[self.value]


class AccuracyMode(str, Enum):
    BEST = "Best"
    BALANCED = "Balanced"
    LOW_POWER = "LowPower"


class Role(str, Enum):
    SCAN = "Scan"
    BROADCAST = "Broadcast"


@dataclass(frozen=True)
class PlatformProfile:
    name: str
    availability: Mapping[SensorType, Availability]

    def __post_init__(self) -> None:
        missing = [t.value for t in SensorType if t not in self.availability]
        if missing:
            raise ValueError(f"profile {self.name!r} lacks entries for {', '.join(missing)}")
        object.__setattr__(self, "availability", MappingProxyType(dict(self.availability)))

    def mode(self, sensor_type: SensorType) -> Availability:
        return self.availability[sensor_type]


def _profile(name: str, overrides: Mapping[SensorType, Availability]) -> PlatformProfile:
    table = {t: overrides.get(t, Availability.FULL) for t in SensorType}
    return PlatformProfile(name, table)


IOS = _profile(
    "ios",
    {
        SensorType.HUMIDITY: Availability.UNAVAILABLE,
        SensorType.LIGHT: Availability.UNAVAILABLE,
        SensorType.AMBIENT_TEMPERATURE: Availability.UNAVAILABLE,
        SensorType.BLUETOOTH_CLASSIC: Availability.UNAVAILABLE,
        SensorType.EDDYSTONE_PROXIMITY: Availability.SCAN_ONLY,
    },
)
ANDROID = _profile("android", {SensorType.BLUETOOTH_CLASSIC: Availability.SCAN_ONLY})

BUILTIN_PROFILES: Mapping[str, PlatformProfile] = MappingProxyType({"ios": IOS, "android": ANDROID})


def is_sensor_available(sensor_type: SensorType, profile: PlatformProfile) -> Availability:
    return profile.mode(sensor_type)


def parse_platform_profile(text: str, name: str = "custom") -> PlatformProfile:
    """Parse ``<canonical-name>=<full|scan-only|unavailable>`` lines.

    Blank lines and ``#`` comments are ignored. Every sensor must appear
    exactly once.
    """
    by_name = {t.value: t for t in SensorType}
    table: dict[SensorType, Availability] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"expected '<sensor>=<mode>', got {line!r}", line=lineno)
        key, value = key.strip(), value.strip()
        if key not in by_name:
            raise ParseError(f"unknown sensor name {key!r}", line=lineno)
        try:
            mode = Availability(value)
        except ValueError:
            raise ParseError(f"unknown availability {value!r}", line=lineno) from None
        sensor = by_name[key]
        if sensor in table:
            raise ParseError(f"duplicate entry for {key}", line=lineno)
        table[sensor] = mode
    missing = [t.value for t in SensorType if t not in table]
    if missing:
        raise ParseError(f"profile lacks entries for {', '.join(missing)}")
    return PlatformProfile(name, table)


def format_platform_profile(profile: PlatformProfile) -> str:
    return "".join(f"{t.value}={profile.mode(t).value}\n" for t in SensorType)


def get_platform_profile(name_or_path: str | Path) -> PlatformProfile:
    """Resolve a built-in profile name or load a profile file."""
    key = str(name_or_path)
    if key.lower() in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[key.lower()]
    path = Path(key)
    if not path.is_file():
        raise UnknownProfile(f"no such platform profile: {key}")
    return parse_platform_profile(path.read_text(encoding="utf-8"), name=path.stem)


# Default clocked rates used when a config omits one.
DEFAULT_RATES_HZ: Mapping[SensorType, float] = MappingProxyType(
    {
        SensorType.ACCELEROMETER: 100.0,
        SensorType.GRAVITY: 100.0,
        SensorType.LINEAR_ACCELERATION: 100.0,
        SensorType.GYROSCOPE: 100.0,
        SensorType.ROTATION: 100.0,
        SensorType.MAGNETOMETER: 100.0,
        SensorType.ALTIMETER: 1.0,
        SensorType.HUMIDITY: 1.0,
        SensorType.LIGHT: 1.0,
        SensorType.AMBIENT_TEMPERATURE: 1.0,
        SensorType.LOCATION: 1.0,
        SensorType.MICROPHONE: 44100.0,
        SensorType.BLUETOOTH_CLASSIC: 0.1,
        SensorType.IBEACON_PROXIMITY: 1.0,
        SensorType.EDDYSTONE_PROXIMITY: 1.0,
    }
)


@dataclass(frozen=True)
class SensorConfig:
    """Tunable parameters for one sensor.

    ``beacon_identity`` is the frame a beacon sensor advertises when
    broadcasting: an ``IBeaconFrame`` for iBeacon, optionally an Eddystone
    UID/URL frame for Eddystone.
    """

    sensor_type: SensorType
    sample_rate_hz: float | None = None
    accuracy: AccuracyMode | None = None
    roles: frozenset[Role] = field(default_factory=frozenset)
    beacon_identity: Any = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "roles", frozenset(self.roles))

    @classmethod
    def default(cls, sensor_type: SensorType, **overrides: Any) -> "SensorConfig":
        kwargs: dict[str, Any] = {"sample_rate_hz": DEFAULT_RATES_HZ.get(sensor_type)}
        if sensor_type is SensorType.LOCATION:
            kwargs["accuracy"] = AccuracyMode.BEST
        if sensor_type.is_beacon:
            kwargs["roles"] = frozenset({Role.SCAN})
        kwargs.update(overrides)
        return cls(sensor_type, **kwargs)

    def validate(self) -> None:
        """Raise InvalidConfig if any field is inconsistent with the sensor type."""
        st = self.sensor_type
        rate = self.sample_rate_hz
        if st.is_event_driven:
            if rate is not None:
                raise InvalidConfig(f"{st} is event-driven and takes no sample rate")
        else:
            if rate is None:
                raise InvalidConfig(f"{st} requires a sample rate")
            if isinstance(rate, bool) or not isinstance(rate, (int, float)):
                raise InvalidConfig(f"{st} sample rate must be a number")
            if not math.isfinite(rate) or rate <= 0:
                raise InvalidConfig(f"{st} sample rate must be positive, got {rate}")

        if st is SensorType.LOCATION:
            if not isinstance(self.accuracy, AccuracyMode):
                raise InvalidConfig("Location requires an accuracy mode")
        elif self.accuracy is not None:
            raise InvalidConfig(f"accuracy mode applies to Location only, not {st}")

        if st.is_beacon:
            if not self.roles:
                raise InvalidConfig(f"{st} needs at least one role")
            if not all(isinstance(r, Role) for r in self.roles):
                raise InvalidConfig(f"{st} roles must be Role members")
        elif self.roles:
            raise InvalidConfig(f"roles apply to beacon sensors only, not {st}")

        broadcasting = Role.BROADCAST in self.roles
        if st is SensorType.IBEACON_PROXIMITY:
            from sensekit.beacon.frames import IBeaconFrame

            if broadcasting and not isinstance(self.beacon_identity, IBeaconFrame):
                raise InvalidConfig("iBeacon broadcast requires an IBeaconFrame identity")
            if not broadcasting and self.beacon_identity is not None:
                raise InvalidConfig("beacon identity given without the Broadcast role")
        elif st is SensorType.EDDYSTONE_PROXIMITY:
            from sensekit.beacon.frames import EddystoneUid, EddystoneUrl

            if self.beacon_identity is not None:
                if not broadcasting:
                    raise InvalidConfig("beacon identity given without the Broadcast role")
                if not isinstance(self.beacon_identity, (EddystoneUid, EddystoneUrl)):
                    raise InvalidConfig("Eddystone broadcast identity must be a UID or URL frame")
        elif self.beacon_identity is not None:
            raise InvalidConfig(f"beacon identity applies to beacon sensors only, not {st}")


@dataclass(frozen=True)
class SensorSample:
    """One timestamped reading. ``timestamp_nanos`` counts from session start."""

    sensor_type: SensorType
    timestamp_nanos: int
    payload: Any

    def __post_init__(self) -> None:
        if isinstance(self.timestamp_nanos, bool) or not isinstance(self.timestamp_nanos, int):
            raise TypeError("timestamp_nanos must be an int")
        if self.timestamp_nanos < 0:
            raise ValueError("timestamp_nanos must be non-negative")

    @property
    def relative_seconds(self) -> float:
        return self.timestamp_nanos / 1e9
