"""Battery lifetime model calibrated from per-mode discharge measurements.

A profile records, for each sensing mode, how many hours a fully charged
battery lasted with only that mode active. Dividing capacity by hours gives
the mean current draw of the mode; subtracting the idle draw gives the
mode's overhead. Sets of modes are composed by summing overheads on top of
the idle baseline, and discharge is taken to be linear in time.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from sensekit.core.sensors import DEVICE_MOTION_SENSORS, Role, SensorConfig, SensorType
from sensekit.errors import InvalidSeries, InvariantViolation, ParseError, UnknownMode

log = logging.getLogger(__name__)

IDLE = "Idle"
ACCELEROMETER_100HZ = "Accelerometer@100Hz"
GYROSCOPE_100HZ = "Gyroscope@100Hz"
MAGNETOMETER_100HZ = "Magnetometer@100Hz"
DEVICE_MOTION_100HZ = "DeviceMotion@100Hz"
LOCATION_BEST = "Location@Best"
IBEACON_BROADCAST_1HZ = "IBeaconBroadcast@1Hz"
IBEACON_SCAN_1HZ = "IBeaconScan@1Hz"
IBEACON_SCAN_BROADCAST_1HZ = "IBeaconScanBroadcast@1Hz"
MICROPHONE_44100HZ = "Microphone@44100Hz"


@dataclass(frozen=True)
class EnergyProfile:
    device_name: str
    capacity_mah: float
    hours_lasted: Mapping[str, float]

    def __post_init__(self) -> None:
        if not (isinstance(self.capacity_mah, (int, float)) and math.isfinite(self.capacity_mah) and self.capacity_mah > 0):
            raise InvariantViolation(f"capacity must be positive, got {self.capacity_mah!r}")
        if IDLE not in self.hours_lasted:
            raise InvariantViolation(f"profile {self.device_name!r} has no {IDLE} baseline")
        for label, hours in self.hours_lasted.items():
            if not (isinstance(hours, (int, float)) and math.isfinite(hours) and hours > 0):
                raise InvariantViolation(f"hours lasted for {label} must be positive, got {hours!r}")
        object.__setattr__(self, "capacity_mah", float(self.capacity_mah))
        object.__setattr__(self, "hours_lasted", MappingProxyType({k: float(v) for k, v in self.hours_lasted.items()}))

    @property
    def modes(self) -> list[str]:
        return list(self.hours_lasted)


# iPhone 5S, iOS 9.0.2, flight mode, low power mode on; 1560 mAh battery.
IPHONE_5S = EnergyProfile(
    "iPhone 5S",
    1560.0,
    {
        IDLE: 51.27,
        ACCELEROMETER_100HZ: 31.51,
        GYROSCOPE_100HZ: 28.15,
        MAGNETOMETER_100HZ: 34.45,
        DEVICE_MOTION_100HZ: 21.07,
        LOCATION_BEST: 17.42,
        IBEACON_BROADCAST_1HZ: 46.43,
        IBEACON_SCAN_1HZ: 25.21,
        IBEACON_SCAN_BROADCAST_1HZ: 25.26,
        MICROPHONE_44100HZ: 35.41,
    },
)

BUILTIN_ENERGY_PROFILES: Mapping[str, EnergyProfile] = MappingProxyType({"iphone5s": IPHONE_5S})

# Modes measured together, mapped to the single-mode rows they combine.
MEASURED_COMBINATIONS: Mapping[str, frozenset[str]] = MappingProxyType(
    {IBEACON_SCAN_BROADCAST_1HZ: frozenset({IBEACON_SCAN_1HZ, IBEACON_BROADCAST_1HZ})}
)

_CATEGORIES = {
    "Accelerometer": "motion",
    "Gyroscope": "motion",
    "Magnetometer": "motion",
    "DeviceMotion": "motion",
    "Location": "location",
    "IBeaconScan": "radio",
    "IBeaconBroadcast": "radio",
    "IBeaconScanBroadcast": "radio",
    "EddystoneScan": "radio",
    "EddystoneBroadcast": "radio",
    "EddystoneScanBroadcast": "radio",
    "Microphone": "audio",
}


def _hours(profile: EnergyProfile, mode: str) -> float:
    try:
        return profile.hours_lasted[mode]
    except KeyError:
        raise UnknownMode(f"mode {mode!r} is not in profile {profile.device_name!r}") from None


def current_draw(profile: EnergyProfile, mode: str) -> float:
    """Mean draw in mA that empties the battery in the mode's measured time."""
    return profile.capacity_mah / _hours(profile, mode)


def overhead_draw(profile: EnergyProfile, mode: str) -> float:
    """Draw in mA on top of the idle baseline, clamped at zero."""
    overhead = current_draw(profile, mode) - current_draw(profile, IDLE)
    if overhead < 0:
        log.warning("mode %s measured cheaper than idle (%.3f mA); treating overhead as 0", mode, overhead)
        return 0.0
    return overhead


def predict_lifetime(profile: EnergyProfile, modes: Iterable[str]) -> float:
    """Hours until empty with ``modes`` active; the idle baseline is always included."""
    active = [m for m in dict.fromkeys(modes) if m != IDLE]
    # fsum is exact-then-rounded, so the result does not depend on mode order.
    draw = math.fsum([current_draw(profile, IDLE)] + [overhead_draw(profile, m) for m in active])
    return profile.capacity_mah / draw


def mode_category(mode: str) -> str:
    base = mode.split("@", 1)[0]
    return _CATEGORIES.get(base, base)


def composition_caveats(profile: EnergyProfile, modes: Iterable[str]) -> list[str]:
    """Human-readable warnings about how far a multi-mode prediction can be trusted."""
    active = frozenset(m for m in modes if m != IDLE)
    if len(active) < 2:
        return []
    notes = [f"additive model: {len(active)} modes composed as idle draw plus summed per-mode overheads"]
    for combined, parts in MEASURED_COMBINATIONS.items():
        if parts == active and combined in profile.hours_lasted:
            measured = profile.hours_lasted[combined]
            predicted = predict_lifetime(profile, active)
            error = 100.0 * (predicted - measured) / measured
            notes.append(f"measured {combined}: {measured:.2f} h; additive-model error {error:+.1f}%")
    categories = sorted({mode_category(m) for m in active})
    if len(categories) > 1:
        notes.append(f"composition across {', '.join(categories)} sensors has no calibration data")
    return notes


@dataclass(frozen=True)
class DischargeSeries:
    """Battery level (0..1) sampled at increasing times in hours."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        pts = tuple((float(t), float(level)) for t, level in self.points)
        if not pts:
            raise InvalidSeries("discharge series is empty")
        for i, (t, level) in enumerate(pts):
            if not (math.isfinite(t) and math.isfinite(level)) or not 0.0 <= level <= 1.0:
                raise InvalidSeries(f"point {i} ({t}, {level}) is outside the valid range")
            if i and (t <= pts[i - 1][0] or level > pts[i - 1][1]):
                raise InvalidSeries(f"point {i}: times must increase and levels must not")
        object.__setattr__(self, "points", pts)

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.points]

    @property
    def levels(self) -> list[float]:
        return [level for _, level in self.points]

    def level_at(self, hours: float) -> float:
        """Linear interpolation, held constant beyond the ends."""
        pts = self.points
        if hours <= pts[0][0]:
            return pts[0][1]
        for (t0, l0), (t1, l1) in zip(pts, pts[1:]):
            if hours <= t1:
                return l0 + (l1 - l0) * (hours - t0) / (t1 - t0)
        return pts[-1][1]


def simulate_discharge(profile: EnergyProfile, modes: Iterable[str], step_minutes: float) -> DischargeSeries:
    """Linear discharge at the predicted draw, sampled every ``step_minutes``.

    The series starts full and ends at the first step where the level is 0.
    """
    if not (isinstance(step_minutes, (int, float)) and math.isfinite(step_minutes) and step_minutes > 0):
        raise ValueError(f"step must be positive, got {step_minutes!r}")
    lifetime = predict_lifetime(profile, modes)
    step_hours = step_minutes / 60.0
    points = []
    k = 0
    while True:
        t = k * step_hours
        level = max(0.0, 1.0 - t / lifetime)
        points.append((t, level))
        if level == 0.0:
            return DischargeSeries(tuple(points))
        k += 1


# -- profile files ------------------------------------------------------------


def parse_profile(text: str) -> EnergyProfile:
    """Parse ``device=``, ``capacity_mAh=`` and ``mode.<label>=<hours>`` lines."""
    device = None
    capacity = None
    hours: dict[str, float] = {}

    def number(value: str, lineno: int) -> float:
        try:
            return float(value)
        except ValueError:
            raise ParseError(f"expected a number, got {value!r}", line=lineno) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ParseError(f"expected 'key=value', got {line!r}", line=lineno)
        if key == "device":
            device = value
        elif key == "capacity_mAh":
            capacity = number(value, lineno)
        elif key.startswith("mode.") and len(key) > 5:
            label = key[5:]
            if label in hours:
                raise ParseError(f"duplicate mode {label!r}", line=lineno)
            hours[label] = number(value, lineno)
        else:
            raise ParseError(f"unknown key {key!r}", line=lineno)
    if device is None:
        raise ParseError("missing 'device=' line")
    if capacity is None:
        raise ParseError("missing 'capacity_mAh=' line")
    return EnergyProfile(device, capacity, hours)


def format_profile(profile: EnergyProfile) -> str:
    lines = [f"device={profile.device_name}", f"capacity_mAh={profile.capacity_mah:g}"]
    lines += [f"mode.{label}={h:g}" for label, h in profile.hours_lasted.items()]
    return "\n".join(lines) + "\n"


def load_profile(source: str | Path) -> EnergyProfile:
    """Load a built-in profile by name (``iphone5s``) or a profile file."""
    key = str(source)
    if key.lower() in BUILTIN_ENERGY_PROFILES:
        return BUILTIN_ENERGY_PROFILES[key.lower()]
    path = Path(key)
    if not path.is_file():
        raise UnknownMode(f"no such energy profile: {key}")
    return parse_profile(path.read_text(encoding="utf-8"))


# -- mode names ---------------------------------------------------------------


def _kebab(text: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "-", text).lower().replace("i-beacon", "ibeacon")


def mode_aliases(label: str) -> list[str]:
    """CLI spellings of a mode label, e.g. ``Location@Best`` -> ``location-best``."""
    base, _, qualifier = label.partition("@")
    if not qualifier:
        return [_kebab(base)]
    full = f"{_kebab(base)}-{qualifier.lower()}"
    if qualifier.lower().endswith("hz"):
        return [_kebab(base), full]
    return [full]


def resolve_mode(profile: EnergyProfile, name: str) -> str:
    """Map an exact label or its kebab-case alias to a profile label."""
    if name in profile.hours_lasted:
        return name
    wanted = name.strip().lower()
    matches = [label for label in profile.hours_lasted if wanted in mode_aliases(label)]
    if len(matches) == 1:
        return matches[0]
    if matches:
        raise UnknownMode(f"mode {name!r} is ambiguous: {', '.join(matches)}")
    raise UnknownMode(f"mode {name!r} is not in profile {profile.device_name!r}")


def _rate(hz: float) -> str:
    return f"{hz:g}Hz"


def modes_for_configs(configs: Iterable[SensorConfig]) -> set[str]:
    """Energy-mode labels for a set of registered sensors.

    Any of Gravity, LinearAcceleration or Rotation counts once as Device
    Motion. Battery sensing is part of the idle baseline.
    """
    modes: set[str] = set()
    fused_rates = []
    for cfg in configs:
        st = cfg.sensor_type
        if st is SensorType.BATTERY:
            continue
        if st in DEVICE_MOTION_SENSORS:
            fused_rates.append(cfg.sample_rate_hz)
        elif st is SensorType.LOCATION:
            modes.add(f"Location@{cfg.accuracy.value}")
        elif st.is_beacon:
            family = "IBeacon" if st is SensorType.IBEACON_PROXIMITY else "Eddystone"
            role = "".join(r.value for r in (Role.SCAN, Role.BROADCAST) if r in cfg.roles)
            modes.add(f"{family}{role}@{_rate(cfg.sample_rate_hz)}")
        elif st.is_event_driven:
            modes.add(st.value)
        else:
            modes.add(f"{st.value}@{_rate(cfg.sample_rate_hz)}")
    if fused_rates:
        modes.add(f"DeviceMotion@{_rate(max(fused_rates))}")
    return modes
