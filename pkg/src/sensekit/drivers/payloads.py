"""Per-sensor payload records and their schemas.

Every SensorType maps to exactly one payload class. The ordered field list
of each schema fixes both the CSV column order and the JSON key order.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping, NamedTuple

from sensekit.beacon.frames import EddystoneTlm, EddystoneUid, EddystoneUrl, IBeaconFrame
from sensekit.beacon.ranging import BeaconSighting
from sensekit.core.sensors import SensorType
from sensekit.errors import SchemaMismatch

QUATERNION_NORM_TOLERANCE = 1e-9


class Activity(str, Enum):
    STATIONARY = "Stationary"
    WALKING = "Walking"
    RUNNING = "Running"
    DRIVING = "Driving"
    CYCLING = "Cycling"


class Confidence(str, Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class BatteryState(str, Enum):
    UNPLUGGED = "Unplugged"
    CHARGING = "Charging"
    FULL = "Full"


class ScreenState(str, Enum):
    ON = "On"
    OFF = "Off"


class _Payload:
    """Coerces numeric fields so equal readings compare and serialize equally."""

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.type == "float":
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise TypeError(f"{type(self).__name__}.{f.name} must be a number, got {value!r}")
                object.__setattr__(self, f.name, float(value))
            elif f.type == "int":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise TypeError(f"{type(self).__name__}.{f.name} must be an int, got {value!r}")


@dataclass(frozen=True)
class Acceleration(_Payload):
    """Acceleration in g. Used by Accelerometer, Gravity and LinearAcceleration."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class RotationRate(_Payload):
    """Angular velocity in rad/s."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class Attitude(_Payload):
    """Unit quaternion (x, y, z, w)."""

    x: float
    y: float
    z: float
    w: float


@dataclass(frozen=True)
class MagneticField(_Payload):
    """Field strength in microtesla."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class PedometerData(_Payload):
    step_count: int
    distance_meters: float


@dataclass(frozen=True)
class AltimeterData(_Payload):
    relative_altitude_meters: float
    pressure_kpa: float


@dataclass(frozen=True)
class HumidityData(_Payload):
    percent: float


@dataclass(frozen=True)
class LightData(_Payload):
    lux: float


@dataclass(frozen=True)
class AmbientTemperatureData(_Payload):
    celsius: float


@dataclass(frozen=True)
class LocationData(_Payload):
    latitude: float
    longitude: float
    altitude_meters: float
    horizontal_accuracy_meters: float


@dataclass(frozen=True)
class MotionActivityData(_Payload):
    activity: Activity
    confidence: Confidence


@dataclass(frozen=True)
class BatteryData(_Payload):
    level: float
    state: BatteryState


@dataclass(frozen=True)
class ScreenStatusData(_Payload):
    status: ScreenState


@dataclass(frozen=True)
class MicrophoneData(_Payload):
    frame_index: int
    rms_amplitude: float


@dataclass(frozen=True)
class BluetoothDeviceData(_Payload):
    device_address: int
    device_name: str
    rssi: int


class Column(NamedTuple):
    name: str
    kind: str  # float | int | str | token | enum | uuid | hex | mac | fixed88
    enum: type[Enum] | None = None


def _c(name: str, kind: str = "float", enum: type[Enum] | None = None) -> Column:
    return Column(name, kind, enum)


_XYZ = (_c("x"), _c("y"), _c("z"))

PAYLOAD_CLASSES: Mapping[SensorType, type] = MappingProxyType(
    {
        SensorType.ACCELEROMETER: Acceleration,
        SensorType.GRAVITY: Acceleration,
        SensorType.LINEAR_ACCELERATION: Acceleration,
        SensorType.GYROSCOPE: RotationRate,
        SensorType.ROTATION: Attitude,
        SensorType.MAGNETOMETER: MagneticField,
        SensorType.PEDOMETER: PedometerData,
        SensorType.ALTIMETER: AltimeterData,
        SensorType.HUMIDITY: HumidityData,
        SensorType.LIGHT: LightData,
        SensorType.AMBIENT_TEMPERATURE: AmbientTemperatureData,
        SensorType.LOCATION: LocationData,
        SensorType.MOTION_ACTIVITY: MotionActivityData,
        SensorType.BATTERY: BatteryData,
        SensorType.SCREEN_STATUS: ScreenStatusData,
        SensorType.MICROPHONE: MicrophoneData,
        SensorType.BLUETOOTH_CLASSIC: BluetoothDeviceData,
        SensorType.IBEACON_PROXIMITY: BeaconSighting,
        SensorType.EDDYSTONE_PROXIMITY: BeaconSighting,
    }
)

# Payload columns, in order, after timestampNanos,relativeSeconds.
PAYLOAD_COLUMNS: Mapping[SensorType, tuple[Column, ...]] = MappingProxyType(
    {
        SensorType.ACCELEROMETER: _XYZ,
        SensorType.GRAVITY: _XYZ,
        SensorType.LINEAR_ACCELERATION: _XYZ,
        SensorType.GYROSCOPE: _XYZ,
        SensorType.ROTATION: _XYZ + (_c("w"),),
        SensorType.MAGNETOMETER: _XYZ,
        SensorType.PEDOMETER: (_c("stepCount", "int"), _c("distanceMeters")),
        SensorType.ALTIMETER: (_c("relativeAltitudeMeters"), _c("pressureKPa")),
        SensorType.HUMIDITY: (_c("percent"),),
        SensorType.LIGHT: (_c("lux"),),
        SensorType.AMBIENT_TEMPERATURE: (_c("celsius"),),
        SensorType.LOCATION: (
            _c("latitude"),
            _c("longitude"),
            _c("altitudeMeters"),
            _c("horizontalAccuracyMeters"),
        ),
        SensorType.MOTION_ACTIVITY: (_c("activity", "enum", Activity), _c("confidence", "enum", Confidence)),
        SensorType.BATTERY: (_c("level"), _c("state", "enum", BatteryState)),
        SensorType.SCREEN_STATUS: (_c("status", "enum", ScreenState),),
        SensorType.MICROPHONE: (_c("frameIndex", "int"), _c("rmsAmplitude")),
        SensorType.BLUETOOTH_CLASSIC: (_c("deviceAddress", "mac"), _c("deviceName", "str"), _c("rssi", "int")),
        SensorType.IBEACON_PROXIMITY: (
            _c("uuid", "uuid"),
            _c("major", "int"),
            _c("minor", "int"),
            _c("measuredPower", "int"),
            _c("rssi", "int"),
        ),
        SensorType.EDDYSTONE_PROXIMITY: (
            _c("frameType", "token"),
            _c("namespace", "hex"),
            _c("instance", "hex"),
            _c("txPower", "int"),
            _c("url", "str"),
            _c("batteryMilliVolts", "int"),
            _c("temperatureC", "fixed88"),
            _c("advCount", "int"),
            _c("uptimeDeciseconds", "int"),
            _c("rssi", "int"),
        ),
    }
)

EDDYSTONE_FRAME_TYPES = ("UID", "URL", "TLM")

# Non-beacon payload fields map positionally onto their columns.
for _type, _cls in PAYLOAD_CLASSES.items():
    if _cls is not BeaconSighting and len(dataclasses.fields(_cls)) != len(PAYLOAD_COLUMNS[_type]):
        raise AssertionError(f"{_type}: {_cls.__name__} fields do not match its columns")
del _type, _cls


def payload_to_fields(sensor_type: SensorType, payload: Any) -> dict[str, Any]:
    """Flatten a payload into ``{column name: value}``; absent Eddystone fields are omitted."""
    check_payload_type(sensor_type, payload)
    if sensor_type is SensorType.IBEACON_PROXIMITY:
        f = payload.frame
        return {"uuid": f.uuid, "major": f.major, "minor": f.minor, "measuredPower": f.measured_power, "rssi": payload.rssi}
    if sensor_type is SensorType.EDDYSTONE_PROXIMITY:
        f = payload.frame
        if isinstance(f, EddystoneUid):
            out = {"frameType": "UID", "namespace": f.namespace, "instance": f.instance, "txPower": f.tx_power}
        elif isinstance(f, EddystoneUrl):
            out = {"frameType": "URL", "txPower": f.tx_power, "url": f.url}
        else:
            out = {
                "frameType": "TLM",
                "batteryMilliVolts": f.battery_millivolts,
                "temperatureC": f.temperature_c,
                "advCount": f.adv_count,
                "uptimeDeciseconds": f.uptime_deciseconds,
            }
        out["rssi"] = payload.rssi
        return out
    return {c.name: getattr(payload, f.name) for f, c in zip(dataclasses.fields(payload), PAYLOAD_COLUMNS[sensor_type])}


def payload_from_fields(sensor_type: SensorType, values: Mapping[str, Any], timestamp_nanos: int) -> Any:
    """Inverse of payload_to_fields. Raises KeyError/ValueError/TypeError on bad input."""
    if sensor_type is SensorType.IBEACON_PROXIMITY:
        frame = IBeaconFrame(values["uuid"], values["major"], values["minor"], values["measuredPower"])
        return BeaconSighting(frame, values["rssi"], timestamp_nanos)
    if sensor_type is SensorType.EDDYSTONE_PROXIMITY:
        kind = values["frameType"]
        if kind == "UID":
            frame = EddystoneUid(values["namespace"], values["instance"], values["txPower"])
        elif kind == "URL":
            frame = EddystoneUrl(values["txPower"], values["url"])
        elif kind == "TLM":
            frame = EddystoneTlm(
                values["batteryMilliVolts"], values["temperatureC"], values["advCount"], values["uptimeDeciseconds"]
            )
        else:
            raise ValueError(f"unknown Eddystone frame type {kind!r}")
        return BeaconSighting(frame, values["rssi"], timestamp_nanos)
    cls = PAYLOAD_CLASSES[sensor_type]
    kwargs = {f.name: values[c.name] for f, c in zip(dataclasses.fields(cls), PAYLOAD_COLUMNS[sensor_type])}
    return cls(**kwargs)


def check_payload_type(sensor_type: SensorType, payload: Any) -> None:
    cls = PAYLOAD_CLASSES[sensor_type]
    if type(payload) is not cls:
        raise SchemaMismatch(f"{sensor_type} expects {cls.__name__}, got {type(payload).__name__}")
    if sensor_type is SensorType.IBEACON_PROXIMITY and not isinstance(payload.frame, IBeaconFrame):
        raise SchemaMismatch("IBeaconProximity sighting must carry an iBeacon frame")
    if sensor_type is SensorType.EDDYSTONE_PROXIMITY and not isinstance(
        payload.frame, (EddystoneUid, EddystoneUrl, EddystoneTlm)
    ):
        raise SchemaMismatch("EddystoneProximity sighting must carry an Eddystone frame")


def check_payload(sensor_type: SensorType, payload: Any, quaternion_tolerance: float = QUATERNION_NORM_TOLERANCE) -> None:
    """Enforce the schema's range constraints. Raises ValueError on violation."""
    check_payload_type(sensor_type, payload)
    p = payload

    def need(ok: bool, what: str) -> None:
        if not ok:
            raise ValueError(f"{sensor_type}: {what} (payload {p!r})")

    floats = [v for v in vars(p).values() if isinstance(v, float)]
    need(all(math.isfinite(v) for v in floats), "non-finite value")
    if sensor_type is SensorType.ROTATION:
        norm = math.sqrt(p.x * p.x + p.y * p.y + p.z * p.z + p.w * p.w)
        need(abs(norm - 1.0) <= quaternion_tolerance, f"quaternion norm {norm!r} is not 1")
    elif sensor_type is SensorType.PEDOMETER:
        need(p.step_count >= 0 and p.distance_meters >= 0, "negative step count or distance")
    elif sensor_type is SensorType.ALTIMETER:
        need(p.pressure_kpa > 0, "pressure must be positive")
    elif sensor_type is SensorType.HUMIDITY:
        need(0.0 <= p.percent <= 100.0, "humidity outside [0, 100]")
    elif sensor_type is SensorType.LIGHT:
        need(p.lux >= 0.0, "negative illuminance")
    elif sensor_type is SensorType.LOCATION:
        need(-90.0 <= p.latitude <= 90.0, "latitude outside [-90, 90]")
        need(-180.0 <= p.longitude <= 180.0, "longitude outside [-180, 180]")
        need(p.horizontal_accuracy_meters > 0, "accuracy must be positive")
    elif sensor_type is SensorType.MOTION_ACTIVITY:
        need(isinstance(p.activity, Activity) and isinstance(p.confidence, Confidence), "bad activity labels")
    elif sensor_type is SensorType.BATTERY:
        need(0.0 <= p.level <= 1.0, "level outside [0, 1]")
        need(isinstance(p.state, BatteryState), "bad battery state")
    elif sensor_type is SensorType.SCREEN_STATUS:
        need(isinstance(p.status, ScreenState), "bad screen status")
    elif sensor_type is SensorType.MICROPHONE:
        need(p.frame_index >= 0, "negative frame index")
        need(0.0 <= p.rms_amplitude <= 1.0, "rms amplitude outside [0, 1]")
    elif sensor_type is SensorType.BLUETOOTH_CLASSIC:
        need(0 <= p.device_address < (1 << 48), "address is not 48-bit")
        need(isinstance(p.device_name, str), "device name must be text")
        need(-120 <= p.rssi <= 0, "rssi outside [-120, 0]")
