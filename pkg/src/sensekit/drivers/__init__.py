"""Sample generators: seeded synthetic streams, trace replay and battery discharge."""

from sensekit.drivers.payloads import (
    PAYLOAD_CLASSES,
    PAYLOAD_COLUMNS,
    Acceleration,
    Activity,
    AltimeterData,
    AmbientTemperatureData,
    Attitude,
    BatteryData,
    BatteryState,
    BluetoothDeviceData,
    Confidence,
    HumidityData,
    LightData,
    LocationData,
    MagneticField,
    MicrophoneData,
    MotionActivityData,
    PedometerData,
    RotationRate,
    ScreenState,
    ScreenStatusData,
    check_payload,
)
from sensekit.drivers.base import ClockedDriver, Driver, EventDriver
from sensekit.drivers.synthetic import AttitudeModel, create_synthetic_driver
from sensekit.drivers.trace import TraceFile, format_trace, parse_trace, read_trace, write_trace
from sensekit.drivers.replay import (
    BatteryDischargeDriver,
    ReplayDriver,
    battery_driver_from_discharge,
    create_replay_driver,
    discharge_events,
)

__all__ = [
    "PAYLOAD_CLASSES",
    "PAYLOAD_COLUMNS",
    "Acceleration",
    "Activity",
    "AltimeterData",
    "AmbientTemperatureData",
    "Attitude",
    "AttitudeModel",
    "BatteryData",
    "BatteryDischargeDriver",
    "BatteryState",
    "BluetoothDeviceData",
    "ClockedDriver",
    "Confidence",
    "Driver",
    "EventDriver",
    "HumidityData",
    "LightData",
    "LocationData",
    "MagneticField",
    "MicrophoneData",
    "MotionActivityData",
    "PedometerData",
    "ReplayDriver",
    "RotationRate",
    "ScreenState",
    "ScreenStatusData",
    "TraceFile",
    "battery_driver_from_discharge",
    "check_payload",
    "create_replay_driver",
    "create_synthetic_driver",
    "discharge_events",
    "format_trace",
    "parse_trace",
    "read_trace",
    "write_trace",
]
