from __future__ import annotations

import math
from typing import Any

from sensekit.core.sensors import SensorConfig, SensorType
from sensekit.drivers.base import Driver
from sensekit.drivers.payloads import BatteryData, BatteryState
from sensekit.drivers.trace import TraceFile
from sensekit.energy import DischargeSeries
from sensekit.errors import CorruptTrace, InvalidSeries, SchemaMismatch

NANOS_PER_HOUR = 3_600 * 10**9
# Absorbs float noise when a level sits exactly on a percent boundary.
_PERCENT_EPS = 1e-6


class _RecordedDriver(Driver):
    """Emits a fixed list of (offset, payload) events.

    Each start re-bases the remaining events so the next one is emitted at the
    start time; gaps between events are preserved to the nanosecond.
    """

    def __init__(self, sensor_type: SensorType, config: SensorConfig, events: list[tuple[int, Any]]):
        super().__init__(sensor_type, config)
        self._events = events
        self._index = 0
        self._shift: int | None = None

    def start(self, start_nanos: int) -> None:
        self._apply_pending()
        if self._index < len(self._events):
            self._shift = start_nanos - self._events[self._index][0]

    def stop(self) -> None:
        self._shift = None

    def next_timestamp(self) -> int | None:
        if self._shift is None or self._index >= len(self._events):
            return None
        return self._events[self._index][0] + self._shift

    def emit(self) -> tuple[int, Any]:
        ts = self.next_timestamp()
        if ts is None:
            raise RuntimeError("driver is not running or exhausted")
        self._apply_pending()
        payload = self._events[self._index][1]
        self._index += 1
        return ts, payload

    @property
    def remaining(self) -> int:
        return len(self._events) - self._index


class ReplayDriver(_RecordedDriver):
    """Replays a recorded trace onto the current session clock."""

    def __init__(self, sensor_type: SensorType, trace: TraceFile, config: SensorConfig | None = None):
        if trace.sensor_type is not sensor_type:
            raise SchemaMismatch(f"{trace.sensor_type} trace cannot drive {sensor_type}")
        records = list(trace.records)
        if any(b[0] < a[0] for a, b in zip(records, records[1:])):
            raise CorruptTrace("trace records are not sorted by timestamp")
        super().__init__(sensor_type, config or SensorConfig.default(sensor_type), records)


def create_replay_driver(sensor_type: SensorType, trace: TraceFile) -> ReplayDriver:
    return ReplayDriver(sensor_type, trace)


def discharge_events(series: DischargeSeries) -> list[tuple[int, float]]:
    """(offset nanos, level) for the initial level and every 1% boundary crossed.

    A boundary b% is crossed when the level moves from above b/100 to at or
    below it; crossing times are linearly interpolated within a segment.
    """
    pts = series.points
    events = [(0, pts[0][1])]
    t_origin = pts[0][0]
    for (t0, l0), (t1, l1) in zip(pts, pts[1:]):
        hi = math.ceil(l0 * 100 - _PERCENT_EPS) - 1
        lo = math.ceil(l1 * 100 - _PERCENT_EPS)
        for b in range(hi, lo - 1, -1):
            level = b / 100
            frac = min(1.0, max(0.0, (l0 - level) / (l0 - l1)))
            t = t0 + frac * (t1 - t0)
            events.append((round((t - t_origin) * NANOS_PER_HOUR), level))
    return events


class BatteryDischargeDriver(_RecordedDriver):
    """Battery samples following a simulated discharge, one per percent lost."""

    def __init__(self, series: DischargeSeries):
        if not isinstance(series, DischargeSeries):
            raise InvalidSeries("expected a DischargeSeries")
        events = [(ts, BatteryData(level, BatteryState.UNPLUGGED)) for ts, level in discharge_events(series)]
        super().__init__(SensorType.BATTERY, SensorConfig(SensorType.BATTERY), events)


def battery_driver_from_discharge(series: DischargeSeries) -> BatteryDischargeDriver:
    return BatteryDischargeDriver(series)
