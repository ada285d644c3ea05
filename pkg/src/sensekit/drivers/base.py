from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any

from sensekit.core.sensors import SensorConfig, SensorType
from sensekit.errors import InvalidConfig, TypeMismatch


def period_nanos(rate_hz: float) -> Fraction:
    """Exact sampling period. Rates are read through their shortest repr so 0.1 Hz means 1/10."""
    return Fraction(10**9) / Fraction(repr(float(rate_hz)))


class Driver(ABC):
    """Produces payloads for one sensor on session-time nanoseconds.

    The scheduler calls ``start`` with the session time sensing begins, then
    repeatedly reads ``next_timestamp`` and calls ``emit`` while it is due.
    A ``None`` timestamp means the driver has nothing further to produce.
    """

    def __init__(self, sensor_type: SensorType, config: SensorConfig):
        if config.sensor_type is not sensor_type:
            raise TypeMismatch(f"config for {config.sensor_type} given to a {sensor_type} driver")
        config.validate()
        self.sensor_type = sensor_type
        self.config = config
        self._pending_config: SensorConfig | None = None

    def reconfigure(self, config: SensorConfig) -> None:
        """Queue a config; it takes effect at the next emitted sample."""
        if config.sensor_type is not self.sensor_type:
            raise TypeMismatch(f"config for {config.sensor_type} given to a {self.sensor_type} driver")
        config.validate()
        self._pending_config = config

    def _apply_pending(self) -> bool:
        if self._pending_config is None:
            return False
        self.config = self._pending_config
        self._pending_config = None
        return True

    @abstractmethod
    def start(self, start_nanos: int) -> None: ...

    def stop(self) -> None:
        pass

    @abstractmethod
    def next_timestamp(self) -> int | None: ...

    @abstractmethod
    def emit(self) -> tuple[int, Any]:
        """Produce the sample due at ``next_timestamp`` and advance."""


class ClockedDriver(Driver):
    """Emits at ``start + k / rate`` (floored to the nanosecond).

    A reconfiguration re-anchors the grid at the tick where it is applied, so
    the gap after that tick follows the new rate.
    """

    def __init__(self, sensor_type: SensorType, config: SensorConfig):
        super().__init__(sensor_type, config)
        if config.sample_rate_hz is None:
            raise InvalidConfig(f"{sensor_type} needs a sample rate")
        self._anchor: int | None = None
        self._k = 0
        self._period = period_nanos(self.emission_rate())

    def emission_rate(self) -> float:
        return self.config.sample_rate_hz

    def start(self, start_nanos: int) -> None:
        self._apply_pending()
        self._period = period_nanos(self.emission_rate())
        self._anchor = start_nanos
        self._k = 0

    def stop(self) -> None:
        self._anchor = None

    def next_timestamp(self) -> int | None:
        if self._anchor is None:
            return None
        p = self._period
        return self._anchor + (self._k * p.numerator) // p.denominator

    def emit(self) -> tuple[int, Any]:
        ts = self.next_timestamp()
        if ts is None:
            raise RuntimeError("driver is not running")
        if self._apply_pending():
            self._period = period_nanos(self.emission_rate())
            self._anchor = ts
            self._k = 0
        self._k += 1
        return ts, self.sample(ts)

    @abstractmethod
    def sample(self, timestamp_nanos: int) -> Any: ...


class EventDriver(Driver):
    """Emits the initial state at start, then on each state change.

    Changes follow a seeded process; subclasses return the dwell time until
    the next change (or None when no further change will happen).
    """

    def __init__(self, sensor_type: SensorType, config: SensorConfig):
        super().__init__(sensor_type, config)
        self._next: int | None = None
        self._started_once = False

    def start(self, start_nanos: int) -> None:
        self._apply_pending()
        self._next = start_nanos
        self._initial = True

    def stop(self) -> None:
        self._next = None

    def next_timestamp(self) -> int | None:
        return self._next

    def emit(self) -> tuple[int, Any]:
        ts = self._next
        if ts is None:
            raise RuntimeError("driver is not running")
        self._apply_pending()
        if self._initial and not self._started_once:
            payload = self.initial_state(ts)
        elif self._initial:
            payload = self.current_state(ts)
        else:
            payload = self.transition(ts)
        self._initial = False
        self._started_once = True
        dwell = self.dwell_nanos()
        self._next = None if dwell is None else ts + max(1, dwell)
        return ts, payload

    @abstractmethod
    def initial_state(self, timestamp_nanos: int) -> Any: ...

    @abstractmethod
    def current_state(self, timestamp_nanos: int) -> Any:
        """Re-report the present state, used when sensing restarts."""

    @abstractmethod
    def transition(self, timestamp_nanos: int) -> Any: ...

    @abstractmethod
    def dwell_nanos(self) -> int | None: ...
