"""Session time-base.

Sample timestamps come from a monotonic source only. The wall clock is read
once, when the session clock is created, and is kept purely as metadata.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Protocol

from sensekit.errors import ClockRegression


@dataclass(frozen=True)
class SessionClock:
    monotonic_origin_nanos: int
    wall_clock_epoch: datetime

    def __post_init__(self) -> None:
        if self.monotonic_origin_nanos < 0:
            raise ValueError("monotonic origin must be non-negative")


def session_timestamp(clock: SessionClock, monotonic_now_nanos: int) -> tuple[int, float]:
    """Return ``(timestampNanos, relativeSeconds)`` for a monotonic reading."""
    delta = monotonic_now_nanos - clock.monotonic_origin_nanos
    if delta < 0:
        raise ClockRegression(
            f"monotonic reading {monotonic_now_nanos} precedes session origin {clock.monotonic_origin_nanos}"
        )
    return delta, delta / 1e9


class TimeBase(Protocol):
    def monotonic_ns(self) -> int: ...

    def wall_time_ns(self) -> int: ...

    def wait_until(self, monotonic_ns: int) -> None: ...


class SimulatedTimeBase:
    """Fast-forward time base. ``wait_until`` jumps instead of sleeping.

    The wall clock can be shifted arbitrarily to emulate user or NTP
    adjustments; monotonic time is unaffected.
    """

    def __init__(self, start_ns: int = 0, wall_epoch_ns: int = 0):
        self._now = start_ns
        self._start = start_ns
        self._wall_epoch = wall_epoch_ns
        self._wall_offset = 0

    def monotonic_ns(self) -> int:
        return self._now

    def wall_time_ns(self) -> int:
        return self._wall_epoch + (self._now - self._start) + self._wall_offset

    def wait_until(self, monotonic_ns: int) -> None:
        if monotonic_ns > self._now:
            self._now = monotonic_ns

    def shift_wall_clock(self, delta_ns: int) -> None:
        self._wall_offset += delta_ns


class RealTimeBase:
    """Time base backed by the host's monotonic and realtime clocks."""

    def monotonic_ns(self) -> int:
        return time.monotonic_ns()

    def wall_time_ns(self) -> int:
        return time.time_ns()

    def wait_until(self, monotonic_ns: int) -> None:
        remaining = monotonic_ns - time.monotonic_ns()
        if remaining > 0:
            time.sleep(remaining / 1e9)


def new_session_clock(time_base: TimeBase) -> SessionClock:
    wall = datetime.fromtimestamp(time_base.wall_time_ns() / 1e9, tz=timezone.utc)
    return SessionClock(time_base.monotonic_ns(), wall)
