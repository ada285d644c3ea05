"""RSSI to distance conversion, proximity zones and 1 Hz ranging."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable

from sensekit.beacon.frames import BeaconFrame, EddystoneTlm, EddystoneUid, EddystoneUrl, IBeaconFrame
from sensekit.errors import InvalidExponent

DEFAULT_PATH_LOSS_EXPONENT = 2.0
# Eddystone advertises power at 0 m; subtracting this gives the 1 m reference.
EDDYSTONE_ONE_METER_LOSS_DB = 41
IMMEDIATE_THRESHOLD_M = 0.5
NEAR_THRESHOLD_M = 4.0
RANGING_WINDOW_NANOS = 1_000_000_000


@dataclass(frozen=True)
class BeaconSighting:
    frame: BeaconFrame
    rssi: int
    timestamp_nanos: int

    def __post_init__(self) -> None:
        if isinstance(self.rssi, bool) or not isinstance(self.rssi, int) or not -120 <= self.rssi <= 0:
            raise ValueError(f"rssi must be an integer in [-120, 0] dBm, got {self.rssi!r}")
        if self.timestamp_nanos < 0:
            raise ValueError("timestamp_nanos must be non-negative")


class ProximityZone(str, Enum):
    IMMEDIATE = "Immediate"
    NEAR = "Near"
    FAR = "Far"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ProximityEstimate:
    distance_meters: float | None
    zone: ProximityZone


def estimate_distance(rssi: float, reference_power: float, path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT) -> float:
    """Invert the log-distance path-loss model around a 1 m reference power."""
    n = path_loss_exponent
    if not isinstance(n, (int, float)) or not math.isfinite(n) or n <= 0:
        raise InvalidExponent(f"path-loss exponent must be positive, got {n!r}")
    return 10.0 ** ((reference_power - rssi) / (10.0 * n))


def proximity_zone(
    distance: float | None,
    immediate: float = IMMEDIATE_THRESHOLD_M,
    near: float = NEAR_THRESHOLD_M,
) -> ProximityZone:
    if distance is None or not math.isfinite(distance) or distance <= 0:
        return ProximityZone.UNKNOWN
    if distance < immediate:
        return ProximityZone.IMMEDIATE
    if distance < near:
        return ProximityZone.NEAR
    return ProximityZone.FAR


def beacon_identity(frame: BeaconFrame) -> Hashable | None:
    """Key that groups sightings of the same physical beacon. TLM has none."""
    if isinstance(frame, IBeaconFrame):
        return ("ibeacon", str(frame.uuid).upper(), frame.major, frame.minor)
    if isinstance(frame, EddystoneUid):
        return ("eddystone-uid", frame.namespace.hex(), frame.instance.hex())
    if isinstance(frame, EddystoneUrl):
        return ("eddystone-url", frame.url)
    return None


def reference_power(frame: BeaconFrame) -> int | None:
    """1 m reference power in dBm for a frame, or None for telemetry frames."""
    if isinstance(frame, IBeaconFrame):
        return frame.measured_power
    if isinstance(frame, (EddystoneUid, EddystoneUrl)):
        return frame.tx_power - EDDYSTONE_ONE_METER_LOSS_DB
    if isinstance(frame, EddystoneTlm):
        return None
    raise TypeError(f"not a beacon frame: {frame!r}")


def range_beacons(
    sightings: Iterable[BeaconSighting],
    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT,
    aggregate: str = "mean",
) -> list[tuple[Hashable, ProximityEstimate]]:
    """One estimate per beacon for a window of sightings.

    RSSI is aggregated per beacon (mean, or median) before conversion. Results
    are ordered by each beacon's first sighting in the window.
    """
    if aggregate not in ("mean", "median"):
        raise ValueError(f"aggregate must be 'mean' or 'median', got {aggregate!r}")
    groups: dict[Hashable, list[BeaconSighting]] = {}
    for s in sightings:
        key = beacon_identity(s.frame)
        if key is not None:
            groups.setdefault(key, []).append(s)

    results = []
    for key, group in groups.items():
        rssis = [s.rssi for s in group]
        rssi = statistics.fmean(rssis) if aggregate == "mean" else statistics.median(rssis)
        ref = reference_power(group[-1].frame)
        d = estimate_distance(rssi, ref, path_loss_exponent)
        results.append((key, ProximityEstimate(d, proximity_zone(d))))
    return results


@dataclass(frozen=True)
class RangingWindow:
    index: int
    start_nanos: int
    estimates: list[tuple[Hashable, ProximityEstimate]] = field(default_factory=list)


class BeaconRanger:
    """Buckets sightings into 1 s windows and ranges each closed window.

    A window ``[start + k s, start + (k+1) s)`` closes once time reaches its
    end, so advancing T seconds past the start yields exactly floor(T)
    windows, empty ones included.
    """

    def __init__(
        self,
        start_nanos: int = 0,
        path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT,
        aggregate: str = "mean",
    ):
        estimate_distance(0, 0, path_loss_exponent)  # validates the exponent up front
        if aggregate not in ("mean", "median"):
            raise ValueError(f"aggregate must be 'mean' or 'median', got {aggregate!r}")
        self.path_loss_exponent = path_loss_exponent
        self.aggregate = aggregate
        self._start = start_nanos
        self._next_index = 0
        self._pending: list[BeaconSighting] = []

    @property
    def windows_emitted(self) -> int:
        return self._next_index

    def add(self, sighting: BeaconSighting) -> None:
        window_start = self._start + self._next_index * RANGING_WINDOW_NANOS
        if sighting.timestamp_nanos < window_start:
            raise ValueError("sighting belongs to a window that has already closed")
        self._pending.append(sighting)

    def advance_to(self, now_nanos: int) -> list[RangingWindow]:
        closed = []
        while self._start + (self._next_index + 1) * RANGING_WINDOW_NANOS <= now_nanos:
            start = self._start + self._next_index * RANGING_WINDOW_NANOS
            end = start + RANGING_WINDOW_NANOS
            inside = [s for s in self._pending if s.timestamp_nanos < end]
            self._pending = [s for s in self._pending if s.timestamp_nanos >= end]
            estimates = range_beacons(inside, self.path_loss_exponent, self.aggregate)
            closed.append(RangingWindow(self._next_index, start, estimates))
            self._next_index += 1
        return closed
