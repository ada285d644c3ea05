"""Recorded sample traces: ``#sensekit-trace v1 <SensorType>`` then CSV records."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from sensekit import serialization
from sensekit.core.sensors import SensorSample, SensorType
from sensekit.errors import CorruptTrace, ParseError, SchemaMismatch

TRACE_MAGIC = "#sensekit-trace"
TRACE_VERSION = 1


@dataclass(frozen=True)
class TraceFile:
    sensor_type: SensorType
    records: tuple[tuple[int, Any], ...] = field(default_factory=tuple)
    version: int = TRACE_VERSION

    def __post_init__(self) -> None:
        records = tuple(self.records)
        for i in range(1, len(records)):
            if records[i][0] < records[i - 1][0]:
                raise CorruptTrace(f"record {i} is out of timestamp order")
        object.__setattr__(self, "records", records)

    @classmethod
    def from_samples(cls, samples: Iterable[SensorSample], sensor_type: SensorType | None = None) -> "TraceFile":
        samples = list(samples)
        if sensor_type is None:
            if not samples:
                raise ValueError("sensor type is required for an empty trace")
            sensor_type = samples[0].sensor_type
        for s in samples:
            if s.sensor_type is not sensor_type:
                raise SchemaMismatch(f"{s.sensor_type} sample in a {sensor_type} trace")
        return cls(sensor_type, tuple((s.timestamp_nanos, s.payload) for s in samples))

    def samples(self) -> list[SensorSample]:
        return [SensorSample(self.sensor_type, ts, payload) for ts, payload in self.records]


def format_trace(trace: TraceFile) -> str:
    lines = [f"{TRACE_MAGIC} v{trace.version} {trace.sensor_type.value}"]
    lines += [serialization.csv_row(s) for s in trace.samples()]
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> TraceFile:
    lines = text.splitlines()
    if not lines:
        raise CorruptTrace("empty trace")
    parts = lines[0].split()
    if len(parts) != 3 or parts[0] != TRACE_MAGIC or parts[1] != f"v{TRACE_VERSION}":
        raise CorruptTrace(f"line 1: expected '{TRACE_MAGIC} v{TRACE_VERSION} <sensor>', got {lines[0]!r}")
    try:
        sensor_type = SensorType(parts[2])
    except ValueError:
        raise CorruptTrace(f"line 1: unknown sensor {parts[2]!r}") from None
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            sample = serialization.parse_csv_row(sensor_type, line, line_number=lineno)
        except ParseError as exc:
            raise CorruptTrace(str(exc)) from None
        records.append((sample.timestamp_nanos, sample.payload))
    return TraceFile(sensor_type, tuple(records))


def write_trace(path: str | Path, trace: TraceFile) -> Path:
    path = Path(path)
    path.write_text(format_trace(trace), encoding="utf-8")
    return path


def read_trace(path: str | Path) -> TraceFile:
    return parse_trace(Path(path).read_text(encoding="utf-8"))
