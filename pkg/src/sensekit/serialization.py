"""Canonical CSV and JSON encodings of sensor samples, and session files.

CSV rows start with ``timestampNanos,relativeSeconds`` followed by the
sensor's payload columns. ``relativeSeconds`` is rendered exactly with 9
decimals and payload decimals with 6, so CSV is lossy below a microunit;
re-encoding a parsed row reproduces it byte for byte. JSON keeps full float
precision.
"""

from __future__ import annotations

import csv
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator, TextIO
from uuid import UUID

from sensekit.core.sensors import SensorSample, SensorType
from sensekit.drivers.payloads import (
    PAYLOAD_COLUMNS,
    Column,
    check_payload,
    payload_from_fields,
    payload_to_fields,
)
from sensekit.errors import ParseError, SchemaMismatch, UnknownSensor

FORMAT_VERSION = 1
CSV_VERSION_LINE = f"#sensekit v{FORMAT_VERSION}"
MANIFEST_NAME = "manifest.json"
FORMATS = ("csv", "jsonl")
# Range checks on parse; looser than the generator's quaternion tolerance
# because CSV keeps only 6 decimals.
PARSE_QUATERNION_TOLERANCE = 1e-5


def csv_columns(sensor_type: SensorType) -> list[str]:
    return ["timestampNanos", "relativeSeconds"] + [c.name for c in PAYLOAD_COLUMNS[sensor_type]]


def csv_header(sensor_type: SensorType) -> str:
    return ",".join(csv_columns(sensor_type))


def format_relative_seconds(timestamp_nanos: int) -> str:
    return f"{timestamp_nanos // 1_000_000_000}.{timestamp_nanos % 1_000_000_000:09d}"


def _quote(text: str) -> str:
    if "\n" in text or "\r" in text:
        raise SchemaMismatch("text fields may not contain line breaks")
    return '"' + text.replace('"', '""') + '"'


def _format_mac(address: int) -> str:
    return ":".join(f"{b:02X}" for b in address.to_bytes(6, "big"))


def _csv_cell(column: Column, value: Any) -> str:
    if value is None:
        return ""
    kind = column.kind
    if kind == "float":
        return f"{value:.6f}"
    if kind == "int":
        return str(value)
    if kind == "str":
        return _quote(value)
    if kind == "token":
        return value
    if kind == "enum":
        return value.value
    if kind == "uuid":
        return str(value).upper()
    if kind == "hex":
        return value.hex()
    if kind == "mac":
        return _format_mac(value)
    if kind == "fixed88":
        return f"{value:.8f}"
    raise AssertionError(kind)


def _json_value(column: Column, value: Any) -> Any:
    kind = column.kind
    if kind in ("float", "fixed88", "int", "str", "token"):
        return value
    if kind == "enum":
        return value.value
    if kind == "uuid":
        return str(value).upper()
    if kind == "hex":
        return value.hex()
    if kind == "mac":
        return _format_mac(value)
    raise AssertionError(kind)


def _parse_value(column: Column, raw: Any, from_json: bool) -> Any:
    """Convert one serialized value back to its payload type; raises ValueError."""
    kind = column.kind
    if kind in ("float", "fixed88"):
        if from_json:
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise ValueError(f"expected a number, got {raw!r}")
            value = float(raw)
        else:
            value = float(raw)
        if not math.isfinite(value):
            raise ValueError(f"non-finite number {raw!r}")
        return value
    if kind == "int":
        if from_json:
            if isinstance(raw, bool) or not isinstance(raw, int):
                raise ValueError(f"expected an integer, got {raw!r}")
            return raw
        if not raw.lstrip("-").isdigit():
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(raw)
    if kind in ("str", "token"):
        if not isinstance(raw, str):
            raise ValueError(f"expected text, got {raw!r}")
        return raw
    if not isinstance(raw, str):
        raise ValueError(f"expected text, got {raw!r}")
    if kind == "enum":
        return column.enum(raw)
    if kind == "uuid":
        return UUID(raw)
    if kind == "hex":
        return bytes.fromhex(raw)
    if kind == "mac":
        parts = raw.split(":")
        if len(parts) != 6 or not all(len(p) == 2 for p in parts):
            raise ValueError(f"bad device address {raw!r}")
        return int("".join(parts), 16)
    raise AssertionError(kind)


# -- CSV ----------------------------------------------------------------------


def csv_row(sample: SensorSample) -> str:
    fields = payload_to_fields(sample.sensor_type, sample.payload)
    cells = [str(sample.timestamp_nanos), format_relative_seconds(sample.timestamp_nanos)]
    cells += [_csv_cell(c, fields.get(c.name)) for c in PAYLOAD_COLUMNS[sample.sensor_type]]
    return ",".join(cells)


def _parse_timestamp(raw: Any, from_json: bool) -> int:
    if from_json:
        if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
            raise ValueError(f"timestampNanos must be a non-negative integer, got {raw!r}")
        return raw
    if not raw.isdigit():
        raise ValueError(f"timestampNanos must be a non-negative integer, got {raw!r}")
    return int(raw)


def _check_relative(ts: int, raw: Any) -> None:
    if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
        raise ValueError(f"relativeSeconds must be a number, got {raw!r}")
    value = float(raw)
    if not abs(value - ts / 1e9) <= 1e-9 * max(1.0, abs(value)):
        raise ValueError(f"relativeSeconds {raw!r} disagrees with timestampNanos {ts}")


def _build(sensor_type: SensorType, ts: int, values: dict[str, Any]) -> SensorSample:
    payload = payload_from_fields(sensor_type, values, ts)
    check_payload(sensor_type, payload, quaternion_tolerance=PARSE_QUATERNION_TOLERANCE)
    return SensorSample(sensor_type, ts, payload)


def parse_csv_row(sensor_type: SensorType, line: str, line_number: int | None = None) -> SensorSample:
    """Parse one CSV data row produced by csv_row."""
    line = line.rstrip("\r\n")
    try:
        (cells,) = list(csv.reader([line], strict=True))
    except (csv.Error, ValueError) as exc:
        raise ParseError(f"malformed CSV: {exc}", line=line_number) from None
    columns = PAYLOAD_COLUMNS[sensor_type]
    expected = 2 + len(columns)
    if len(cells) != expected:
        raise ParseError(f"expected {expected} columns for {sensor_type}, got {len(cells)}", line=line_number)
    try:
        ts = _parse_timestamp(cells[0], from_json=False)
        _check_relative(ts, cells[1])
    except ValueError as exc:
        raise ParseError(str(exc), line=line_number, column=1) from None
    values: dict[str, Any] = {}
    for index, (column, raw) in enumerate(zip(columns, cells[2:]), start=3):
        if raw == "" and column.kind != "str":
            continue  # absent (Eddystone fields not carried by this frame type)
        try:
            values[column.name] = _parse_value(column, raw, from_json=False)
        except ValueError as exc:
            raise ParseError(f"{column.name}: {exc}", line=line_number, column=index) from None
    if sensor_type is SensorType.EDDYSTONE_PROXIMITY:
        if values.get("url") == "":
            del values["url"]
        _check_eddystone_fields(values, line_number)
    try:
        return _build(sensor_type, ts, values)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"invalid {sensor_type} record: {exc}", line=line_number) from None


_EDDYSTONE_FIELDS = {
    "UID": {"frameType", "namespace", "instance", "txPower", "rssi"},
    "URL": {"frameType", "txPower", "url", "rssi"},
    "TLM": {"frameType", "batteryMilliVolts", "temperatureC", "advCount", "uptimeDeciseconds", "rssi"},
}


def _check_eddystone_fields(values: dict[str, Any], line_number: int | None) -> None:
    wanted = _EDDYSTONE_FIELDS.get(values.get("frameType"))
    if wanted is None:
        raise ParseError(f"unknown Eddystone frame type {values.get('frameType')!r}", line=line_number)
    if set(values) != wanted:
        raise ParseError(
            f"{values['frameType']} record must carry exactly {', '.join(sorted(wanted))}", line=line_number
        )


# -- JSON ---------------------------------------------------------------------


def sample_to_dict(sample: SensorSample) -> dict[str, Any]:
    fields = payload_to_fields(sample.sensor_type, sample.payload)
    data = {c.name: _json_value(c, fields[c.name]) for c in PAYLOAD_COLUMNS[sample.sensor_type] if c.name in fields}
    return {
        "sensorType": sample.sensor_type.value,
        "timestampNanos": sample.timestamp_nanos,
        "relativeSeconds": sample.relative_seconds,
        "data": data,
    }


def to_json(sample: SensorSample) -> str:
    return json.dumps(sample_to_dict(sample), separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def from_json(text: str, line_number: int | None = None) -> SensorSample:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        line = exc.lineno if line_number is None else line_number + exc.lineno - 1
        raise ParseError(exc.msg, line=line, column=exc.colno) from None
    if not isinstance(obj, dict) or set(obj) != {"sensorType", "timestampNanos", "relativeSeconds", "data"}:
        raise ParseError("expected an object with sensorType, timestampNanos, relativeSeconds, data", line=line_number)
    try:
        sensor_type = SensorType(obj["sensorType"])
    except ValueError:
        raise ParseError(f"unknown sensorType {obj['sensorType']!r}", line=line_number) from None
    try:
        ts = _parse_timestamp(obj["timestampNanos"], from_json=True)
        _check_relative(ts, obj["relativeSeconds"])
    except ValueError as exc:
        raise ParseError(str(exc), line=line_number) from None
    data = obj["data"]
    if not isinstance(data, dict):
        raise ParseError("data must be an object", line=line_number)
    columns = {c.name: c for c in PAYLOAD_COLUMNS[sensor_type]}
    unknown = set(data) - set(columns)
    if unknown:
        raise ParseError(f"unexpected data keys {sorted(unknown)}", line=line_number)
    values: dict[str, Any] = {}
    for name, raw in data.items():
        try:
            values[name] = _parse_value(columns[name], raw, from_json=True)
        except ValueError as exc:
            raise ParseError(f"{name}: {exc}", line=line_number) from None
    if sensor_type is SensorType.EDDYSTONE_PROXIMITY:
        _check_eddystone_fields(values, line_number)
    elif set(values) != set(columns):
        missing = sorted(set(columns) - set(values))
        raise ParseError(f"missing data keys {missing}", line=line_number)
    try:
        return _build(sensor_type, ts, values)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"invalid {sensor_type} record: {exc}", line=line_number) from None


# -- files --------------------------------------------------------------------


def sensor_type_for_file(path: str | Path) -> SensorType:
    stem = Path(path).stem
    try:
        return SensorType(stem)
    except ValueError:
        raise UnknownSensor(f"file name {Path(path).name!r} names no sensor") from None


def format_for_file(path: str | Path) -> str:
    suffix = Path(path).suffix.lstrip(".").lower()
    if suffix not in FORMATS:
        raise UnknownSensor(f"unrecognised session file extension {suffix!r}")
    return suffix


def encode_samples(sensor_type: SensorType, samples: Iterable[SensorSample], fmt: str) -> Iterator[str]:
    """Yield the lines (newline-terminated) of a per-sensor session file."""
    if fmt == "csv":
        yield CSV_VERSION_LINE + "\n"
        yield csv_header(sensor_type) + "\n"
    for sample in samples:
        if sample.sensor_type is not sensor_type:
            raise SchemaMismatch(f"{sample.sensor_type} sample in a {sensor_type} file")
        yield (csv_row(sample) if fmt == "csv" else to_json(sample)) + "\n"


def decode_lines(sensor_type: SensorType, lines: Iterable[str], fmt: str) -> Iterator[SensorSample]:
    lines = iter(lines)
    lineno = 0
    if fmt == "csv":
        for expected in (CSV_VERSION_LINE, csv_header(sensor_type)):
            lineno += 1
            got = next(lines, None)
            if got is None or got.rstrip("\r\n") != expected:
                raise ParseError(f"expected {expected!r}", line=lineno)
    for line in lines:
        lineno += 1
        if not line.endswith("\n"):
            raise ParseError("truncated record (no line terminator)", line=lineno)
        if fmt == "csv":
            yield parse_csv_row(sensor_type, line, line_number=lineno)
        else:
            sample = from_json(line, line_number=lineno)
            if sample.sensor_type is not sensor_type:
                raise ParseError(f"{sample.sensor_type} record in a {sensor_type} file", line=lineno)
            yield sample


def write_session_file(path: str | Path, samples: Iterable[SensorSample], sensor_type: SensorType | None = None) -> Path:
    path = Path(path)
    sensor_type = sensor_type or sensor_type_for_file(path)
    fmt = format_for_file(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.writelines(encode_samples(sensor_type, samples, fmt))
    return path


def read_session_file(path: str | Path) -> tuple[SensorType, list[SensorSample]]:
    path = Path(path)
    sensor_type = sensor_type_for_file(path)
    fmt = format_for_file(path)
    with open(path, encoding="utf-8", newline="") as fh:
        return sensor_type, list(decode_lines(sensor_type, fh, fmt))


def convert_session_file(path: str | Path, target: str, output: str | Path | None = None) -> Path:
    """Re-encode a per-sensor session file as ``csv`` or ``jsonl``."""
    if target not in FORMATS:
        raise ValueError(f"target format must be one of {FORMATS}, got {target!r}")
    sensor_type, samples = read_session_file(path)
    out = Path(output) if output is not None else Path(path).with_suffix("." + target)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.writelines(encode_samples(sensor_type, samples, target))
    return out


class SessionWriter:
    """Streams samples into ``<dir>/<SensorType>.<fmt>`` files plus a manifest."""

    def __init__(self, directory: str | Path, fmt: str = "csv", metadata: dict[str, Any] | None = None):
        if fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.fmt = fmt
        self.metadata = dict(metadata or {})
        self._files: dict[SensorType, TextIO] = {}
        self._counts: dict[SensorType, int] = {}
        self._configs: dict[SensorType, dict[str, Any]] = {}

    def add_sensor(self, sensor_type: SensorType, config: dict[str, Any] | None = None) -> None:
        if sensor_type in self._files:
            return
        fh = open(self.directory / f"{sensor_type.value}.{self.fmt}", "w", encoding="utf-8", newline="")
        if self.fmt == "csv":
            fh.write(CSV_VERSION_LINE + "\n" + csv_header(sensor_type) + "\n")
        self._files[sensor_type] = fh
        self._counts[sensor_type] = 0
        self._configs[sensor_type] = config or {}

    def write(self, sample: SensorSample) -> None:
        self.add_sensor(sample.sensor_type)
        line = csv_row(sample) if self.fmt == "csv" else to_json(sample)
        self._files[sample.sensor_type].write(line + "\n")
        self._counts[sample.sensor_type] += 1

    @property
    def counts(self) -> dict[SensorType, int]:
        return dict(self._counts)

    def close(self) -> Path:
        for fh in self._files.values():
            fh.close()
        manifest = {
            "format": "sensekit-session",
            "version": FORMAT_VERSION,
            **self.metadata,
            "sensors": [
                {
                    "sensorType": st.value,
                    "file": f"{st.value}.{self.fmt}",
                    "samples": self._counts[st],
                    "config": self._configs[st],
                }
                for st in self._files
            ],
        }
        path = self.directory / MANIFEST_NAME
        path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
        return path

    def __enter__(self) -> "SessionWriter":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()


def config_to_dict(config: Any) -> dict[str, Any]:
    """JSON-friendly summary of a SensorConfig for the session manifest."""
    out: dict[str, Any] = {}
    if config.sample_rate_hz is not None:
        out["sampleRateHz"] = config.sample_rate_hz
    if config.accuracy is not None:
        out["accuracyMode"] = config.accuracy.value
    if config.roles:
        out["roles"] = sorted(r.value for r in config.roles)
    identity = config.beacon_identity
    if identity is not None:
        out["beaconIdentity"] = {
            k: (str(v).upper() if isinstance(v, UUID) else v.hex() if isinstance(v, bytes) else v.value if isinstance(v, Enum) else v)
            for k, v in vars(identity).items()
        }
    return out
