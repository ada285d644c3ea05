import csv
import json

import pytest
from hypothesis import given, settings

from sample_data import EXTRA_EDDYSTONE, TS, encoded, golden_path, representative_sample, samples
from sensekit import serialization as ser
from sensekit.core import SensorSample, SensorType
from sensekit.drivers import Acceleration, Activity, BatteryData, BatteryState, RotationRate
from sensekit.errors import ParseError, SchemaMismatch, UnknownSensor

T = SensorType


@pytest.mark.parametrize("fmt", ser.FORMATS)
@pytest.mark.parametrize("sensor_type", list(SensorType), ids=lambda t: t.value)
def test_golden(sensor_type, fmt):
    expected = golden_path(sensor_type, fmt).read_bytes()
    assert encoded(sensor_type, fmt).encode("utf-8") == expected


@pytest.mark.parametrize("fmt", ser.FORMATS)
@pytest.mark.parametrize("sensor_type", list(SensorType), ids=lambda t: t.value)
def test_golden_parses_back(sensor_type, fmt):
    lines = golden_path(sensor_type, fmt).read_text(encoding="utf-8").splitlines(keepends=True)
    assert list(ser.decode_lines(sensor_type, lines, fmt)) == [representative_sample(sensor_type)]


def test_accelerometer_header():
    assert ser.csv_header(T.ACCELEROMETER) == "timestampNanos,relativeSeconds,x,y,z"


def test_accelerometer_row():
    sample = SensorSample(T.ACCELEROMETER, 0, Acceleration(0, 0, 1))
    assert ser.csv_row(sample) == "0,0.000000000,0.000000,0.000000,1.000000"


def test_battery_json():
    sample = SensorSample(T.BATTERY, 0, BatteryData(0.5, BatteryState.UNPLUGGED))
    assert ser.to_json(sample) == (
        '{"sensorType":"Battery","timestampNanos":0,"relativeSeconds":0.0,'
        '"data":{"level":0.5,"state":"Unplugged"}}'
    )


def test_motion_activity_json_labels():
    obj = json.loads(ser.to_json(representative_sample(T.MOTION_ACTIVITY)))
    assert obj["data"]["activity"] in {a.value for a in Activity}


def test_schema_mismatch():
    sample = SensorSample(T.ACCELEROMETER, 0, RotationRate(0, 0, 0))
    with pytest.raises(SchemaMismatch):
        ser.csv_row(sample)
    with pytest.raises(SchemaMismatch):
        ser.to_json(sample)


def test_relative_seconds_exact():
    assert ser.format_relative_seconds(0) == "0.000000000"
    assert ser.format_relative_seconds(1) == "0.000000001"
    assert ser.format_relative_seconds(123_456_789_012_345_678) == "123456789.012345678"


@pytest.mark.parametrize("sensor_type", list(SensorType), ids=lambda t: t.value)
def test_header_matches_row_width(sensor_type):
    row = ser.csv_row(representative_sample(sensor_type))
    (cells,) = csv.reader([row])
    assert len(cells) == len(ser.csv_columns(sensor_type))
    assert ser.csv_header(sensor_type) == ",".join(ser.csv_columns(sensor_type))


def test_eddystone_frame_variants():
    for payload in EXTRA_EDDYSTONE:
        sample = SensorSample(T.EDDYSTONE_PROXIMITY, TS, payload)
        assert ser.parse_csv_row(T.EDDYSTONE_PROXIMITY, ser.csv_row(sample)) == sample
        assert ser.from_json(ser.to_json(sample)) == sample
    tlm_row = ser.csv_row(SensorSample(T.EDDYSTONE_PROXIMITY, TS, EXTRA_EDDYSTONE[1]))
    assert tlm_row == "1234567890,1.234567890,TLM,,,,,3000,23.50000000,1024,36000,-77"


# -- round trips ----------------------------------------------------------------


@settings(max_examples=400, deadline=None)
@given(samples())
def test_json_round_trip(sample):
    assert ser.from_json(ser.to_json(sample)) == sample


@settings(max_examples=400, deadline=None)
@given(samples(grid=True))
def test_csv_round_trip_on_grid(sample):
    row = ser.csv_row(sample)
    assert ser.parse_csv_row(sample.sensor_type, row) == sample


@settings(max_examples=300, deadline=None)
@given(samples())
def test_csv_reencode_is_stable(sample):
    # Off-grid floats are rounded once; after that the text is a fixed point.
    row = ser.csv_row(sample)
    assert ser.csv_row(ser.parse_csv_row(sample.sensor_type, row)) == row
    assert ser.csv_row(sample) == row


@settings(max_examples=200, deadline=None)
@given(samples())
def test_json_stable(sample):
    assert ser.to_json(sample) == ser.to_json(sample)


# -- parse errors -------------------------------------------------------------


def test_missing_column():
    with pytest.raises(ParseError) as info:
        ser.parse_csv_row(T.ACCELEROMETER, "0,0.000000000,0.000000,0.000000", line_number=7)
    assert info.value.line == 7


def test_bad_cell_reports_column():
    with pytest.raises(ParseError) as info:
        ser.parse_csv_row(T.ACCELEROMETER, "0,0.000000000,0.000000,abc,1.000000", line_number=3)
    assert (info.value.line, info.value.column) == (3, 4)


def test_inconsistent_relative_seconds():
    with pytest.raises(ParseError):
        ser.parse_csv_row(T.ACCELEROMETER, "5,1.000000000,0.000000,0.000000,1.000000")


def test_unknown_json_type():
    with pytest.raises(ParseError):
        ser.from_json('{"sensorType":"Thermometer","timestampNanos":0,"relativeSeconds":0.0,"data":{}}')


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"sensorType":"Battery","timestampNanos":0,"relativeSeconds":0.0}',
        '{"sensorType":"Battery","timestampNanos":0,"relativeSeconds":0.0,"data":{"level":0.5}}',
        '{"sensorType":"Battery","timestampNanos":0,"relativeSeconds":0.0,"data":{"level":0.5,"state":"Wet"}}',
        '{"sensorType":"Battery","timestampNanos":-1,"relativeSeconds":0.0,"data":{"level":0.5,"state":"Full"}}',
        '{"sensorType":"Battery","timestampNanos":0,"relativeSeconds":0.0,"data":{"level":2,"state":"Full"}}',
        '{"sensorType":"Battery","timestampNanos":0,"relativeSeconds":0.0,"data":{"level":0.5,"state":"Full","x":1}}',
    ],
)
def test_bad_json(text):
    with pytest.raises(ParseError):
        ser.from_json(text)


def test_truncated_file_line():
    lines = [ser.CSV_VERSION_LINE + "\n", ser.csv_header(T.ACCELEROMETER) + "\n", "0,0.000000000,0.0"]
    with pytest.raises(ParseError) as info:
        list(ser.decode_lines(T.ACCELEROMETER, lines, "csv"))
    assert info.value.line == 3


def test_missing_version_line():
    with pytest.raises(ParseError):
        list(ser.decode_lines(T.ACCELEROMETER, [ser.csv_header(T.ACCELEROMETER) + "\n"], "csv"))


# -- files ----------------------------------------------------------------------


def test_file_naming(tmp_path):
    assert ser.sensor_type_for_file(tmp_path / "Accelerometer.csv") is T.ACCELEROMETER
    assert ser.format_for_file(tmp_path / "Battery.jsonl") == "jsonl"
    with pytest.raises(UnknownSensor):
        ser.sensor_type_for_file(tmp_path / "Thermometer.csv")


def test_convert_round_trip(tmp_path):
    items = [representative_sample(T.LOCATION)]
    src = ser.write_session_file(tmp_path / "Location.csv", items)
    jsonl = ser.convert_session_file(src, "jsonl", tmp_path / "out" / "Location.jsonl")
    back = ser.convert_session_file(jsonl, "csv", tmp_path / "back" / "Location.csv")
    assert back.read_bytes() == src.read_bytes()
    assert ser.read_session_file(jsonl) == (T.LOCATION, items)


def test_session_writer(tmp_path):
    with ser.SessionWriter(tmp_path / "s", "csv", {"seed": 1}) as writer:
        writer.add_sensor(T.BATTERY)
        writer.add_sensor(T.ACCELEROMETER)
        writer.write(representative_sample(T.BATTERY))
    manifest = json.loads((tmp_path / "s" / ser.MANIFEST_NAME).read_text())
    assert manifest["format"] == "sensekit-session" and manifest["seed"] == 1
    assert [(e["sensorType"], e["file"], e["samples"]) for e in manifest["sensors"]] == [
        ("Battery", "Battery.csv", 1),
        ("Accelerometer", "Accelerometer.csv", 0),
    ]
    files = sorted(p.name for p in (tmp_path / "s").iterdir())
    assert files == ["Accelerometer.csv", "Battery.csv", ser.MANIFEST_NAME]
    assert ser.read_session_file(tmp_path / "s" / "Accelerometer.csv") == (T.ACCELEROMETER, [])
