import io
import json

import pytest

from sensekit.beacon import EddystoneUrl, IBeaconFrame, encode_eddystone, encode_ibeacon
from sensekit.cli import main, parse_sensor_spec
from sensekit.core import AccuracyMode, Role, SensorType


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


# -- list-sensors -----------------------------------------------------------------


def test_list_ios():
    code, text = run("list-sensors", "--profile", "ios")
    rows = text.splitlines()[1:]
    assert code == 0 and len(rows) == 19
    modes = dict(row.split() for row in rows)
    assert modes["AmbientTemperature"] == "unavailable"
    assert modes["EddystoneProximity"] == "scan-only"


def test_list_android_global_flag():
    code, text = run("--profile", "android", "list-sensors")
    modes = dict(row.split() for row in text.splitlines()[1:])
    assert code == 0 and modes["BluetoothClassic"] == "scan-only"
    assert set(modes.values()) == {"full", "scan-only"}


def test_list_unknown_profile():
    assert run("list-sensors", "--profile", "nosuch")[0] == 2


def test_usage_error_exit_code():
    assert run("no-such-command")[0] == 2
    assert run("record")[0] == 2


# -- record -------------------------------------------------------------------------


def test_record_accelerometer(tmp_path):
    out_dir = tmp_path / "s"
    code, text = run("record", "--sensor", "accelerometer:rate=100", "--duration", "10", "--output", str(out_dir))
    assert code == 0
    lines = (out_dir / "Accelerometer.csv").read_text().splitlines()
    assert lines[0] == "#sensekit v1"
    assert lines[1] == "timestampNanos,relativeSeconds,x,y,z"
    assert len(lines) - 2 == 1000
    assert "Accelerometer: 1000 samples" in text
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["sensors"][0]["samples"] == 1000


def test_record_deterministic(tmp_path):
    args = ["record", "--seed", "9", "--sensor", "gyroscope", "--sensor", "battery", "--sensor", "ibeacon",
            "--duration", "30", "--format", "jsonl"]
    assert run(*args, "--output", str(tmp_path / "a"))[0] == 0
    assert run(*args, "--output", str(tmp_path / "b"))[0] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == ["Battery.jsonl", "Gyroscope.jsonl", "IBeaconProximity.jsonl", "manifest.json"]
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_record_eddystone_broadcast_ios(tmp_path):
    code, _ = run("record", "--sensor", "eddystone:roles=broadcast", "--duration", "1", "--output", str(tmp_path))
    assert code == 2


def test_record_unavailable_and_bad_specs(tmp_path):
    base = ["record", "--duration", "1", "--output", str(tmp_path / "x")]
    assert run(*base, "--sensor", "humidity")[0] == 2
    assert run(*base, "--sensor", "thermometer")[0] == 2
    assert run(*base, "--sensor", "accelerometer:rate=0")[0] == 2
    assert run(*base, "--sensor", "accelerometer:speed=3")[0] == 2
    assert run("record", "--duration", "0", "--sensor", "battery")[0] == 2


def test_record_replay(tmp_path):
    from sensekit.drivers import TraceFile, write_trace
    from sample_data import representative_sample

    sample = representative_sample(SensorType.LIGHT)
    trace = write_trace(tmp_path / "light.trace", TraceFile.from_samples([sample]))
    code, _ = run("--profile", "android", "record", "--replay", str(trace), "--duration", "5",
                  "--output", str(tmp_path / "s"))
    assert code == 0
    rows = (tmp_path / "s" / "Light.csv").read_text().splitlines()[2:]
    assert rows == ["0,0.000000000,320.000000"]


def test_parse_sensor_spec():
    cfg = parse_sensor_spec("location:accuracy=low-power,rate=0.5")
    assert cfg.accuracy is AccuracyMode.LOW_POWER and cfg.sample_rate_hz == 0.5
    cfg = parse_sensor_spec("ibeacon:roles=scan+broadcast,major=7,power=-60")
    assert cfg.roles == {Role.SCAN, Role.BROADCAST}
    assert cfg.beacon_identity.major == 7 and cfg.beacon_identity.measured_power == -60


# -- decode-beacon ------------------------------------------------------------------


def test_decode_ibeacon():
    frame = IBeaconFrame("f7826da6-4fa2-4e98-8024-bc5b71e0893e", 100, 7, -59)
    code, text = run("decode-beacon", encode_ibeacon(frame).hex())
    assert code == 0
    assert "uuid: F7826DA6-4FA2-4E98-8024-BC5B71E0893E" in text
    assert "major: 100" in text and "minor: 7" in text
    assert "measuredPower: -59 dBm" in text


def test_decode_eddystone_url():
    code, text = run("decode-beacon", encode_eddystone(EddystoneUrl(-10, "http://www.google.com")).hex())
    assert code == 0 and "url: http://www.google.com" in text


def test_decode_with_distance():
    hex_frame = encode_ibeacon(IBeaconFrame("0" * 32, 1, 2, -59)).hex()
    code, text = run("decode-beacon", hex_frame, "--rssi", "-79")
    assert code == 0 and "distanceMeters: 10.000" in text and "zone: Far" in text


@pytest.mark.parametrize("hex_text", ["30ffee", "1aff4c00", "00"])
def test_decode_garbage(hex_text, capsys):
    code, _ = run("decode-beacon", hex_text)
    assert code == 1
    err = capsys.readouterr().err
    assert "UnknownFrameType" in err or "BadLength" in err


def test_decode_not_hex(capsys):
    assert run("decode-beacon", "zz")[0] == 1
    assert "BadHex" in capsys.readouterr().err


# -- predict / simulate -------------------------------------------------------------


def test_predict_idle():
    assert run("predict", "--mode", "idle") == (0, "51.27\n")


def test_predict_scan_and_broadcast():
    code, text = run("predict", "--mode", "ibeacon-scan", "--mode", "ibeacon-broadcast")
    lines = text.splitlines()
    assert code == 0 and lines[0] == "23.98"
    assert any(line.startswith("note: additive model") for line in lines[1:])
    assert any("error -5.1%" in line for line in lines[1:])


def test_predict_unknown_mode():
    assert run("predict", "--mode", "teleport")[0] == 2


def test_simulate_location():
    code, text = run("simulate", "--mode", "location-best", "--step", "30")
    rows = text.splitlines()
    assert code == 0 and rows[0] == "hours,levelPercent"
    assert rows[1] == "0.0000,100.00"
    hours, level = rows[-1].split(",")
    assert abs(float(hours) - 17.42) <= 0.5 and float(level) == 0.0
    assert rows[-1] == "17.5000,0.00"


def test_simulate_to_file(tmp_path):
    path = tmp_path / "idle.csv"
    code, text = run("simulate", "--output", str(path))
    assert code == 0 and text == ""
    assert path.read_text().splitlines()[-1] == "52.0000,0.00"


def test_simulate_bad_step():
    assert run("simulate", "--step", "0")[0] == 2


# -- convert ------------------------------------------------------------------------


def test_convert_round_trip(tmp_path):
    run("record", "--sensor", "accelerometer:rate=50", "--sensor", "motion-activity", "--duration", "120",
        "--output", str(tmp_path / "s"))
    for name in ("Accelerometer", "MotionActivity"):
        original = tmp_path / "s" / f"{name}.csv"
        jsonl = tmp_path / "j" / f"{name}.jsonl"
        back = tmp_path / "c" / f"{name}.csv"
        assert run("convert", str(original), "--to", "jsonl", "--output", str(jsonl))[0] == 0
        assert run("convert", str(jsonl), "--to", "csv", "--output", str(back))[0] == 0
        assert back.read_bytes() == original.read_bytes()


def test_convert_truncated(tmp_path, capsys):
    path = tmp_path / "Accelerometer.csv"
    path.write_text("#sensekit v1\ntimestampNanos,relativeSeconds,x,y,z\n0,0.000000000,0.000000,0.000000,1.000000\n10,0.0000")
    assert run("convert", str(path), "--to", "jsonl")[0] == 1
    assert "line 4" in capsys.readouterr().err


def test_convert_unknown_sensor_file(tmp_path):
    path = tmp_path / "Thermometer.csv"
    path.write_text("#sensekit v1\n")
    assert run("convert", str(path), "--to", "jsonl")[0] == 2


def test_convert_missing_file(tmp_path):
    assert run("convert", str(tmp_path / "Light.csv"), "--to", "jsonl")[0] == 2
