"""Command-line front end.

Exit codes: 0 success, 1 data error (undecodable or malformed input),
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence, TextIO
from uuid import UUID

from sensekit.beacon import (
    EddystoneTlm,
    EddystoneUid,
    EddystoneUrl,
    IBeaconFrame,
    decode_advertisement,
    estimate_distance,
    proximity_zone,
    reference_power,
)
from sensekit.core import (
    AccuracyMode,
    RealTimeBase,
    Role,
    SensorConfig,
    SensorManager,
    SensorType,
    SimulatedTimeBase,
    get_platform_profile,
)
from sensekit.drivers import ReplayDriver, read_trace
from sensekit.energy import composition_caveats, load_profile, predict_lifetime, resolve_mode, simulate_discharge
from sensekit.errors import (
    CorruptTrace,
    FrameError,
    InvalidSeries,
    ParseError,
    SchemaMismatch,
    SensingKitError,
    UnknownSensor,
)
from sensekit.serialization import SessionWriter, config_to_dict, convert_session_file

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2

_DATA_ERRORS = (FrameError, ParseError, CorruptTrace, SchemaMismatch, InvalidSeries)


class UsageError(Exception):
    pass


def _exit_code(exc: SensingKitError) -> int:
    return EXIT_DATA if isinstance(exc, _DATA_ERRORS) else EXIT_USAGE


# -- list-sensors -------------------------------------------------------------


def cmd_list_sensors(args: argparse.Namespace, out: TextIO) -> int:
    profile = get_platform_profile(args.profile or "ios")
    out.write(f"{'SENSOR':<20} MODE\n")
    for sensor_type in SensorType:
        out.write(f"{sensor_type.value:<20} {profile.mode(sensor_type).value}\n")
    return EXIT_OK


# -- record -------------------------------------------------------------------


def _default_identity(seed: int) -> IBeaconFrame:
    rng = random.Random(f"{seed}:broadcast-identity")
    return IBeaconFrame(UUID(int=rng.getrandbits(128)), 1, 1, -59)


def parse_sensor_spec(spec: str, seed: int = 0) -> SensorConfig:
    """Parse ``name[:key=value,...]`` into a SensorConfig.

    Keys: ``rate`` (Hz), ``accuracy`` (best|balanced|low-power), ``roles``
    (scan, broadcast or scan+broadcast) and, for iBeacon broadcasting,
    ``uuid``, ``major``, ``minor``, ``power``.
    """
    name, _, options = spec.partition(":")
    try:
        sensor_type = SensorType.parse(name)
    except UnknownSensor:
        raise UsageError(f"unknown sensor {name!r}") from None
    opts = {}
    for item in filter(None, options.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"{sensor_type}: expected key=value, got {item!r}")
        opts[key.strip().lower()] = value.strip()

    overrides: dict = {}
    try:
        if "rate" in opts:
            overrides["sample_rate_hz"] = float(opts.pop("rate"))
        if "accuracy" in opts:
            wanted = opts.pop("accuracy").replace("-", "").lower()
            matches = [m for m in AccuracyMode if m.value.lower() == wanted]
            if not matches:
                raise UsageError(f"{sensor_type}: unknown accuracy {wanted!r}")
            overrides["accuracy"] = matches[0]
        if "roles" in opts:
            names = opts.pop("roles").lower().split("+")
            roles = {r for r in Role if r.value.lower() in names}
            if len(roles) != len(set(names)):
                raise UsageError(f"{sensor_type}: roles must be scan and/or broadcast")
            overrides["roles"] = frozenset(roles)
        identity_keys = {k: opts.pop(k) for k in ("uuid", "major", "minor", "power") if k in opts}
    except ValueError as exc:
        raise UsageError(f"{sensor_type}: {exc}") from None
    if opts:
        raise UsageError(f"{sensor_type}: unknown option(s) {', '.join(sorted(opts))}")

    config = SensorConfig.default(sensor_type, **overrides)
    if sensor_type is SensorType.IBEACON_PROXIMITY and Role.BROADCAST in config.roles:
        base = _default_identity(seed)
        try:
            identity = IBeaconFrame(
                UUID(identity_keys["uuid"]) if "uuid" in identity_keys else base.uuid,
                int(identity_keys.get("major", base.major)),
                int(identity_keys.get("minor", base.minor)),
                int(identity_keys.get("power", base.measured_power)),
            )
        except ValueError as exc:
            raise UsageError(f"{sensor_type}: bad beacon identity: {exc}") from None
        config = SensorConfig.default(sensor_type, beacon_identity=identity, **overrides)
    elif identity_keys:
        raise UsageError(f"{sensor_type}: uuid/major/minor/power apply to iBeacon broadcasting only")
    return config


def cmd_record(args: argparse.Namespace, out: TextIO) -> int:
    if args.duration <= 0:
        raise UsageError("duration must be positive")
    if not args.sensor and not args.replay:
        raise UsageError("nothing to record: give at least one --sensor or --replay")
    seed = args.seed if args.seed is not None else 0
    profile = get_platform_profile(args.profile or "ios")
    time_base = RealTimeBase() if args.realtime else SimulatedTimeBase()
    manager = SensorManager(profile, seed=seed, time_base=time_base)

    handles = []
    for spec in args.sensor:
        config = parse_sensor_spec(spec, seed)
        try:
            handles.append(manager.register_sensor(config.sensor_type, config))
        except SensingKitError as exc:
            raise UsageError(f"{config.sensor_type}: {exc.code}: {exc}") from None
    for trace_path in args.replay:
        trace = read_trace(trace_path)
        try:
            handles.append(manager.register_sensor(trace.sensor_type, driver=ReplayDriver(trace.sensor_type, trace)))
        except SensingKitError as exc:
            raise UsageError(f"{trace.sensor_type}: {exc.code}: {exc}") from None

    output = Path(args.output or "session")
    metadata = {
        "profile": profile.name,
        "seed": seed,
        "durationSeconds": args.duration,
        "wallClockEpoch": manager.clock.wall_clock_epoch.isoformat(),
    }
    with SessionWriter(output, args.format, metadata) as writer:
        for handle in handles:
            config = manager.config(handle)
            writer.add_sensor(config.sensor_type, config_to_dict(config))
            manager.subscribe(handle, writer.write)
            manager.start_continuous_sensing(handle)
        manager.run_for(args.duration)
        for handle in handles:
            manager.stop_continuous_sensing(handle)
        counts = writer.counts
    for sensor_type, n in counts.items():
        out.write(f"{sensor_type.value}: {n} samples\n")
    out.write(f"session written to {output}\n")
    return EXIT_OK


# -- decode-beacon ------------------------------------------------------------


def cmd_decode_beacon(args: argparse.Namespace, out: TextIO) -> int:
    text = "".join("".join(args.hex).split())
    if text.lower().startswith("0x"):
        text = text[2:]
    try:
        data = bytes.fromhex(text)
    except ValueError:
        sys.stderr.write("BadHex: input is not a hex string\n")
        return EXIT_DATA
    frame = decode_advertisement(data)
    if isinstance(frame, IBeaconFrame):
        lines = [
            ("type", "iBeacon"),
            ("uuid", str(frame.uuid).upper()),
            ("major", frame.major),
            ("minor", frame.minor),
            ("measuredPower", f"{frame.measured_power} dBm"),
        ]
    elif isinstance(frame, EddystoneUid):
        lines = [
            ("type", "Eddystone-UID"),
            ("namespace", frame.namespace.hex()),
            ("instance", frame.instance.hex()),
            ("txPower", f"{frame.tx_power} dBm"),
        ]
    elif isinstance(frame, EddystoneUrl):
        lines = [("type", "Eddystone-URL"), ("url", frame.url), ("txPower", f"{frame.tx_power} dBm")]
    else:
        assert isinstance(frame, EddystoneTlm)
        lines = [
            ("type", "Eddystone-TLM"),
            ("batteryMilliVolts", frame.battery_millivolts),
            ("temperatureC", f"{frame.temperature_c:g}"),
            ("advCount", frame.adv_count),
            ("uptimeSeconds", f"{frame.uptime_deciseconds / 10:g}"),
        ]
    if args.rssi is not None:
        ref = reference_power(frame)
        if ref is not None:
            d = estimate_distance(args.rssi, ref, args.exponent)
            lines += [("distanceMeters", f"{d:.3f}"), ("zone", proximity_zone(d).value)]
    for key, value in lines:
        out.write(f"{key}: {value}\n")
    return EXIT_OK


# -- predict / simulate -------------------------------------------------------


def _energy_modes(args: argparse.Namespace):
    profile = load_profile(args.profile or "iphone5s")
    return profile, [resolve_mode(profile, m) for m in args.mode]


def cmd_predict(args: argparse.Namespace, out: TextIO) -> int:
    profile, modes = _energy_modes(args)
    out.write(f"{predict_lifetime(profile, modes):.2f}\n")
    for note in composition_caveats(profile, modes):
        out.write(f"note: {note}\n")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, out: TextIO) -> int:
    if not args.step > 0:
        raise UsageError("step must be a positive number of minutes")
    profile, modes = _energy_modes(args)
    series = simulate_discharge(profile, modes, args.step)
    rows = ["hours,levelPercent"] + [f"{t:.4f},{100 * level:.2f}" for t, level in series.points]
    text = "\n".join(rows) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


# -- convert ------------------------------------------------------------------


def cmd_convert(args: argparse.Namespace, out: TextIO) -> int:
    path = convert_session_file(args.input, args.to, args.output)
    out.write(f"{path}\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sensekit", description=__doc__.splitlines()[0])
    parser.add_argument("--profile", help="platform profile (ios, android, file) or energy profile (iphone5s, file)")
    parser.add_argument("--seed", type=int, help="seed for synthetic drivers (default 0)")
    parser.add_argument("--output", help="output directory or file")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-sensors", parents=[common], help="show sensor availability for a platform profile")
    p.set_defaults(func=cmd_list_sensors)

    p = sub.add_parser("record", parents=[common], help="record a session from simulated or replayed drivers")
    p.add_argument("--sensor", action="append", default=[], metavar="NAME[:k=v,...]")
    p.add_argument("--replay", action="append", default=[], metavar="TRACE")
    p.add_argument("--duration", type=float, required=True, help="session length in seconds")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--realtime", action="store_true", help="pace sampling by the wall clock")
    p.set_defaults(func=cmd_record)

    p = sub.add_parser("decode-beacon", parents=[common], help="decode an iBeacon or Eddystone frame from hex")
    p.add_argument("hex", nargs="+")
    p.add_argument("--rssi", type=float, help="also estimate distance from this RSSI (dBm)")
    p.add_argument("--exponent", type=float, default=2.0, help="path-loss exponent (default 2.0)")
    p.set_defaults(func=cmd_decode_beacon)

    for name, func, help_text in (
        ("predict", cmd_predict, "predict battery lifetime in hours"),
        ("simulate", cmd_simulate, "simulate a battery discharge series as CSV"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--mode", action="append", default=[], help="sensing mode, e.g. ibeacon-scan (repeatable)")
        if name == "simulate":
            p.add_argument("--step", type=float, default=60.0, help="step in minutes (default 60)")
        p.set_defaults(func=func)

    p = sub.add_parser("convert", parents=[common], help="convert a session file between csv and jsonl")
    p.add_argument("input")
    p.add_argument("--to", choices=("csv", "jsonl"), required=True)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SensingKitError as exc:
        sys.stderr.write(f"{exc.code}: {exc}\n")
        return _exit_code(exc)
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
