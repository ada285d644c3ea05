import math
import statistics
from uuid import UUID

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sample_data import beacon_frames, eddystone_urls
from sensekit.beacon import (
    BeaconRanger,
    BeaconSighting,
    EddystoneTlm,
    EddystoneUid,
    EddystoneUrl,
    IBeaconFrame,
    ProximityZone,
    decode_advertisement,
    decode_eddystone,
    decode_ibeacon,
    encode_eddystone,
    encode_ibeacon,
    encode_url,
    estimate_distance,
    proximity_zone,
    range_beacons,
    reference_power,
)
from sensekit.errors import (
    BadCompanyId,
    BadLength,
    BadUrl,
    FrameError,
    InvalidExponent,
    UnknownFrameType,
    UnsupportedVersion,
    UrlTooLong,
)

ZERO_UUID = UUID(int=0)


# -- reference encoders (written from the public layouts, not from the codec) --


def reference_ibeacon(uuid: UUID, major: int, minor: int, power: int) -> bytes:
    out = [26, 0xFF, 0x4C, 0x00, 0x02, 0x15]
    out += list(uuid.bytes)
    out += [major >> 8, major & 0xFF, minor >> 8, minor & 0xFF, power & 0xFF]
    return bytes(out)


REFERENCE_SCHEMES = {0: "http://www.", 1: "https://www.", 2: "http://", 3: "https://"}
REFERENCE_EXPANSIONS = {
    0: ".com/", 1: ".org/", 2: ".edu/", 3: ".net/", 4: ".info/", 5: ".biz/", 6: ".gov/",
    7: ".com", 8: ".org", 9: ".edu", 10: ".net", 11: ".info", 12: ".biz", 13: ".gov",
}


def reference_url_decode(frame: bytes) -> tuple[int, str]:
    assert frame[0] == 0x10
    tx = frame[1] - 256 if frame[1] > 127 else frame[1]
    text = REFERENCE_SCHEMES[frame[2]]
    for b in frame[3:]:
        text += REFERENCE_EXPANSIONS.get(b, chr(b))
    return tx, text


def reference_uid(namespace: bytes, instance: bytes, tx: int) -> bytes:
    return bytes([0x00, tx & 0xFF]) + namespace + instance + bytes(2)


def reference_tlm(mv: int, temp_c: float, adv: int, uptime: int) -> bytes:
    raw = round(temp_c * 256) & 0xFFFF
    return bytes([0x20, 0x00]) + mv.to_bytes(2, "big") + raw.to_bytes(2, "big") + adv.to_bytes(4, "big") + uptime.to_bytes(4, "big")


# -- iBeacon --------------------------------------------------------------------


def test_ibeacon_example_bytes():
    encoded = encode_ibeacon(IBeaconFrame(ZERO_UUID, 1, 2, -59))
    expected = bytes.fromhex("1aff4c000215") + bytes(16) + bytes.fromhex("00010002c5")
    assert encoded == expected
    assert encoded == reference_ibeacon(ZERO_UUID, 1, 2, -59)
    assert len(encoded) == 27 and encoded[-1] == 0xC5


@settings(max_examples=300)
@given(beacon_frames["ibeacon"])
def test_ibeacon_matches_reference(frame):
    encoded = encode_ibeacon(frame)
    assert encoded == reference_ibeacon(frame.uuid, frame.major, frame.minor, frame.measured_power)
    assert decode_ibeacon(encoded) == frame
    assert decode_advertisement(encoded) == frame


def test_ibeacon_errors():
    good = encode_ibeacon(IBeaconFrame(ZERO_UUID, 1, 2, -59))
    with pytest.raises(BadCompanyId):
        decode_ibeacon(good[:2] + b"\xff\xff" + good[4:])
    with pytest.raises(BadLength):
        decode_ibeacon(good[:-1])
    with pytest.raises(FrameError):
        decode_ibeacon(good[:4] + b"\x02\x16" + good[6:])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(major=-1, minor=0, measured_power=0),
        dict(major=65536, minor=0, measured_power=0),
        dict(major=0, minor=0, measured_power=128),
        dict(major=0, minor=0, measured_power=-129),
    ],
)
def test_ibeacon_field_ranges(kwargs):
    with pytest.raises(ValueError):
        IBeaconFrame(ZERO_UUID, **kwargs)


# -- Eddystone --------------------------------------------------------------------


def test_url_example_bytes():
    encoded = encode_eddystone(EddystoneUrl(-10, "http://www.google.com"))
    assert encoded == bytes([0x10, 0xF6, 0x00]) + b"google" + bytes([0x07])
    assert reference_url_decode(encoded) == (-10, "http://www.google.com")
    assert decode_eddystone(encoded) == EddystoneUrl(-10, "http://www.google.com")


@pytest.mark.parametrize(
    "url,body",
    [
        ("https://example.com/", b"\x03example\x00"),
        ("http://a.org", b"\x02a\x08"),
        ("https://www.x.info/y", b"\x01x\x04y"),
        ("http://www.comcast.net/", b"\x00comcast\x03"),
    ],
)
def test_url_compression(url, body):
    assert encode_url(url) == body


@settings(max_examples=300)
@given(eddystone_urls(), st.integers(-128, 127))
def test_url_round_trip_and_oracle(url, tx):
    try:
        encoded = encode_eddystone(EddystoneUrl(tx, url))
    except UrlTooLong:
        return
    assert reference_url_decode(encoded) == (tx, url)
    assert decode_eddystone(encoded) == EddystoneUrl(tx, url)


def test_url_too_long():
    with pytest.raises(UrlTooLong):
        encode_url("https://averyveryverylonghostname.com/")
    assert len(encode_url("https://abcdefghijklmnop.com")) == 18


def test_url_bad_input():
    with pytest.raises(BadUrl):
        encode_url("ftp://example.com")
    with pytest.raises(BadUrl):
        encode_url("http://exa mple.com")
    with pytest.raises(BadUrl):
        decode_eddystone(bytes([0x10, 0x00, 0x00, 0x20]))
    with pytest.raises(BadUrl):
        decode_eddystone(bytes([0x10, 0x00, 0x04, 0x41]))


@settings(max_examples=300)
@given(beacon_frames["uid"])
def test_uid_round_trip(frame):
    encoded = encode_eddystone(frame)
    assert encoded == reference_uid(frame.namespace, frame.instance, frame.tx_power)
    assert decode_eddystone(encoded) == frame
    assert decode_eddystone(encoded[:18]) == frame


@settings(max_examples=300)
@given(beacon_frames["tlm"])
def test_tlm_round_trip(frame):
    encoded = encode_eddystone(frame)
    assert encoded == reference_tlm(frame.battery_millivolts, frame.temperature_c, frame.adv_count, frame.uptime_deciseconds)
    assert decode_eddystone(encoded) == frame


def test_tlm_example():
    frame = EddystoneTlm(3000, -1.5, 7, 100)
    assert encode_eddystone(frame).hex() == "20000bb8fe800000000700000064"
    with pytest.raises(ValueError):
        EddystoneTlm(3000, 0.001, 0, 0)


def test_eddystone_errors():
    with pytest.raises(UnknownFrameType):
        decode_eddystone(bytes([0x30]) + bytes(17))
    with pytest.raises(UnsupportedVersion):
        decode_eddystone(bytes([0x20, 0x01]) + bytes(12))
    with pytest.raises(BadLength):
        decode_eddystone(bytes([0x00]) + bytes(10))
    with pytest.raises(BadLength):
        decode_eddystone(b"")


def test_wrapped_eddystone_advertisement():
    frame = EddystoneUrl(-10, "http://www.google.com")
    service = encode_eddystone(frame)
    ad = bytes([len(service) + 3, 0x16, 0xAA, 0xFE]) + service
    assert decode_advertisement(ad) == frame
    assert decode_advertisement(bytes.fromhex("0303aafe") + ad) == frame


@settings(max_examples=2000)
@given(st.binary(max_size=40))
def test_decoders_are_total(data):
    for decode in (decode_advertisement, decode_ibeacon, decode_eddystone):
        try:
            decode(data)
        except FrameError:
            pass


# -- distance -----------------------------------------------------------------


def invert_path_loss(rssi, ref, n):
    """Solve ref - 10 n log10(d) = rssi for d by bisection on the forward model."""
    lo, hi = 1e-30, 1e30
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if ref - 10 * n * math.log10(mid) > rssi:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def test_distance_examples():
    assert estimate_distance(-59, -59, 2.0) == 1.0
    assert abs(estimate_distance(-79, -59, 2.0) - 10.0) <= 1e-9
    assert abs(estimate_distance(-79, -59, 2.0) - invert_path_loss(-79, -59, 2.0)) <= 1e-9
    assert estimate_distance(-49, -59, 2.0) == pytest.approx(10 ** -0.5, abs=1e-12)
    assert round(estimate_distance(-49, -59, 2.0), 3) == 0.316


@settings(max_examples=200)
@given(st.integers(-120, 0), st.integers(-100, -20), st.floats(1.0, 6.0))
def test_distance_matches_numeric_inversion(rssi, ref, n):
    assert estimate_distance(rssi, ref, n) == pytest.approx(invert_path_loss(rssi, ref, n), rel=1e-9)


@settings(max_examples=200)
@given(st.integers(-128, 127), st.floats(0.01, 10.0))
def test_reference_point_identity(ref, n):
    assert estimate_distance(ref, ref, n) == 1.0


@settings(max_examples=200)
@given(st.integers(-120, 0), st.integers(-120, 0), st.integers(-100, -20), st.floats(0.5, 6.0))
def test_distance_monotone(r1, r2, ref, n):
    if r1 < r2:
        assert estimate_distance(r1, ref, n) > estimate_distance(r2, ref, n)


@pytest.mark.parametrize("n", [0.0, -2.0])
def test_bad_exponent(n):
    with pytest.raises(InvalidExponent):
        estimate_distance(-60, -59, n)


def test_eddystone_reference_power():
    assert reference_power(EddystoneUid(bytes(10), bytes(6), -18)) == -59
    assert reference_power(IBeaconFrame(ZERO_UUID, 0, 0, -61)) == -61
    assert reference_power(EddystoneTlm(3000, 20.0, 0, 0)) is None


def test_zones():
    assert proximity_zone(0.3) is ProximityZone.IMMEDIATE
    assert proximity_zone(2.0) is ProximityZone.NEAR
    assert proximity_zone(4.0) is ProximityZone.FAR
    assert proximity_zone(None) is ProximityZone.UNKNOWN
    assert proximity_zone(0.3, immediate=0.2) is ProximityZone.NEAR


# -- ranging ------------------------------------------------------------------


def sighting(frame, rssi, seconds=0.0):
    return BeaconSighting(frame, rssi, round(seconds * 1e9))


def test_range_single_beacon_mean():
    beacon = IBeaconFrame(ZERO_UUID, 1, 2, -59)
    ((_, est),) = range_beacons([sighting(beacon, -58), sighting(beacon, -60)], 2.0)
    assert est.distance_meters == 1.0
    assert est.zone is ProximityZone.NEAR


def test_range_two_beacons_and_empty():
    a, b = IBeaconFrame(ZERO_UUID, 1, 1, -59), IBeaconFrame(ZERO_UUID, 1, 2, -59)
    assert len(range_beacons([sighting(a, -70), sighting(b, -60), sighting(a, -72)])) == 2
    assert range_beacons([]) == []


def test_range_median_option():
    beacon = IBeaconFrame(ZERO_UUID, 1, 2, -59)
    sightings = [sighting(beacon, r) for r in (-59, -59, -99)]
    ((_, mean),) = range_beacons(sightings, aggregate="mean")
    ((_, median),) = range_beacons(sightings, aggregate="median")
    assert mean.distance_meters == pytest.approx(10 ** ((statistics.fmean([-59, -59, -99]) * -1 - 59) / 20))
    assert median.distance_meters == 1.0


def test_tlm_frames_not_ranged():
    assert range_beacons([sighting(EddystoneTlm(3000, 20.0, 0, 0), -60)]) == []


@settings(max_examples=100)
@given(st.integers(0, 10**11), st.lists(st.floats(0, 30), max_size=20))
def test_ranging_window_count(duration_ns, offsets):
    ranger = BeaconRanger(start_nanos=5)
    beacon = IBeaconFrame(ZERO_UUID, 1, 2, -59)
    for t in sorted(offsets):
        ranger.add(BeaconSighting(beacon, -65, 5 + round(t * 1e9)))
    windows = ranger.advance_to(5 + duration_ns)
    assert len(windows) == duration_ns // 10**9
    assert [w.index for w in windows] == list(range(len(windows)))
    for w in windows:
        inside = [t for t in offsets if w.index <= t < w.index + 1]
        assert len(w.estimates) == (1 if inside else 0)


def test_ranger_incremental():
    ranger = BeaconRanger()
    beacon = IBeaconFrame(ZERO_UUID, 1, 2, -59)
    ranger.add(sighting(beacon, -59, 0.2))
    assert ranger.advance_to(999_999_999) == []
    (w,) = ranger.advance_to(10**9)
    assert w.estimates[0][1].distance_meters == 1.0
    with pytest.raises(ValueError):
        ranger.add(sighting(beacon, -59, 0.5))
