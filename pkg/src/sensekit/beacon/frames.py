"""iBeacon and Eddystone advertisement codecs.

iBeacon frames are the full 27-byte manufacturer-specific AD structure::

    1A FF 4C 00 02 15 <uuid:16> <major:2 BE> <minor:2 BE> <power:1 signed>

Eddystone frames are the service-data bytes that follow the 0xFEAA service
UUID, starting with the frame-type byte (0x00 UID, 0x10 URL, 0x20 TLM).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Union
from uuid import UUID

from sensekit.errors import (
    BadBeaconType,
    BadCompanyId,
    BadLength,
    BadUrl,
    UnknownFrameType,
    UnsupportedVersion,
    UrlTooLong,
)

IBEACON_LENGTH = 27
APPLE_COMPANY_ID = b"\x4c\x00"
EDDYSTONE_SERVICE_UUID = b"\xaa\xfe"

FRAME_UID = 0x00
FRAME_URL = 0x10
FRAME_TLM = 0x20

URL_SCHEMES = ("http://www.", "https://www.", "http://", "https://")
URL_EXPANSIONS = (
    ".com/", ".org/", ".edu/", ".net/", ".info/", ".biz/", ".gov/",
    ".com", ".org", ".edu", ".net", ".info", ".biz", ".gov",
)
MAX_URL_BYTES = 18  # scheme byte + up to 17 body bytes

# Longest-first so greedy matching prefers ".com/" over ".com".
_SCHEMES_BY_LENGTH = sorted(enumerate(URL_SCHEMES), key=lambda p: -len(p[1]))
_EXPANSIONS_BY_LENGTH = sorted(enumerate(URL_EXPANSIONS), key=lambda p: -len(p[1]))


def _check_int8(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or not -128 <= value <= 127:
        raise ValueError(f"{name} must be a signed byte, got {value!r}")


def _check_uint(name: str, value: int, bits: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < (1 << bits):
        raise ValueError(f"{name} must be an unsigned {bits}-bit integer, got {value!r}")


@dataclass(frozen=True)
class IBeaconFrame:
    uuid: UUID
    major: int
    minor: int
    measured_power: int

    def __post_init__(self) -> None:
        if not isinstance(self.uuid, UUID):
            object.__setattr__(self, "uuid", UUID(str(self.uuid)))
        _check_uint("major", self.major, 16)
        _check_uint("minor", self.minor, 16)
        _check_int8("measured_power", self.measured_power)


@dataclass(frozen=True)
class EddystoneUid:
    namespace: bytes
    instance: bytes
    tx_power: int

    def __post_init__(self) -> None:
        if not isinstance(self.namespace, bytes) or len(self.namespace) != 10:
            raise ValueError("namespace must be 10 bytes")
        if not isinstance(self.instance, bytes) or len(self.instance) != 6:
            raise ValueError("instance must be 6 bytes")
        _check_int8("tx_power", self.tx_power)


@dataclass(frozen=True)
class EddystoneUrl:
    tx_power: int
    url: str

    def __post_init__(self) -> None:
        _check_int8("tx_power", self.tx_power)


@dataclass(frozen=True)
class EddystoneTlm:
    battery_millivolts: int
    temperature_c: float
    adv_count: int
    uptime_deciseconds: int

    def __post_init__(self) -> None:
        _check_uint("battery_millivolts", self.battery_millivolts, 16)
        _check_uint("adv_count", self.adv_count, 32)
        _check_uint("uptime_deciseconds", self.uptime_deciseconds, 32)
        raw = self.temperature_c * 256
        if raw != int(raw) or not -32768 <= raw <= 32767:
            raise ValueError(f"temperature {self.temperature_c} is not representable in signed 8.8 fixed point")
        object.__setattr__(self, "temperature_c", float(self.temperature_c))


EddystoneFrame = Union[EddystoneUid, EddystoneUrl, EddystoneTlm]
BeaconFrame = Union[IBeaconFrame, EddystoneUid, EddystoneUrl, EddystoneTlm]


# -- iBeacon ------------------------------------------------------------------


def encode_ibeacon(frame: IBeaconFrame) -> bytes:
    return (
        bytes([0x1A, 0xFF]) + APPLE_COMPANY_ID + bytes([0x02, 0x15])
        + frame.uuid.bytes
        + struct.pack(">HHb", frame.major, frame.minor, frame.measured_power)
    )


def decode_ibeacon(data: bytes) -> IBeaconFrame:
    data = bytes(data)
    if len(data) != IBEACON_LENGTH or data[0] != 0x1A:
        raise BadLength(f"iBeacon advertisement must be {IBEACON_LENGTH} bytes with AD length 0x1A")
    if data[1] != 0xFF:
        raise BadBeaconType(f"AD type 0x{data[1]:02X} is not manufacturer-specific data")
    if data[2:4] != APPLE_COMPANY_ID:
        raise BadCompanyId(f"company id {data[2:4].hex().upper()} is not Apple (4C00)")
    if data[4] != 0x02 or data[5] != 0x15:
        raise BadBeaconType(f"beacon type/length {data[4:6].hex().upper()} is not 0215")
    major, minor, power = struct.unpack(">HHb", data[22:27])
    return IBeaconFrame(UUID(bytes=data[6:22]), major, minor, power)


# -- Eddystone ----------------------------------------------------------------


def encode_url(url: str) -> bytes:
    """Compress a URL into scheme byte + body using the Eddystone code tables."""
    for code, scheme in _SCHEMES_BY_LENGTH:
        if url.startswith(scheme):
            out = bytearray([code])
            rest = url[len(scheme):]
            break
    else:
        raise BadUrl(f"URL {url!r} has no encodable scheme")
    i = 0
    while i < len(rest):
        for code, text in _EXPANSIONS_BY_LENGTH:
            if rest.startswith(text, i):
                out.append(code)
                i += len(text)
                break
        else:
            ch = ord(rest[i])
            if not 0x21 <= ch <= 0x7E:
                raise BadUrl(f"character {rest[i]!r} cannot be encoded")
            out.append(ch)
            i += 1
    if len(out) > MAX_URL_BYTES:
        raise UrlTooLong(f"URL encodes to {len(out)} bytes, limit is {MAX_URL_BYTES}")
    return bytes(out)


def decode_url(data: bytes) -> str:
    if not data:
        raise BadLength("URL frame has no scheme byte")
    if data[0] >= len(URL_SCHEMES):
        raise BadUrl(f"unknown URL scheme code 0x{data[0]:02X}")
    parts = [URL_SCHEMES[data[0]]]
    for b in data[1:]:
        if b < len(URL_EXPANSIONS):
            parts.append(URL_EXPANSIONS[b])
        elif 0x21 <= b <= 0x7E:
            parts.append(chr(b))
        else:
            raise BadUrl(f"reserved URL byte 0x{b:02X}")
    return "".join(parts)


def encode_eddystone(frame: EddystoneFrame) -> bytes:
    if isinstance(frame, EddystoneUid):
        return struct.pack(">Bb", FRAME_UID, frame.tx_power) + frame.namespace + frame.instance + b"\x00\x00"
    if isinstance(frame, EddystoneUrl):
        return struct.pack(">Bb", FRAME_URL, frame.tx_power) + encode_url(frame.url)
    if isinstance(frame, EddystoneTlm):
        return struct.pack(
            ">BBHhII",
            FRAME_TLM,
            0x00,
            frame.battery_millivolts,
            int(frame.temperature_c * 256),
            frame.adv_count,
            frame.uptime_deciseconds,
        )
    raise TypeError(f"not an Eddystone frame: {frame!r}")


def decode_eddystone(data: bytes) -> EddystoneFrame:
    data = bytes(data)
    if not data:
        raise BadLength("empty Eddystone service data")
    kind = data[0]
    if kind == FRAME_UID:
        # RFU tail is optional on the wire.
        if len(data) not in (18, 20):
            raise BadLength(f"UID frame must be 18 or 20 bytes, got {len(data)}")
        (tx,) = struct.unpack(">b", data[1:2])
        return EddystoneUid(data[2:12], data[12:18], tx)
    if kind == FRAME_URL:
        if not 3 <= len(data) <= 2 + MAX_URL_BYTES:
            raise BadLength(f"URL frame must be 3..{2 + MAX_URL_BYTES} bytes, got {len(data)}")
        (tx,) = struct.unpack(">b", data[1:2])
        return EddystoneUrl(tx, decode_url(data[2:]))
    if kind == FRAME_TLM:
        if len(data) != 14:
            raise BadLength(f"TLM frame must be 14 bytes, got {len(data)}")
        if data[1] != 0x00:
            raise UnsupportedVersion(f"TLM version 0x{data[1]:02X} is not supported")
        _, _, mv, temp, adv, sec = struct.unpack(">BBHhII", data)
        return EddystoneTlm(mv, temp / 256, adv, sec)
    raise UnknownFrameType(f"Eddystone frame type 0x{kind:02X} is not UID, URL or TLM")


def decode_advertisement(data: bytes) -> BeaconFrame:
    """Decode an iBeacon AD structure or Eddystone service data, auto-detected.

    Eddystone input may be bare service data or wrapped in its AD structures
    (an optional ``03 03 AA FE`` UUID list, then ``<len> 16 AA FE ...``).
    """
    data = bytes(data)
    if not data:
        raise BadLength("empty advertisement")
    if data[0] in (FRAME_UID, FRAME_URL, FRAME_TLM):
        return decode_eddystone(data)
    if len(data) >= 2 and data[1] == 0xFF:
        return decode_ibeacon(data)
    if data[:4] == b"\x03\x03" + EDDYSTONE_SERVICE_UUID:
        data = data[4:]
    if len(data) >= 4 and data[1] == 0x16 and data[2:4] == EDDYSTONE_SERVICE_UUID:
        if data[0] != len(data) - 1:
            raise BadLength(f"AD length byte {data[0]} does not match {len(data) - 1} remaining bytes")
        return decode_eddystone(data[4:])
    return decode_eddystone(data)
