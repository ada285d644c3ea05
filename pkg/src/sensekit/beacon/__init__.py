"""BLE beacon codecs, distance estimation and ranging."""

from sensekit.beacon.frames import (
    BeaconFrame,
    EddystoneFrame,
    EddystoneTlm,
    EddystoneUid,
    EddystoneUrl,
    IBeaconFrame,
    decode_advertisement,
    decode_eddystone,
    decode_ibeacon,
    decode_url,
    encode_eddystone,
    encode_ibeacon,
    encode_url,
)
from sensekit.beacon.ranging import (
    BeaconRanger,
    BeaconSighting,
    ProximityEstimate,
    ProximityZone,
    RangingWindow,
    beacon_identity,
    estimate_distance,
    proximity_zone,
    range_beacons,
    reference_power,
)

__all__ = [
    "BeaconFrame",
    "BeaconRanger",
    "BeaconSighting",
    "EddystoneFrame",
    "EddystoneTlm",
    "EddystoneUid",
    "EddystoneUrl",
    "IBeaconFrame",
    "ProximityEstimate",
    "ProximityZone",
    "RangingWindow",
    "beacon_identity",
    "decode_advertisement",
    "decode_eddystone",
    "decode_ibeacon",
    "decode_url",
    "encode_eddystone",
    "encode_ibeacon",
    "encode_url",
    "estimate_distance",
    "proximity_zone",
    "range_beacons",
    "reference_power",
]
