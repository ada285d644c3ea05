"""Seeded synthetic generators standing in for physical sensors.

Each driver owns a ``random.Random`` seeded from ``"<seed>:<SensorType>"``;
string seeding is stable across processes and Python versions, so a
(type, config, seed) triple always yields the same stream.
"""

from __future__ import annotations

import math
import random
from typing import Any, Callable
from uuid import UUID

from sensekit.beacon.frames import EddystoneTlm, EddystoneUid, EddystoneUrl, IBeaconFrame
from sensekit.beacon.ranging import BeaconSighting
from sensekit.core.sensors import AccuracyMode, Role, SensorConfig, SensorType
from sensekit.drivers.base import ClockedDriver, Driver, EventDriver
from sensekit.drivers.payloads import (
    Acceleration,
    Activity,
    AltimeterData,
    AmbientTemperatureData,
    Attitude,
    BatteryData,
    BatteryState,
    BluetoothDeviceData,
    Confidence,
    HumidityData,
    LightData,
    LocationData,
    MagneticField,
    MicrophoneData,
    MotionActivityData,
    PedometerData,
    RotationRate,
    ScreenState,
    ScreenStatusData,
    check_payload,
)
from sensekit.errors import InvalidConfig

MEAN_DWELL_SECONDS = 30.0
MICROPHONE_FRAME_SAMPLES = 4410
MAX_WALK_SPEED_MPS = 1.5
METERS_PER_DEGREE = 111_320.0
STRIDE_METERS = 0.75
TWO_PI = 2.0 * math.pi


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"{seed}:{tag}")


class AttitudeModel:
    """Smooth, seeded device orientation as a pure function of session time.

    Fused-motion drivers of one session share a model, so Gravity, Rotation
    and Gyroscope readings taken at the same instant agree with each other.
    """

    def __init__(self, seed: int):
        rng = _rng(seed, "attitude")
        self.roll = (rng.uniform(0.05, 0.35), TWO_PI * rng.uniform(0.05, 0.3), rng.uniform(0, TWO_PI))
        self.pitch = (rng.uniform(0.05, 0.25), TWO_PI * rng.uniform(0.05, 0.3), rng.uniform(0, TWO_PI))
        self.yaw_rate = rng.uniform(-0.05, 0.05)
        self.yaw0 = rng.uniform(-math.pi, math.pi)

    def angles(self, t: float) -> tuple[float, float, float]:
        ra, rw, rp = self.roll
        pa, pw, pp = self.pitch
        return ra * math.sin(rw * t + rp), pa * math.sin(pw * t + pp), self.yaw0 + self.yaw_rate * t

    def angle_rates(self, t: float) -> tuple[float, float, float]:
        ra, rw, rp = self.roll
        pa, pw, pp = self.pitch
        return ra * rw * math.cos(rw * t + rp), pa * pw * math.cos(pw * t + pp), self.yaw_rate

    def gravity(self, t: float) -> tuple[float, float, float]:
        roll, pitch, _ = self.angles(t)
        return math.sin(pitch), -math.sin(roll) * math.cos(pitch), -math.cos(roll) * math.cos(pitch)

    def quaternion(self, t: float) -> tuple[float, float, float, float]:
        roll, pitch, yaw = self.angles(t)
        cr, sr = math.cos(roll / 2), math.sin(roll / 2)
        cp, sp = math.cos(pitch / 2), math.sin(pitch / 2)
        cy, sy = math.cos(yaw / 2), math.sin(yaw / 2)
        w = cr * cp * cy + sr * sp * sy
        x = sr * cp * cy - cr * sp * sy
        y = cr * sp * cy + sr * cp * sy
        z = cr * cp * sy - sr * sp * cy
        n = math.sqrt(w * w + x * x + y * y + z * z)
        return x / n, y / n, z / n, w / n


class _Smoothed:
    """First-order low-pass filtered Gaussian noise, one state per axis."""

    def __init__(self, rng: random.Random, sigma: float, axes: int = 1, alpha: float = 0.8):
        self.rng = rng
        self.sigma = sigma
        self.alpha = alpha
        self.state = [0.0] * axes

    def step(self) -> list[float]:
        a = self.alpha
        self.state = [a * s + (1 - a) * self.rng.gauss(0.0, self.sigma) for s in self.state]
        return self.state


class _SyntheticClocked(ClockedDriver):
    def __init__(self, sensor_type: SensorType, config: SensorConfig, seed: int):
        super().__init__(sensor_type, config)
        self.rng = _rng(seed, sensor_type.value)

    def emit(self) -> tuple[int, Any]:
        ts, payload = super().emit()
        if payload is not None:
            check_payload(self.sensor_type, payload)
        return ts, payload


class MotionDriver(_SyntheticClocked):
    """Accelerometer, Gyroscope, Magnetometer and the fused Device Motion outputs."""

    def __init__(self, sensor_type: SensorType, config: SensorConfig, seed: int, attitude: AttitudeModel):
        super().__init__(sensor_type, config, seed)
        self.attitude = attitude
        sigma = {
            SensorType.ACCELEROMETER: 0.02,
            SensorType.LINEAR_ACCELERATION: 0.02,
            SensorType.GYROSCOPE: 0.01,
            SensorType.MAGNETOMETER: 0.5,
        }.get(sensor_type, 0.0)
        self.noise = _Smoothed(self.rng, sigma, axes=3)
        # Local geomagnetic field, roughly mid-latitude northern hemisphere.
        self.field = (self.rng.uniform(15, 25), self.rng.uniform(-5, 5), self.rng.uniform(-45, -35))

    def sample(self, timestamp_nanos: int) -> Any:
        t = timestamp_nanos / 1e9
        st = self.sensor_type
        if st is SensorType.ROTATION:
            return Attitude(*self.attitude.quaternion(t))
        if st is SensorType.GRAVITY:
            return Acceleration(*self.attitude.gravity(t))
        nx, ny, nz = self.noise.step()
        if st is SensorType.LINEAR_ACCELERATION:
            return Acceleration(nx, ny, nz)
        if st is SensorType.ACCELEROMETER:
            gx, gy, gz = self.attitude.gravity(t)
            return Acceleration(gx + nx, gy + ny, gz + nz)
        if st is SensorType.GYROSCOPE:
            rx, ry, rz = self.attitude.angle_rates(t)
            return RotationRate(rx + nx, ry + ny, rz + nz)
        fx, fy, fz = self.field
        return MagneticField(fx + nx, fy + ny, fz + nz)


class AltimeterDriver(_SyntheticClocked):
    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.ALTIMETER, config, seed)
        self.base_altitude = self.rng.uniform(0.0, 100.0)
        self.relative = 0.0

    def sample(self, timestamp_nanos: int) -> AltimeterData:
        self.relative += self.rng.gauss(0.0, 0.05)
        altitude = self.base_altitude + self.relative
        return AltimeterData(self.relative, 101.325 * math.exp(-altitude / 8434.0))


class EnvironmentDriver(_SyntheticClocked):
    """Humidity, light and ambient temperature as mean-reverting walks."""

    _PARAMS = {
        SensorType.HUMIDITY: (45.0, 1.0),
        SensorType.LIGHT: (300.0, 10.0),
        SensorType.AMBIENT_TEMPERATURE: (21.0, 0.05),
    }

    def __init__(self, sensor_type: SensorType, config: SensorConfig, seed: int):
        super().__init__(sensor_type, config, seed)
        self.mean, self.sigma = self._PARAMS[sensor_type]
        self.value = self.mean + self.rng.gauss(0.0, 5 * self.sigma)

    def sample(self, timestamp_nanos: int) -> Any:
        self.value += 0.05 * (self.mean - self.value) + self.rng.gauss(0.0, self.sigma)
        if self.sensor_type is SensorType.HUMIDITY:
            self.value = min(100.0, max(0.0, self.value))
            return HumidityData(self.value)
        if self.sensor_type is SensorType.LIGHT:
            self.value = max(0.0, self.value)
            return LightData(self.value)
        return AmbientTemperatureData(self.value)


class LocationDriver(_SyntheticClocked):
    """Pedestrian random walk, never faster than MAX_WALK_SPEED_MPS."""

    _ACCURACY_M = {AccuracyMode.BEST: 5.0, AccuracyMode.BALANCED: 30.0, AccuracyMode.LOW_POWER: 100.0}

    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.LOCATION, config, seed)
        self.lat = 51.5246 + self.rng.uniform(-0.001, 0.001)
        self.lon = -0.0399 + self.rng.uniform(-0.001, 0.001)
        self.alt = self.rng.uniform(10.0, 30.0)
        self.heading = self.rng.uniform(0.0, TWO_PI)
        self.last_t: float | None = None

    def sample(self, timestamp_nanos: int) -> LocationData:
        t = timestamp_nanos / 1e9
        dt = 0.0 if self.last_t is None else t - self.last_t
        self.last_t = t
        self.heading = (self.heading + self.rng.gauss(0.0, 0.3)) % TWO_PI
        dist = self.rng.uniform(0.0, MAX_WALK_SPEED_MPS) * dt
        self.lat += dist * math.cos(self.heading) / METERS_PER_DEGREE
        self.lon += dist * math.sin(self.heading) / (METERS_PER_DEGREE * math.cos(math.radians(self.lat)))
        self.lat = min(90.0, max(-90.0, self.lat))
        self.lon = (self.lon + 180.0) % 360.0 - 180.0
        self.alt += self.rng.gauss(0.0, 0.2)
        accuracy = self._ACCURACY_M[self.config.accuracy] * (1.0 + abs(self.rng.gauss(0.0, 0.3)))
        return LocationData(self.lat, self.lon, self.alt, accuracy)


class MicrophoneDriver(_SyntheticClocked):
    """Per-frame RMS amplitude summaries; one frame per MICROPHONE_FRAME_SAMPLES audio samples."""

    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.MICROPHONE, config, seed)
        self.frame_index = 0
        self.level = math.log(0.02)

    def emission_rate(self) -> float:
        return self.config.sample_rate_hz / MICROPHONE_FRAME_SAMPLES

    def sample(self, timestamp_nanos: int) -> MicrophoneData:
        self.level += 0.2 * (math.log(0.02) - self.level) + self.rng.gauss(0.0, 0.3)
        rms = min(1.0, max(0.0, math.exp(self.level)))
        frame = MicrophoneData(self.frame_index, rms)
        self.frame_index += 1
        return frame


class BluetoothClassicDriver(_SyntheticClocked):
    """Inquiry scan results drawn from a fixed pool of nearby devices."""

    _NAMES = ("Headset", "Car Kit, Front", 'Speaker "Mini"', "Laptop")

    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.BLUETOOTH_CLASSIC, config, seed)
        self.devices = [(self.rng.getrandbits(48), name, self.rng.uniform(-90, -50)) for name in self._NAMES]

    def sample(self, timestamp_nanos: int) -> BluetoothDeviceData:
        address, name, mean_rssi = self.devices[self.rng.randrange(len(self.devices))]
        rssi = int(min(0, max(-120, round(mean_rssi + self.rng.gauss(0.0, 4.0)))))
        return BluetoothDeviceData(address, name, rssi)


class _BeaconScanDriver(_SyntheticClocked):
    """Sightings of a small pool of nearby beacons, each on a slow distance walk.

    Ticks continue while only broadcasting, but produce no samples, so adding
    the Scan role mid-run takes effect at the next tick like any other change.
    """

    path_loss_exponent = 2.0

    def __init__(self, sensor_type: SensorType, config: SensorConfig, seed: int):
        super().__init__(sensor_type, config, seed)
        self.beacons = self._make_pool()
        self.distances = [self.rng.uniform(0.3, 8.0) for _ in self.beacons]
        self.turn = 0

    def _make_pool(self) -> list:
        raise NotImplementedError

    def _reference(self, frame) -> int:
        raise NotImplementedError

    def sample(self, timestamp_nanos: int) -> BeaconSighting | None:
        if Role.SCAN not in self.config.roles:
            return None
        i = self.turn % len(self.beacons)
        self.turn += 1
        self.distances[i] = min(20.0, max(0.1, self.distances[i] * math.exp(self.rng.gauss(0.0, 0.1))))
        frame = self._frame(i, timestamp_nanos)
        mean = self._reference(self.beacons[i]) - 10 * self.path_loss_exponent * math.log10(self.distances[i])
        rssi = int(min(0, max(-120, round(mean + self.rng.gauss(0.0, 2.0)))))
        return BeaconSighting(frame, rssi, timestamp_nanos)

    def _frame(self, i: int, timestamp_nanos: int):
        return self.beacons[i]


class IBeaconScanDriver(_BeaconScanDriver):
    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.IBEACON_PROXIMITY, config, seed)

    def _make_pool(self) -> list:
        region = UUID(int=self.rng.getrandbits(128))
        return [
            IBeaconFrame(region, self.rng.randrange(1 << 16), self.rng.randrange(1 << 16), self.rng.randint(-65, -55))
            for _ in range(3)
        ]

    def _reference(self, frame) -> int:
        return frame.measured_power


class EddystoneScanDriver(_BeaconScanDriver):
    """UID and URL beacons; the UID beacon interleaves TLM telemetry."""

    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.EDDYSTONE_PROXIMITY, config, seed)
        self.adv_count = 0

    def _make_pool(self) -> list:
        namespace = self.rng.getrandbits(80).to_bytes(10, "big")
        return [
            EddystoneUid(namespace, self.rng.getrandbits(48).to_bytes(6, "big"), self.rng.randint(-25, -15)),
            EddystoneUid(namespace, self.rng.getrandbits(48).to_bytes(6, "big"), self.rng.randint(-25, -15)),
            EddystoneUrl(self.rng.randint(-25, -15), "https://example.com/"),
        ]

    def _reference(self, frame) -> int:
        return frame.tx_power - 41

    def _frame(self, i: int, timestamp_nanos: int):
        self.adv_count += 1
        if i == 0 and self.rng.random() < 0.25:
            temp = round(self.rng.gauss(22.0, 1.0) * 256) / 256
            return EddystoneTlm(
                int(3000 - timestamp_nanos // 3_600_000_000_000),
                temp,
                self.adv_count % (1 << 32),
                (timestamp_nanos // 100_000_000) % (1 << 32),
            )
        return self.beacons[i]


# -- event-driven -------------------------------------------------------------


class _SyntheticEvent(EventDriver):
    def __init__(self, sensor_type: SensorType, config: SensorConfig, seed: int):
        super().__init__(sensor_type, config)
        self.rng = _rng(seed, sensor_type.value)
        self.state: Any = None

    def dwell_nanos(self) -> int | None:
        return round(self.rng.expovariate(1.0 / MEAN_DWELL_SECONDS) * 1e9)

    def current_state(self, timestamp_nanos: int) -> Any:
        return self.state

    def emit(self) -> tuple[int, Any]:
        ts, payload = super().emit()
        check_payload(self.sensor_type, payload)
        return ts, payload


class MotionActivityDriver(_SyntheticEvent):
    """Markov chain over the five activity labels."""

    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.MOTION_ACTIVITY, config, seed)

    def _with_confidence(self, activity: Activity) -> MotionActivityData:
        self.state = MotionActivityData(activity, self.rng.choice(list(Confidence)))
        return self.state

    def initial_state(self, timestamp_nanos: int) -> MotionActivityData:
        return self._with_confidence(self.rng.choice(list(Activity)))

    def transition(self, timestamp_nanos: int) -> MotionActivityData:
        others = [a for a in Activity if a is not self.state.activity]
        return self._with_confidence(self.rng.choice(others))


class ScreenStatusDriver(_SyntheticEvent):
    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.SCREEN_STATUS, config, seed)

    def initial_state(self, timestamp_nanos: int) -> ScreenStatusData:
        self.state = ScreenStatusData(ScreenState.ON)
        return self.state

    def transition(self, timestamp_nanos: int) -> ScreenStatusData:
        flipped = ScreenState.OFF if self.state.status is ScreenState.ON else ScreenState.ON
        self.state = ScreenStatusData(flipped)
        return self.state


class PedometerDriver(_SyntheticEvent):
    """Alternates walking and standing spells; reports cumulative steps at each change."""

    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.PEDOMETER, config, seed)
        self.walking = False
        self.steps = 0
        self.last_t = 0

    def initial_state(self, timestamp_nanos: int) -> PedometerData:
        self.walking = self.rng.random() < 0.5
        self.last_t = timestamp_nanos
        self.state = PedometerData(0, 0.0)
        return self.state

    def transition(self, timestamp_nanos: int) -> PedometerData:
        if self.walking:
            cadence = self.rng.uniform(1.6, 2.0)
            self.steps += round(cadence * (timestamp_nanos - self.last_t) / 1e9)
        self.walking = not self.walking
        self.last_t = timestamp_nanos
        self.state = PedometerData(self.steps, self.steps * STRIDE_METERS)
        return self.state


class BatteryDriver(_SyntheticEvent):
    """Unplugged battery losing one percent per change until empty."""

    def __init__(self, config: SensorConfig, seed: int):
        super().__init__(SensorType.BATTERY, config, seed)
        self.percent = 0

    def initial_state(self, timestamp_nanos: int) -> BatteryData:
        self.percent = self.rng.randint(50, 100)
        self.state = BatteryData(self.percent / 100, BatteryState.UNPLUGGED)
        return self.state

    def transition(self, timestamp_nanos: int) -> BatteryData:
        self.percent = max(0, self.percent - 1)
        self.state = BatteryData(self.percent / 100, BatteryState.UNPLUGGED)
        return self.state

    def dwell_nanos(self) -> int | None:
        if self.percent <= 0 and self.state is not None:
            return None
        return super().dwell_nanos()


def create_synthetic_driver(
    sensor_type: SensorType,
    config: SensorConfig,
    seed: int,
    attitude: AttitudeModel | None = None,
) -> Driver:
    """Build the deterministic synthetic driver for ``sensor_type``.

    Pass a shared ``attitude`` to make several motion drivers observe one
    device orientation; by default one is derived from ``seed``.
    """
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 1 << 64:
        raise InvalidConfig(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    if config.sensor_type is not sensor_type:
        raise InvalidConfig(f"config for {config.sensor_type} given for {sensor_type}")
    config.validate()
    st = SensorType
    if sensor_type in (st.ACCELEROMETER, st.GRAVITY, st.LINEAR_ACCELERATION, st.GYROSCOPE, st.ROTATION, st.MAGNETOMETER):
        return MotionDriver(sensor_type, config, seed, attitude or AttitudeModel(seed))
    factories: dict[SensorType, Callable[[SensorConfig, int], Driver]] = {
        st.ALTIMETER: AltimeterDriver,
        st.LOCATION: LocationDriver,
        st.MICROPHONE: MicrophoneDriver,
        st.BLUETOOTH_CLASSIC: BluetoothClassicDriver,
        st.IBEACON_PROXIMITY: IBeaconScanDriver,
        st.EDDYSTONE_PROXIMITY: EddystoneScanDriver,
        st.MOTION_ACTIVITY: MotionActivityDriver,
        st.SCREEN_STATUS: ScreenStatusDriver,
        st.PEDOMETER: PedometerDriver,
        st.BATTERY: BatteryDriver,
    }
    if sensor_type in (st.HUMIDITY, st.LIGHT, st.AMBIENT_TEMPERATURE):
        return EnvironmentDriver(sensor_type, config, seed)
    return factories[sensor_type](config, seed)
