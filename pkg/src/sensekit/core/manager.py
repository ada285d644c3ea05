"""Sensor registry, lifecycle and sample dispatch."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable

from sensekit.core.clock import SimulatedTimeBase, TimeBase, new_session_clock, session_timestamp
from sensekit.core.sensors import (
    IOS,
    Availability,
    PlatformProfile,
    Role,
    SensorConfig,
    SensorSample,
    SensorType,
)
from sensekit.errors import (
    AlreadyRegistered,
    InvalidConfig,
    Reentrancy,
    SensorNotAvailable,
    TypeMismatch,
    UnknownHandle,
    WrongState,
)

if TYPE_CHECKING:
    from sensekit.drivers.base import Driver

SampleHandler = Callable[[SensorSample], None]


class SensorState(str, Enum):
    STOPPED = "Stopped"
    RUNNING = "Running"


@dataclass
class _Registration:
    handle: int
    sensor_type: SensorType
    config: SensorConfig
    driver: "Driver"
    state: SensorState = SensorState.STOPPED
    subscribers: dict[int, SampleHandler] = field(default_factory=dict)


class SensorManager:
    """Registers sensors against a platform profile and drives them in session time.

    With the default simulated time base, ``run_for`` fast-forwards: samples
    are produced and dispatched as fast as handlers consume them. Pass a
    ``RealTimeBase`` to pace production by the host's monotonic clock.
    """

    def __init__(self, profile: PlatformProfile = IOS, seed: int = 0, time_base: TimeBase | None = None):
        from sensekit.drivers.synthetic import AttitudeModel

        self.profile = profile
        self.seed = seed
        self.time_base = time_base if time_base is not None else SimulatedTimeBase()
        self.clock = new_session_clock(self.time_base)
        self._attitude = AttitudeModel(seed)
        self._lock = threading.Lock()
        self._dispatch_thread: int | None = None
        self._registrations: dict[int, _Registration] = {}
        self._by_type: dict[SensorType, int] = {}
        self._handles = itertools.count(1)
        self._subscription_ids = itertools.count(1)
        self._subscription_owner: dict[int, int] = {}

    # -- helpers --------------------------------------------------------------

    def _guard(self) -> None:
        if self._dispatch_thread == threading.get_ident():
            raise Reentrancy("registry operations may not be called from a sample handler")

    def _get(self, handle: int) -> _Registration:
        try:
            return self._registrations[handle]
        except KeyError:
            raise UnknownHandle(f"no sensor registered under handle {handle!r}") from None

    def _check_allowed(self, sensor_type: SensorType, config: SensorConfig) -> None:
        mode = self.profile.mode(sensor_type)
        if mode is Availability.UNAVAILABLE:
            raise SensorNotAvailable(f"{sensor_type} is unavailable on {self.profile.name}")
        if mode is Availability.SCAN_ONLY and Role.BROADCAST in config.roles:
            raise SensorNotAvailable(f"{sensor_type} is scan-only on {self.profile.name}; broadcasting is not allowed")

    def now_nanos(self) -> int:
        """Current session time."""
        return session_timestamp(self.clock, self.time_base.monotonic_ns())[0]

    # -- registry -------------------------------------------------------------

    def is_sensor_available(self, sensor_type: SensorType) -> Availability:
        return self.profile.mode(sensor_type)

    def register_sensor(
        self,
        sensor_type: SensorType,
        config: SensorConfig | None = None,
        driver: "Driver | None" = None,
    ) -> int:
        """Allocate a driver for ``sensor_type`` in the Stopped state and return its handle.

        Without an explicit ``driver`` a seeded synthetic one is created.
        """
        from sensekit.drivers.synthetic import create_synthetic_driver

        self._guard()
        with self._lock:
            if self.profile.mode(sensor_type) is Availability.UNAVAILABLE:
                raise SensorNotAvailable(f"{sensor_type} is unavailable on {self.profile.name}")
            if sensor_type in self._by_type:
                raise AlreadyRegistered(f"{sensor_type} is already registered (handle {self._by_type[sensor_type]})")
            if config is None:
                config = driver.config if driver is not None else SensorConfig.default(sensor_type)
            if config.sensor_type is not sensor_type:
                raise InvalidConfig(f"config is for {config.sensor_type}, not {sensor_type}")
            config.validate()
            self._check_allowed(sensor_type, config)
            if driver is None:
                driver = create_synthetic_driver(sensor_type, config, self.seed, attitude=self._attitude)
            elif driver.sensor_type is not sensor_type:
                raise InvalidConfig(f"driver produces {driver.sensor_type}, not {sensor_type}")
            else:
                driver.reconfigure(config)
            handle = next(self._handles)
            self._registrations[handle] = _Registration(handle, sensor_type, config, driver)
            self._by_type[sensor_type] = handle
            return handle

    def configure_sensor(self, handle: int, config: SensorConfig) -> None:
        """Swap the config; a running sensor adopts it at its next scheduled sample."""
        self._guard()
        with self._lock:
            reg = self._get(handle)
            if config.sensor_type is not reg.sensor_type:
                raise TypeMismatch(f"config is for {config.sensor_type}, handle {handle} is {reg.sensor_type}")
            config.validate()
            self._check_allowed(reg.sensor_type, config)
            reg.driver.reconfigure(config)
            reg.config = config

    def subscribe(self, handle: int, handler: SampleHandler) -> int:
        """Deliver every sample produced from now on to ``handler``."""
        self._guard()
        with self._lock:
            reg = self._get(handle)
            sub_id = next(self._subscription_ids)
            reg.subscribers[sub_id] = handler
            self._subscription_owner[sub_id] = handle
            return sub_id

    def unsubscribe(self, subscription_id: int) -> None:
        self._guard()
        with self._lock:
            handle = self._subscription_owner.pop(subscription_id, None)
            if handle is None:
                raise UnknownHandle(f"no subscription {subscription_id!r}")
            reg = self._registrations.get(handle)
            if reg is not None:
                reg.subscribers.pop(subscription_id, None)

    def start_continuous_sensing(self, handle: int) -> None:
        self._guard()
        with self._lock:
            reg = self._get(handle)
            if reg.state is not SensorState.STOPPED:
                raise WrongState(f"{reg.sensor_type} is already running")
            reg.driver.start(self.now_nanos())
            reg.state = SensorState.RUNNING

    def stop_continuous_sensing(self, handle: int) -> None:
        self._guard()
        with self._lock:
            reg = self._get(handle)
            if reg.state is not SensorState.RUNNING:
                raise WrongState(f"{reg.sensor_type} is not running")
            reg.driver.stop()
            reg.state = SensorState.STOPPED

    def deregister_sensor(self, handle: int) -> None:
        self._guard()
        with self._lock:
            reg = self._get(handle)
            if reg.state is SensorState.RUNNING:
                raise WrongState(f"stop {reg.sensor_type} before deregistering it")
            del self._registrations[handle]
            del self._by_type[reg.sensor_type]
            for sub_id in reg.subscribers:
                self._subscription_owner.pop(sub_id, None)

    def state(self, handle: int) -> SensorState:
        return self._get(handle).state

    def config(self, handle: int) -> SensorConfig:
        return self._get(handle).config

    def handle_for(self, sensor_type: SensorType) -> int | None:
        return self._by_type.get(sensor_type)

    def registered_configs(self) -> list[SensorConfig]:
        with self._lock:
            return [reg.config for reg in self._registrations.values()]

    def active_energy_modes(self) -> set[str]:
        """Energy-model labels for the sensors currently running."""
        from sensekit.energy import modes_for_configs

        with self._lock:
            running = [r.config for r in self._registrations.values() if r.state is SensorState.RUNNING]
        return modes_for_configs(running)

    # -- scheduling -----------------------------------------------------------

    def run_for(self, seconds: float) -> int:
        """Advance session time by ``seconds``; see ``run_until``."""
        return self.run_until(self.now_nanos() + round(seconds * 1e9))

    def run_until(self, end_nanos: int) -> int:
        """Produce and dispatch every sample scheduled strictly before ``end_nanos``.

        Samples from different sensors are interleaved in timestamp order,
        ties going to the earlier registration. Returns the number dispatched.
        """
        self._guard()
        origin = self.clock.monotonic_origin_nanos
        dispatched = 0
        while True:
            with self._lock:
                due = None
                for reg in self._registrations.values():
                    if reg.state is not SensorState.RUNNING:
                        continue
                    ts = reg.driver.next_timestamp()
                    if ts is not None and ts < end_nanos and (due is None or ts < due[0]):
                        due = (ts, reg)
            if due is None:
                break
            scheduled, reg = due
            self.time_base.wait_until(origin + scheduled)
            with self._lock:
                if reg.state is not SensorState.RUNNING or reg.driver.next_timestamp() != scheduled:
                    continue
                _, payload = reg.driver.emit()
                if payload is None:
                    continue
                stamp, _ = session_timestamp(self.clock, self.time_base.monotonic_ns())
                sample = SensorSample(reg.sensor_type, stamp, payload)
                handlers = list(reg.subscribers.values())
            self._dispatch_thread = threading.get_ident()
            try:
                for handler in handlers:
                    handler(sample)
            finally:
                self._dispatch_thread = None
            dispatched += 1
        self.time_base.wait_until(origin + end_nanos)
        return dispatched
