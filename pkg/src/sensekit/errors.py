"""Exception hierarchy shared by every sensekit module.

Each error class name doubles as the short code printed by the CLI, so the
names are part of the public surface.
"""

from __future__ import annotations


class SensingKitError(Exception):
    """Base class for all sensekit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# -- registry / lifecycle -----------------------------------------------------


class SensorNotAvailable(SensingKitError):
    pass


class AlreadyRegistered(SensingKitError):
    pass


class InvalidConfig(SensingKitError):
    pass


class UnknownHandle(SensingKitError):
    pass


class TypeMismatch(SensingKitError):
    pass


class WrongState(SensingKitError):
    pass


class Reentrancy(SensingKitError):
    """A subscriber handler called back into the registry."""


class ClockRegression(SensingKitError):
    """A monotonic reading fell below the session origin."""


class UnknownProfile(SensingKitError):
    pass


class UnknownSensor(SensingKitError):
    """A sensor name (e.g. a session file stem) matches no SensorType."""


# -- drivers / data -----------------------------------------------------------


class SchemaMismatch(SensingKitError):
    pass


class CorruptTrace(SensingKitError):
    pass


class InvalidSeries(SensingKitError):
    pass


class ParseError(SensingKitError):
    """Malformed input text. Carries an optional 1-based line/column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


# -- beacon codecs ------------------------------------------------------------


class FrameError(SensingKitError):
    """Base for advertisement codec failures."""


class BadLength(FrameError):
    pass


class BadCompanyId(FrameError):
    pass


class BadBeaconType(FrameError):
    pass


class UnknownFrameType(FrameError):
    pass


class UrlTooLong(FrameError):
    pass


class BadUrl(FrameError):
    """URL has no encodable scheme or contains reserved bytes."""


class UnsupportedVersion(FrameError):
    pass


class InvalidExponent(SensingKitError):
    pass


# -- energy -------------------------------------------------------------------


class UnknownMode(SensingKitError):
    pass


class InvariantViolation(SensingKitError):
    pass
