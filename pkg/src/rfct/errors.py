"""Exception types raised across the package.

Invalid numerical input raises plain :class:`ValueError`; the classes below
cover the cases callers usually want to tell apart.
"""


class ConfigError(ValueError):
    """A configuration value, file, or external data table is unusable."""


class TrackingError(RuntimeError):
    """The tracker reached a state it cannot continue from."""


class InitializationError(TrackingError):
    """The first frame or initial box cannot start a track."""


class TestScaleError(ValueError):
    """A brute-force reference routine was called on a grid that is too large."""

    __test__ = False  # keep pytest from collecting it
