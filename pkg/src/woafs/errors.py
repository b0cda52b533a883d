"""Exception hierarchy.

The CLI maps ``ConfigError`` to exit status 1, ``DataError`` to 2 and any
other ``WoafsError`` to 3.
"""


class WoafsError(Exception):
    """Base class for all package errors."""


class ConfigError(WoafsError, ValueError):
    """Invalid parameters or configuration file."""


class DataError(WoafsError):
    """Input data could not be ingested or is unusable."""


class IngestionError(DataError):
    pass


class PoolError(DataError):
    pass


class DecodeError(DataError):
    pass


class ShapeError(WoafsError, ValueError):
    """Array or sequence lengths do not line up."""


class SequencingError(WoafsError, RuntimeError):
    """An operation was called out of order."""


class TrainingError(WoafsError):
    pass
