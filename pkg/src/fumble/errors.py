"""Exception types shared across subpackages."""


class FumbleError(Exception):
    """Base class for toolkit errors."""


class DecodeError(FumbleError):
    """A video file could not be opened or decoded."""


class BoundsError(FumbleError):
    """A requested time window falls outside the asset."""


class ConfigError(FumbleError):
    """An invalid configuration value."""


class ShapeError(FumbleError):
    """An array does not match the expected shape."""


class WeightImportError(FumbleError):
    """A weight archive is incompatible with the target model."""


class NumericError(FumbleError):
    """A computation produced non-finite values."""
