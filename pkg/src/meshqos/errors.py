"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside its valid domain."""


class FormatError(ValueError):
    """A serialized document is malformed or internally inconsistent.

    ``field`` names the offending field so callers can report it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class PathError(ValueError):
    """A path is not a valid simple route in the topology."""


class NoRouteError(RuntimeError):
    """Source and destination are not connected."""


class SizeError(RuntimeError):
    """The instance is too large for exhaustive enumeration."""
