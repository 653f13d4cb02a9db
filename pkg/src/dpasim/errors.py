"""Exception hierarchy shared by every module."""


class DpaSimError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(DpaSimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(DpaSimError, ValueError):
    """A configuration document or model input is invalid.

    ``path`` is a dotted field path (``"nodes.1.position"``) when the error can
    be pinned to a field.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class FabricStructureError(DpaSimError, ValueError):
    """A fabric state references resources that do not exist in its config."""
