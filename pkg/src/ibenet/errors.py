"""Exception types shared across the package."""


class IBeNetError(Exception):
    """Base class for every error raised by ibenet."""


class StructuralError(IBeNetError):
    """A behaviour or channel touched a level it is not wired to."""


class ConfigError(IBeNetError, ValueError):
    """Network or world parameters out of range."""


class InputError(IBeNetError, ValueError):
    """Malformed sensor frame handed to the network."""


class ScenarioError(IBeNetError):
    """Scenario file could not be loaded. ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class QueryError(IBeNetError):
    """A trace query asked about something the trace never contains."""
