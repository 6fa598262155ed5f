"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class MWError(Exception):
    exit_code = 5


class ParameterError(MWError, ValueError):
    """A parameter is outside its declared range."""

    exit_code = 2


class DomainError(ParameterError):
    """Argument outside the mathematical domain (e.g. mu(0))."""


class CapacityError(MWError):
    """Request exceeds a configured memory/overflow ceiling."""

    exit_code = 3


class CorruptCacheError(MWError):
    """Cache file missing, truncated or carrying the wrong magic."""

    exit_code = 4


class ContractError(MWError):
    """A constructed object failed its post-construction verification."""

    exit_code = 5
