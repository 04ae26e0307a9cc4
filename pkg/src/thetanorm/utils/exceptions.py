# thetanorm/utils/exceptions.py

class ThetaNormError(Exception):
    """Base exception for thetanorm application errors."""
    pass

class ConfigError(ThetaNormError):
    """Errors related to run configuration (config file, CLI flags, presets)."""
    pass

class DomainError(ThetaNormError, ValueError):
    """Mathematical input outside the supported domain (non-PD Im Z, bad type, bad tolerance)."""
    pass

class PreconditionError(ThetaNormError):
    """An operation was called on inputs its precondition excludes."""
    pass

class UsageError(ThetaNormError):
    """The pipeline was asked for something it cannot decide with the inputs given."""
    pass

class InvariantFailure(ThetaNormError):
    """An identity checked by verify-invariants did not hold."""
    pass

class UserAbortError(ThetaNormError):
    """Exception raised when the user aborts an operation."""
    pass
