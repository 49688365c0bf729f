"""Exception types shared across the package."""


class PredmatchError(Exception):
    """Base class for all predmatch errors."""


class ValidationError(PredmatchError, ValueError):
    """Input data or configuration violates an invariant."""
