from typing import Any


class OrbifoldError(Exception):
    """Base class for every domain error. `witness` carries the offending datum."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class ConductorMismatchError(OrbifoldError):
    pass


class LatticeMismatchError(OrbifoldError):
    pass


class NotDefiniteError(OrbifoldError):
    pass


class SearchExhaustedError(OrbifoldError):
    pass


class ClosureBoundExceededError(OrbifoldError):
    pass


class RootSystemError(OrbifoldError):
    """Raised when a vector set is not a reflection-closed simply-laced root system."""


class NormalizationError(OrbifoldError):
    """Raised when a map does not normalize a finite group."""


class NotAnAutomorphismError(OrbifoldError):
    pass


class InvalidSpecError(OrbifoldError):
    """Raised for rejected inputs such as improper keep sets."""
