"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`CasimirError`
so callers (the CLI in particular) can separate physics/numerics failures
from programming errors.
"""

from __future__ import annotations


class CasimirError(Exception):
    """Base class for all package errors."""


class UnsupportedAxisError(CasimirError):
    """A medium model cannot be evaluated on the requested frequency axis."""


class PoleError(CasimirError):
    """A response function was evaluated at a pole.

    ``where`` carries the offending mode/frequency for diagnostics.
    """

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


class TabulatedFormatError(CasimirError, ValueError):
    """Malformed or invalid tabulated permittivity data."""


class NoTransferRepresentationError(CasimirError):
    """t = 0: the network has no transfer matrix (use the bulk path)."""


class SingularTransferError(CasimirError):
    """a = 0: the transfer matrix has no scattering representation."""


class CompositionMismatchError(CasimirError):
    """Two networks do not share the same medium at their junction."""


class ResonanceError(CasimirError):
    """Vanishing multiple-reflection denominator (lossless resonance)."""


class OscillationThresholdError(CasimirError):
    """Cavity loop gain reached 1; the closed loop is unstable."""


class DivergenceError(CasimirError):
    """A loop function was evaluated at rho = 1."""


class QuadratureError(CasimirError):
    """Adaptive quadrature did not converge within its subdivision budget.

    ``partial`` holds the best available estimate (a ForceResult for force
    evaluations, a raw value otherwise).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ConfigError(CasimirError):
    """Invalid run configuration; ``field`` and ``line`` locate the problem."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        loc = []
        if field:
            loc.append(f"field '{field}'")
        if line:
            loc.append(f"line {line}")
        full = f"{message} ({', '.join(loc)})" if loc else message
        super().__init__(full)
        self.field = field
        self.line = line
        self.field = field
        self.line = line
