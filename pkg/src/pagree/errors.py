"""Exception hierarchy.

Two branches matter for the CLI: :class:`InputError` maps to exit code 2
(bad files, bad config, bad arguments), :class:`NumericalError` maps to
exit code 3 (the computation itself went off the rails).
"""

from __future__ import annotations


class PagreeError(Exception):
    """Base class for every error raised by this package."""


class InputError(PagreeError):
    """Caller-supplied data or configuration is invalid."""


class NumericalError(PagreeError):
    """A computation produced values it cannot recover from."""


class ValidationError(InputError):
    """Structural violation: shapes, ranges, unknown config keys."""


class NonFiniteError(InputError):
    """NaN or infinity where a finite number is required."""


class NegativeBetaError(InputError):
    """Inverse temperature must be non-negative."""


class TooLargeError(InputError):
    """Exhaustive enumeration refused: the hypothesis set is too big."""


class DivergedError(NumericalError):
    """Optimization objective became non-finite."""


class LabelOutOfRangeError(InputError):
    """A label is not an integer in [0, k)."""


class MissingLabelsError(InputError):
    """Operation requires true labels but none are attached."""


class MisalignedError(InputError):
    """Two structures disagree on shape, ids, or labels."""


class MissingPowerError(InputError):
    """Interior mixing ratio requested but no perturbation powers given."""


class DuplicateIdError(InputError):
    """Observation ids must be unique."""


class AlignmentError(InputError):
    """Files disagree on which observations they describe."""


class ParseError(InputError):
    """A file could not be parsed; carries line and column context."""

    def __init__(self, message: str, *, path: str = "", line: int = 0, column: str = ""):
        self.path = path
        self.line = line
        self.column = column
        where = path or "<input>"
        loc = f"{where}:{line}" if line else where
        if column:
            loc = f"{loc} (column {column})"
        super().__init__(f"{loc}: {message}")
