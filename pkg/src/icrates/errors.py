"""Semantic exception hierarchy.

Every error carries a stable machine-readable ``code`` so that callers (and
the CLI) can dispatch on failure kind without parsing messages.
"""

from __future__ import annotations

from typing import Any


class IcError(Exception):
    """Base error for the package."""

    code = "ERROR"

    def __init__(self, message: str, **context: Any) -> None:
        self.context = context
        if context:
            detail = ", ".join(f"{k}={v!r}" for k, v in context.items())
            message = f"{message} ({detail})"
        super().__init__(f"[{self.code}] {message}")


class NegativeMassError(IcError):
    """A probability entry is below zero beyond tolerance."""

    code = "NEGATIVE_MASS"


class SliceNormalizationError(IcError):
    """A distribution (or conditional slice) does not sum to one."""

    code = "SLICE_NOT_NORMALIZED"


class UnknownAxisError(IcError):
    """A query or operation names an axis the tensor does not have."""

    code = "UNKNOWN_AXIS"


class OverlappingSetsError(IcError):
    """Query variable sets are not pairwise disjoint."""

    code = "OVERLAPPING_SETS"


class InvalidQueryError(IcError):
    """Query is structurally invalid for the requested operation."""

    code = "INVALID_QUERY"


class SizeLimitError(IcError):
    """Dense tensor would exceed the supported size budget."""

    code = "SIZE_LIMIT_EXCEEDED"


class DimensionMismatchError(IcError):
    """Cardinalities of two objects that must agree do not."""

    code = "DIMENSION_MISMATCH"


class ParseError(IcError):
    """A channel or coupling file could not be parsed."""

    code = "PARSE_ERROR"


class ValidationError(IcError):
    """A loaded object fails its semantic invariants."""

    code = "VALIDATION_ERROR"


class NotOneSidedError(IcError):
    """Operation requires a one-sided channel (interference-free Y2)."""

    code = "NOT_ONE_SIDED"


class EmptyListError(IcError):
    """An operation over a collection received an empty one."""

    code = "EMPTY_LIST"


class AngleGridMismatchError(IcError):
    """Two rate regions use different support-angle grids."""

    code = "ANGLE_GRID_MISMATCH"


class GenerationExhaustedError(IcError):
    """A rejection-sampling generator hit its retry bound."""

    code = "GENERATION_EXHAUSTED"


class ConfigError(IcError):
    """A configuration value is outside its documented range."""

    code = "INVALID_CONFIG"
