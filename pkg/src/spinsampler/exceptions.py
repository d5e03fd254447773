"""Error types shared across the package.

All of these derive from ValueError or RuntimeError so callers that do not
care about the fine-grained kind can still catch the standard base classes.
"""


class DimensionError(ValueError):
    """A matrix or vector has a shape incompatible with the operation."""


class OperatorError(ValueError):
    """An operator fails a structural requirement (unitarity, hermiticity, symmetry)."""


class ConservationError(ValueError):
    """Input and output configurations carry different particle totals."""


class NormalizationError(ValueError):
    """A distribution's mass is unsuitable for the requested operation."""


class SizeLimitError(RuntimeError):
    """The problem size exceeds the documented desk-scale cutoff."""
