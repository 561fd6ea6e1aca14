"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QPCohError(Exception):
    """Base class for library errors."""


class StructureError(QPCohError, ValueError):
    """Tables with inconsistent dimensions or out-of-range indices."""


class ParseError(QPCohError, ValueError):
    """Malformed algebra document; ``where`` names the offending field."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class AxiomError(QPCohError, ValueError):
    """Structure constants violate an axiom; carries the validation report."""

    def __init__(self, report):
        first = report.violations[0] if report.violations else None
        super().__init__(f"axiom violated: {first}" if first else "axiom violated")
        self.report = report


class ResourceError(QPCohError):
    """A computation would exceed the configured size cap."""

    def __init__(self, message: str, shape=None, cap=None):
        super().__init__(message)
        self.shape = shape
        self.cap = cap


class HypothesisError(QPCohError):
    """A structural identity was requested but its vanishing hypothesis failed."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ConsistencyError(QPCohError, RuntimeError):
    """An internal invariant failed; indicates a bug rather than bad input."""
