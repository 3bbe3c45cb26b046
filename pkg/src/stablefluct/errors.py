"""Exception hierarchy shared by every module."""

from __future__ import annotations


class StableFluctError(Exception):
    """Base class for all library errors."""


class DomainError(StableFluctError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class PoleError(DomainError):
    """A gamma-type function was evaluated at (or too near) a pole."""


class StripError(DomainError):
    """A complex frequency lies outside the analyticity strip of an exponent."""


class ParameterError(DomainError):
    """Stable parameters violate the admissibility constraints."""


class ConvergenceError(StableFluctError, ArithmeticError):
    """A series or iteration failed to reach the requested accuracy."""
