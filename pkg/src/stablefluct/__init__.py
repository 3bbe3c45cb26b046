"""Fluctuation identities of stable Levy processes: closed forms, special
functions and a Monte Carlo oracle for checking them."""

from .errors import (ConvergenceError, DomainError, ParameterError, PoleError, StableFluctError,
                     StripError)
from .stable_core import StableParams, validate_params

__version__ = "0.1.0"

__all__ = [
    "StableParams",
    "validate_params",
    "StableFluctError",
    "DomainError",
    "PoleError",
    "StripError",
    "ParameterError",
    "ConvergenceError",
    "__version__",
]
