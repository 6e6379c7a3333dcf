"""Finite-scale tools for Floyd metrics, geodesic hulls and coned-off Cayley graphs."""

from .errors import (
    CapExceeded,
    ConfigError,
    DisconnectedResult,
    EmptyShadow,
    FloydHullError,
    InvariantViolation,
    UnknownGenerator,
)
from .words import IDENTITY, Alphabet, Endomorphism, Subgroup, Word

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "CapExceeded",
    "ConfigError",
    "DisconnectedResult",
    "EmptyShadow",
    "Endomorphism",
    "FloydHullError",
    "IDENTITY",
    "InvariantViolation",
    "Subgroup",
    "UnknownGenerator",
    "Word",
]
