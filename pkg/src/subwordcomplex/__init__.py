"""Exact combinatorics of subword complexes on finite Coxeter groups."""

from .coxeter import CoxeterSystem, system_from_spec, parse_word
from .errors import (
    CapExceededError,
    IntegrityError,
    NotRepresentableError,
    ParseError,
    SubwordError,
    UnsupportedTypeError,
)

__all__ = [
    "CoxeterSystem",
    "system_from_spec",
    "parse_word",
    "SubwordError",
    "ParseError",
    "UnsupportedTypeError",
    "NotRepresentableError",
    "CapExceededError",
    "IntegrityError",
]
