"""Satisfiability checking for forest logic programs."""

from ._folp import (
    CacheError,
    ParseError,
    ResourceLimit,
    ValidationError,
    bounded_sat,
    check,
    compile_units,
    run_cli,
    validate,
)

__all__ = [
    "CacheError",
    "ParseError",
    "ResourceLimit",
    "ValidationError",
    "bounded_sat",
    "check",
    "compile_units",
    "run_cli",
    "validate",
]
