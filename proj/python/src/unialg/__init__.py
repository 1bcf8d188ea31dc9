"""Finite universal algebra toolkit."""

from ._core import (
    Error,
    FiniteAlgebra,
    ParseError,
    ResourceLimitError,
    congruences,
    free_algebra_size,
    load_algebra,
    member,
    parse_algebra,
    run_cli,
    serialize_algebra,
    verify_correspondence,
    verify_pointwise,
)

__all__ = [
    "Error",
    "FiniteAlgebra",
    "ParseError",
    "ResourceLimitError",
    "congruences",
    "free_algebra_size",
    "load_algebra",
    "member",
    "parse_algebra",
    "run_cli",
    "serialize_algebra",
    "verify_correspondence",
    "verify_pointwise",
]
