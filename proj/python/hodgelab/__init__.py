"""Verification kernels for weighted Hodge theory on triangulated domains.

Everything lives in the compiled extension; this package re-exports it and
keeps the import path stable for wheels and in-tree test runs.
"""

from ._core import (  # noqa: F401
    HodgeLabError,
    FieldParseError,
    ScalarField,
    SimplicialComplex,
    WeightedComplex,
    annulus3,
    assemble,
    ball3,
    betti,
    boundary_split_suite,
    check_duality,
    check_theorem,
    circle,
    coexact_spectrum,
    conventions,
    disc,
    exact_spectrum,
    flat_torus,
    full_spectrum,
    harmonic_dim,
    icosphere,
    integral_suite,
    longest_edge,
    lp_check,
    parse_field,
    pointwise_suite,
    schema_version,
    steklov_spectrum,
)

__all__ = [
    "HodgeLabError",
    "FieldParseError",
    "ScalarField",
    "SimplicialComplex",
    "WeightedComplex",
    "annulus3",
    "assemble",
    "ball3",
    "betti",
    "boundary_split_suite",
    "check_duality",
    "check_theorem",
    "circle",
    "coexact_spectrum",
    "conventions",
    "disc",
    "exact_spectrum",
    "flat_torus",
    "full_spectrum",
    "harmonic_dim",
    "icosphere",
    "integral_suite",
    "longest_edge",
    "lp_check",
    "parse_field",
    "pointwise_suite",
    "schema_version",
    "steklov_spectrum",
]
