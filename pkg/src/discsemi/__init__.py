"""discsemi: discrete semiclassical linear functionals on the integer lattice.

The package models linear functionals defined by hypergeometric-ratio
weights on the nonnegative integers (optionally truncated, shifted to a
symmetric window, or augmented by point masses).  It computes their Pearson
data and class, their moments, the polynomial right-hand side of the
first-order difference equation satisfied by the Stieltjes transform, the
standard spectral transformations (Christoffel, Geronimus, Uvarov, reduced
Uvarov, truncation, symmetrization), and the three-term recurrence
coefficients of the associated orthogonal polynomials.  A catalog of named
families ties everything together, and a command-line interface exposes the
main operations with JSON and tabular output.
"""

from __future__ import annotations

from .errors import (
    ComputationError,
    ConstraintViolated,
    DegenerateSymmetrization,
    DegreeMismatch,
    DiscsemiError,
    DivergentSeries,
    InputError,
    OutOfSupport,
    PoleAtSupportPoint,
    PoleInDenominator,
    RegularityViolation,
    SingularHankel,
    TruncationAtEtaRoot,
)
from .polys import Poly
from .functional import (
    FunctionalSpec,
    Mass,
    MomentTable,
    PearsonPair,
    Support,
    functional_of_poly,
    moments,
    pearson_pair,
    stieltjes_eval,
    weight_at,
)
from .stieltjeseq import (
    StieltjesEquation,
    derive_equation,
    transform_equation,
    verify_equation,
    xi_by_interpolation,
)
from .transforms import (
    apply_christoffel,
    apply_geronimus,
    apply_symmetrization,
    apply_transform,
    apply_truncation,
    apply_uvarov,
    compose_check,
)
from .orthopoly import (
    Recurrence,
    chebyshev_from_moments,
    orthogonality_check,
    recurrence_from_moments,
)
from .catalog import (
    CatalogEntry,
    catalog_entries,
    get_entry,
    instantiate,
    moment_formula,
    regression_suite,
    resolve_params,
    set_data_path,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "DiscsemiError", "InputError", "ComputationError", "ConstraintViolated",
    "DegenerateSymmetrization", "DegreeMismatch", "DivergentSeries",
    "OutOfSupport", "PoleAtSupportPoint", "PoleInDenominator",
    "RegularityViolation", "SingularHankel", "TruncationAtEtaRoot",
    # core objects
    "Poly", "FunctionalSpec", "Mass", "Support", "PearsonPair", "MomentTable",
    "StieltjesEquation", "Recurrence", "CatalogEntry",
    # weights, moments, classification
    "pearson_pair", "moments", "weight_at", "functional_of_poly",
    "stieltjes_eval",
    # the difference equation
    "derive_equation", "verify_equation", "xi_by_interpolation",
    "transform_equation",
    # spectral transformations
    "apply_uvarov", "apply_christoffel", "apply_geronimus",
    "apply_truncation", "apply_symmetrization", "apply_transform",
    "compose_check",
    # recurrences
    "recurrence_from_moments", "chebyshev_from_moments",
    "orthogonality_check",
    # catalog
    "catalog_entries", "get_entry", "resolve_params", "instantiate",
    "moment_formula", "regression_suite", "set_data_path",
]
