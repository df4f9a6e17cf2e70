"""Elliptic SL(2,R) representation paths of odd classical pretzel knots.

The pipeline runs bottom-up:

    chebyshev -> trace_locus -> representation -> boundary_path -> report

and the ``pretzelrep`` console script exposes it (see :mod:`pretzelrep.cli`).
"""

from .boundary_path import (
    BoundaryHolonomy,
    Certificate,
    boundary_holonomy,
    realize_cover,
    realize_slope,
)
from .chebyshev import ChebRatio, cheb_eval, cheb_ratio
from .errors import (
    BelowThreshold,
    InvalidInput,
    NumericalError,
    OutOfRange,
    PretzelError,
    Unsupported,
)
from .report import AnalysisReport, PathSample, analyze, sample_path, verify_suite
from .representation import (
    Matrix2,
    Representation,
    build_representation,
    meridian_power_residual,
    relation_residual,
)
from .trace_locus import (
    LocusPoint,
    PretzelKnot,
    ToleranceConfig,
    cover_threshold,
    find_r1_star,
    limit_T,
    residual_f,
    solve_locus,
    theta0,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "PathSample",
    "analyze",
    "sample_path",
    "verify_suite",
    "BelowThreshold",
    "BoundaryHolonomy",
    "Certificate",
    "ChebRatio",
    "InvalidInput",
    "LocusPoint",
    "Matrix2",
    "NumericalError",
    "OutOfRange",
    "PretzelError",
    "PretzelKnot",
    "Representation",
    "ToleranceConfig",
    "Unsupported",
    "boundary_holonomy",
    "build_representation",
    "cheb_eval",
    "cheb_ratio",
    "cover_threshold",
    "find_r1_star",
    "limit_T",
    "meridian_power_residual",
    "realize_cover",
    "realize_slope",
    "relation_residual",
    "residual_f",
    "solve_locus",
    "theta0",
]
