"""Cohomology, symbolic-power regularity and negative curves for blowups of
weighted projective planes P(a,b,c) at fat points."""

from .asymptotics import (SQRT, NegativeCurveCertificate, SigmaSeries, a2, detect_period,
                          negative_curve_search, regularity, s_invariant, sigma_series,
                          tau_upper_bound)
from .cohomology import (CohomologyRecord, DivisorClass, chi_rr, cohomology_table, h1, h2, pair)
from .errors import InvalidInput, InvariantViolation
from .linalg import DEFAULT_PRIME, ExactMatrix, FieldSpec, kernel_basis, rank
from .linsys import (FatPointScheme, UpstreamPoint, basis_forms, condition_matrix, d_min,
                     downstream_equal, h0, random_points)
from .nagata import (basechange_check, nagata_vanishing_probe, orbit_points, prop_nagata_report)
from .plane import WeightedPlane, dim_S, enumerate_monomials, is_cartier

__version__ = "0.1.0"

__all__ = [
    "SQRT", "NegativeCurveCertificate", "SigmaSeries", "a2", "detect_period",
    "negative_curve_search", "regularity", "s_invariant", "sigma_series", "tau_upper_bound",
    "CohomologyRecord", "DivisorClass", "chi_rr", "cohomology_table", "h1", "h2", "pair",
    "InvalidInput", "InvariantViolation", "DEFAULT_PRIME", "ExactMatrix", "FieldSpec",
    "kernel_basis", "rank", "FatPointScheme", "UpstreamPoint", "basis_forms", "condition_matrix",
    "d_min", "downstream_equal", "h0", "random_points", "basechange_check",
    "nagata_vanishing_probe", "orbit_points", "prop_nagata_report", "WeightedPlane", "dim_S",
    "enumerate_monomials", "is_cartier",
]
