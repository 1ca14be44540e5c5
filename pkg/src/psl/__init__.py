"""Exact computations with one-dimensional sheaves on the projective plane.

The package works over the rationals and small prime fields with exact
arithmetic only. The main entry points are re-exported here.
"""

__version__ = "0.1.0"

from .atlas import STRATA, classify, delta_map, normalizing_twist, stratum_dimension_audit, vanishing_bounds
from .cohomology import beilinson_table, h0, h0_omega, h1, h1_omega, monad_check
from .constructors import make_OC, normal_form_42, normal_form_4E4
from .errors import PSLError
from .field import QQ, FieldSpec, parse_field
from .forms import Form, multiplication_map, parse_form
from .linalg import LinearMap, Subspace, enumerate_subspaces, gaussian_binomial
from .presentation import SheafMorphism, SheafPresentation, dualize, hilbert_polynomial, twist
from .stability import (
    KroneckerModule,
    Polarization,
    Status,
    StabilityVerdict,
    g_semistable,
    gred_semistable,
    kronecker_semistable,
    minors_criterion_23,
    reducibility_44,
    stability_5C,
)

__all__ = [
    "__version__",
    "STRATA", "classify", "delta_map", "normalizing_twist", "stratum_dimension_audit", "vanishing_bounds",
    "beilinson_table", "h0", "h0_omega", "h1", "h1_omega", "monad_check",
    "make_OC", "normal_form_42", "normal_form_4E4",
    "PSLError",
    "QQ", "FieldSpec", "parse_field",
    "Form", "multiplication_map", "parse_form",
    "LinearMap", "Subspace", "enumerate_subspaces", "gaussian_binomial",
    "SheafMorphism", "SheafPresentation", "dualize", "hilbert_polynomial", "twist",
    "KroneckerModule", "Polarization", "Status", "StabilityVerdict",
    "g_semistable", "gred_semistable", "kronecker_semistable", "minors_criterion_23", "reducibility_44", "stability_5C",
]
