"""Finite Lorentzian pre-length spaces, their gluing, and triangle comparison."""

from . import amalgamation, comparison, io, model_spaces, plls_core, scenarios
from .amalgamation import (
    GluedHalfPlanes,
    GluingSpec,
    QuotientSpace,
    brute_force_quotient_metric,
    brute_force_quotient_tau,
    build_quotient,
    causal_diamond,
    check_map_properties,
    quotient_space,
    verify_certificate,
)
from .comparison import (
    AlexandrovConfig,
    ModelGeometry,
    FiniteGeometry,
    alexandrov_check,
    alexandrov_check_other,
    comparison_point,
    comparison_triangle,
    curvature_verdict,
    detour_function,
    gluing_lemma_check,
    gluing_lemma_manifold_check,
    timelike_triangle,
)
from .errors import *  # noqa: F401,F403
from .model_spaces import ModelPoint, realize_triangle, signed_distance, tau_K
from .plls_core import INF, FiniteLorentzSpace, isolation_report, lsc_defect, validate_space
from .scenarios import lens_membership, scenario

__version__ = "0.1.0"
