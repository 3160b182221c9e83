"""Open Gromov-Witten invariants and SYZ mirrors of toric Calabi-Yau surfaces."""

from .enumerative import (
    AdmissibleSequence,
    decompose_intervals,
    delta_series,
    enumerate_admissible,
    is_admissible,
    open_gw,
)
from .errors import MathematicalFailure, SyzkitError
from .lattice_fan import Fan2D, build_cy_fan, classify, compactify, is_calabi_yau, moment_polytope
from .mirror import (
    GluingPolynomial,
    g_from_invariants,
    g_from_product,
    inverse_mirror_map,
    mirror_map,
    verify_identity,
)
from .multipoly import MultiPoly
from .periods import CycleSpec, QuadratureParams, hk_period_check, lagrangian_residual, period_closed_form, period_quadrature

__all__ = [
    "AdmissibleSequence", "CycleSpec", "Fan2D", "GluingPolynomial", "MathematicalFailure",
    "MultiPoly", "QuadratureParams", "SyzkitError", "build_cy_fan", "classify", "compactify",
    "decompose_intervals", "delta_series", "enumerate_admissible", "g_from_invariants",
    "g_from_product", "hk_period_check", "inverse_mirror_map", "is_admissible", "is_calabi_yau",
    "lagrangian_residual", "mirror_map", "moment_polytope", "open_gw", "period_closed_form",
    "period_quadrature", "verify_identity",
]
__version__ = "0.1.0"
