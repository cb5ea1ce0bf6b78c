"""The continuum boundary-value problem in the upper half-plane and its closed forms."""

from src.continuum.bc import ContinuumBC, chi, cross_ratio, psi
from src.continuum.closed_forms import (
    closed_form_m0,
    drift,
    five_point_drift,
    four_point_drift,
    residue_closed_form,
    three_point_drift,
)
from src.continuum.maps import MobiusMap, RectangleMap, transport
from src.continuum.observable import (
    ContinuumObservable,
    boundary_coefficient,
    eval_f,
    evaluate_grid,
    h_function,
    residue_R,
    solve_observable,
)

__all__ = [
    "ContinuumBC",
    "ContinuumObservable",
    "MobiusMap",
    "RectangleMap",
    "boundary_coefficient",
    "chi",
    "closed_form_m0",
    "cross_ratio",
    "drift",
    "eval_f",
    "evaluate_grid",
    "five_point_drift",
    "four_point_drift",
    "h_function",
    "psi",
    "residue_R",
    "residue_closed_form",
    "solve_observable",
    "three_point_drift",
    "transport",
]
