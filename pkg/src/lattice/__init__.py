"""Discrete domains, boundary conditions and eta transport."""

from src.lattice.boundary import (
    Arc,
    BoundaryConditionsDiscrete,
    EtaAssignment,
    boundary_arcs,
    eta_along_boundary,
)
from src.lattice.domain import DecoratedDomain, OuterNormal, build_domain
from src.lattice.geometry import Site

__all__ = [
    "Arc",
    "BoundaryConditionsDiscrete",
    "DecoratedDomain",
    "EtaAssignment",
    "OuterNormal",
    "Site",
    "boundary_arcs",
    "build_domain",
    "eta_along_boundary",
]
