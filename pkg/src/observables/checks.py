"""
Identity checks on computed observables.

Every check returns a CheckReport; tolerances are relative to the largest
|F| involved.
"""

from typing import Dict, List, Optional, Tuple

import cmath
import logging
import math

from src.config import get_tolerance
from src.errors import SiteError
from src.lattice.boundary import BoundaryConditionsDiscrete, eta_along_boundary
from src.lattice.geometry import Site, Strand, canonical_edge, eta_of, step
from src.lowtemp.configs import partition_function
from src.models.results import CheckReport, CheckViolation
from src.observables.observable import DiscreteObservable

logger = logging.getLogger(__name__)

MAX_REPORTED = 20


def project(value: complex, eta: complex) -> complex:
    """Orthogonal projection of value onto the line eta R (|eta| = 1)."""
    return (value + eta * eta * value.conjugate()) / 2


def _report(name: str, defects: List[Tuple[str, float]], tol: float) -> CheckReport:
    worst = max((d for _, d in defects), default=0.0)
    violations = [CheckViolation(site=s, defect=d) for s, d in defects if d > tol]
    violations.sort(key=lambda v: -v.defect)
    report = CheckReport(
        name=name,
        max_defect=worst,
        tol=tol,
        n_checked=len(defects),
        violations=violations[:MAX_REPORTED],
    )
    if violations:
        logger.warning(f"{name}: {len(violations)} violations", extra={"max_defect": worst})
    return report


def adjacent_edge_site(bc: BoundaryConditionsDiscrete, v, d: int) -> Optional[Site]:
    """Midedge or outer normal reached from vertex v along edge direction d."""
    domain = bc.domain
    if domain.has_edge(v, d):
        return Site.mid(v, d)
    site = Site.normal(v, d)
    return site if domain.is_outer_normal(site) else None


def shol_check(obs: DiscreteObservable, tol: Optional[float] = None) -> CheckReport:
    """max |Proj_{l_q} F(z) - F(q)| over adjacent (corner, edge site) pairs.

    Pairs whose edge site lies on a free arc or is a source are skipped.
    """
    tol = (get_tolerance() if tol is None else tol) * max(obs.max_abs, 1e-300)
    defects = []
    for q, fq in obs.values.items():
        if q.kind != "corner":
            continue
        eta = eta_of(q.d)
        for d in (q.d - 1, q.d + 1):
            z = adjacent_edge_site(obs.bc, q.vertex, d % 8)
            if z is None or z not in obs.values:
                continue
            defects.append((f"{q}|{z}", abs(project(obs.values[z], eta) - fq)))
    return _report("s-holomorphicity", defects, tol)


def collinearity_check(obs: DiscreteObservable, tol: Optional[float] = None) -> CheckReport:
    """F(q) lies on l_q = eta_q R at every corner."""
    tol = (get_tolerance() if tol is None else tol) * max(obs.max_abs, 1e-300)
    defects = [
        (str(q), abs((value / eta_of(q.d)).imag))
        for q, value in obs.values.items()
        if q.kind == "corner"
    ]
    return _report("corner collinearity", defects, tol)


def boundary_identity_check(obs: DiscreteObservable, tol: Optional[float] = None) -> CheckReport:
    """F(z) = -eta_z Z(sources, z) at outer normals, with eta transported from n_{a_1}.

    Z is recomputed independently for every normal.
    """
    bc = obs.bc
    tol = get_tolerance() if tol is None else tol
    eta = eta_along_boundary(bc, obs.reference)
    defects = []
    for n in bc.domain.normals:
        z = n.site
        if z not in obs.values:
            continue
        expected = -eta[z] * partition_function(bc.domain, bc, tuple(bc.sources) + (z,)) / obs.scale
        defects.append((str(z), abs(obs.values[z] - expected) / max(abs(expected), 1e-300)))
    return _report("boundary identity", defects, tol)


def oriented_free_edge(bc: BoundaryConditionsDiscrete, edge) -> Strand:
    """The free edge oriented with the domain on its left."""
    if isinstance(edge, Site):
        edge = edge.strand
    key = canonical_edge(*edge)
    if key not in bc.free_edges:
        raise SiteError(f"edge {key} is not on a free arc")
    for arc in bc.arcs:
        for (v, d) in arc.edges:
            if canonical_edge(v, d) == key:
                return (v, d)
    raise SiteError(f"edge {key} is not a boundary edge")


def free_edge_corners(bc: BoundaryConditionsDiscrete, edge) -> Tuple[Site, Site, Strand]:
    """Inside corners q_1 (at the start) and q_2 (at the end) of an oriented free edge."""
    v, d = oriented_free_edge(bc, edge)
    w = step(v, d)
    return Site.corner(v, d + 1), Site.corner(w, d + 3), (v, d)


def extend_to_free(obs: DiscreteObservable, edge) -> complex:
    """F at a free midedge from its two inside corners.

    F(z) = sqrt2 e^{-i pi/4} F(q_2) + sqrt2 e^{i pi/4} F(q_1).
    """
    q1, q2, _ = free_edge_corners(obs.bc, edge)
    if q1 not in obs.values or q2 not in obs.values:
        raise SiteError(f"corner values at {q1} and {q2} are required")
    root2 = math.sqrt(2.0)
    return root2 * cmath.exp(-0.25j * math.pi) * obs.values[q2] + root2 * cmath.exp(0.25j * math.pi) * obs.values[q1]


def free_arc_checks(obs: DiscreteObservable, tol: Optional[float] = None) -> List[CheckReport]:
    """Collinearity F(z) in i z^{-1/2} R and the corner rotation F(q_2) = e^{-i pi/4} F(q_1)."""
    tol = (get_tolerance() if tol is None else tol) * max(obs.max_abs, 1e-300)
    line_defects = []
    rotation_defects = []
    for edge in sorted(obs.bc.free_edges):
        q1, q2, (v, d) = free_edge_corners(obs.bc, edge)
        value = extend_to_free(obs, edge)
        direction = 1j * cmath.exp(-1j * math.pi * d / 8.0)
        line_defects.append((f"mid{edge}", abs((value / direction).imag)))
        rotation_defects.append((f"mid{edge}", abs(obs.values[q2] - cmath.exp(-0.25j * math.pi) * obs.values[q1])))
    return [
        _report("free-arc collinearity", line_defects, tol),
        _report("free-arc corner rotation", rotation_defects, tol),
    ]


def winding_invariance_check(obs: DiscreteObservable, other: DiscreteObservable, tol: Optional[float] = None) -> CheckReport:
    """Observables computed with the two vertex resolutions agree site by site."""
    tol = (get_tolerance() if tol is None else tol) * max(obs.max_abs, 1e-300)
    defects = [
        (str(site), abs(value - other.values[site]))
        for site, value in obs.values.items()
        if site in other.values
    ]
    return _report("winding invariance", defects, tol)


def jump_equality_check(obs: DiscreteObservable, tol: Optional[float] = None) -> CheckReport:
    """|F(n_{b_{2i-1}})| = |F(n_{b_{2i}})| on every free arc."""
    tol = (get_tolerance() if tol is None else tol) * max(obs.max_abs, 1e-300)
    normals_b = obs.bc.normals_b
    defects = []
    for i in range(obs.bc.k):
        first, second = normals_b[2 * i], normals_b[2 * i + 1]
        if first in obs.values and second in obs.values:
            defects.append((f"arc{i + 1}", abs(abs(obs.values[first]) - abs(obs.values[second]))))
    return _report("free-arc jump equality", defects, tol)
