"""Run every discrete identity on one fixture domain."""

from pathlib import Path
from typing import List, Optional

import logging

from src.config import get_tolerance
from src.errors import ToleranceViolation
from src.lattice.boundary import BoundaryConditionsDiscrete, boundary_arcs
from src.lattice.domain import build_domain
from src.models.domain import load_domain_spec
from src.models.results import CheckReport, CheckViolation
from src.observables.checks import (
    boundary_identity_check,
    collinearity_check,
    free_arc_checks,
    jump_equality_check,
    shol_check,
    winding_invariance_check,
)
from src.observables.hfunction import (
    appendix_identity_check,
    boundary_values_check,
    build_H,
    laplacian_check,
    plaquette_check,
)
from src.observables.observable import observable

logger = logging.getLogger(__name__)


def load_fixture(path: str | Path) -> BoundaryConditionsDiscrete:
    """Domain file -> boundary conditions on its decorated domain."""
    spec = load_domain_spec(path)
    return boundary_arcs(build_domain(spec), spec.arcs)


def verify_identities(
    bc: BoundaryConditionsDiscrete,
    tol: Optional[float] = None,
    jobs: int = 1,
    cap: Optional[int] = None,
) -> List[CheckReport]:
    """Compute F with both resolutions and check every identity.

    The free-arc checks run only when k >= 1; H is built from the raw
    observable when there is no free arc.
    """
    tol = get_tolerance() if tol is None else tol
    obs = observable(bc, normalization="normalized" if bc.k else "raw", jobs=jobs, cap=cap)
    left = observable(bc, normalization=obs.normalization, rule="left", jobs=jobs, cap=cap)

    reports = [
        shol_check(obs, tol),
        collinearity_check(obs, tol),
        boundary_identity_check(obs, tol),
        winding_invariance_check(obs, left, tol),
        plaquette_check(obs, tol),
    ]
    if bc.k:
        reports += free_arc_checks(obs, tol)
        reports.append(jump_equality_check(obs, tol))
    try:
        H = build_H(obs, tol)
    except ToleranceViolation as exc:
        reports.append(
            CheckReport(
                name="H closure",
                max_defect=exc.defect,
                tol=tol,
                n_checked=1,
                violations=[CheckViolation(site=str(exc.site), defect=exc.defect)],
            )
        )
    else:
        reports.append(CheckReport(name="H closure", max_defect=H.closure_defect, tol=tol, n_checked=1))
        reports += boundary_values_check(H, bc, tol)
        reports += laplacian_check(H, bc, tol)
        reports.append(appendix_identity_check(H, obs, tol))
    failed = [r.name for r in reports if not r.ok]
    logger.info("Identity suite", extra={"checks": len(reports), "failed": failed})
    return reports
