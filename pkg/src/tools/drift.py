"""MCP tool for the drift of the Loewner driving process."""

from typing import Annotated, List, Optional

import numpy as np
from fastmcp.tools.tool import ToolAnnotations
from pydantic import Field

from src.continuum.bc import ContinuumBC
from src.continuum.closed_forms import drift
from src.sle.integrator import closed_form_drift
from src.sle.state import DriftState


async def compute_drift(
    a: Annotated[List[float], Field(
        description="Marked points a_1..a_m; a_1 is the driving point",
        min_length=1,
    )],
    b: Annotated[List[float], Field(
        description="Free-arc endpoints b_1 < ... < b_2k; the last may be 'inf'",
        min_length=2,
    )],
    zeta: Annotated[Optional[List[int]], Field(
        description="Signs zeta_1..zeta_{k-1} in {-1, +1}"
    )] = None,
) -> dict:
    """Compute D = -3 d/da_1 log|R| for the driving process.

    The numeric value comes from finite differences of solved residues.
    For the +/-/free, +/-/+/free and +/-/free/+/free configurations the
    closed form is returned alongside.

    Use this when: The drift at a given configuration is needed, e.g. to
    check the SDE before running ensembles.

    Returns:
        dict: {"drift": float, "closed_form": float | None}

    Error Conditions:
        - BoundaryConditionError: invalid boundary data
        - EvaluationError: a_1 too close to another marked point
    """
    bc = ContinuumBC(a=tuple(a), b=tuple(b), zeta=tuple(zeta or ()))
    closed = closed_form_drift(bc)
    closed_value = None
    if closed is not None:
        state = DriftState.from_bc(bc)
        closed_value = float(closed(np.array([state.a1]), np.array([state.tracked]))[0])
    return {"drift": drift(bc), "closed_form": closed_value}


DRIFT_TOOL_METADATA = {
    "name": "compute_drift",
    "annotations": ToolAnnotations(
        readOnlyHint=True,
        idempotentHint=True,
        openWorldHint=False
    ),
}
