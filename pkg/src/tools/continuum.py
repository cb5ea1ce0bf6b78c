"""MCP tool for the continuum observable in the upper half-plane."""

from typing import Annotated, List, Optional

from fastmcp.tools.tool import ToolAnnotations
from pydantic import Field

from src.continuum.bc import ContinuumBC
from src.continuum.observable import eval_f, h_function, residue_R, solve_observable


async def evaluate_continuum_observable(
    b: Annotated[List[float], Field(
        description="Free-arc endpoints b_1 < ... < b_2k; the last may be 'inf'",
        min_length=2,
    )],
    points: Annotated[List[List[float]], Field(
        description="Evaluation points [x, y] with y >= 0"
    )],
    a: Annotated[Optional[List[float]], Field(
        description="Sign-change points a_1..a_m off the free arcs"
    )] = None,
    zeta: Annotated[Optional[List[int]], Field(
        description="Signs zeta_1..zeta_{k-1} in {-1, +1}"
    )] = None,
) -> dict:
    """Evaluate f_{H,B}(z) and h = Im int f^2 at the given points.

    Solves the linear system for the polynomial numerator once, then
    evaluates pointwise.

    Use this when: Continuum values are needed to compare against discrete
    observables or to inspect the boundary-value problem.

    Returns:
        dict: {
            "values": [{"x": float, "y": float, "re": float, "im": float, "h": float}],
            "residue": float | None,  # residue at a_1 when m >= 1
            "condition_number": float
        }

    Error Conditions:
        - BoundaryConditionError: unordered endpoints, wrong zeta count, a on a free arc
        - SingularSystemError: numerically singular system (colliding points)
        - EvaluationError: point below the real axis or at a marked point
    """
    bc = ContinuumBC(a=tuple(a or ()), b=tuple(b), zeta=tuple(zeta or ()))
    obs = solve_observable(bc)
    values = []
    for x, y in points:
        z = complex(x, y)
        f = eval_f(obs, z)
        values.append({"x": x, "y": y, "re": f.real, "im": f.imag, "h": h_function(obs, z) if y > 0 else None})
    return {
        "values": values,
        "residue": residue_R(obs) if bc.m else None,
        "condition_number": obs.condition_number,
    }


CONTINUUM_TOOL_METADATA = {
    "name": "evaluate_continuum_observable",
    "annotations": ToolAnnotations(
        readOnlyHint=True,
        idempotentHint=True,
        openWorldHint=False
    ),
}
