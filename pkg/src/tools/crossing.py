"""MCP tool for continuum crossing probabilities.

Two query types share the tool: FK-Ising multi-arc crossings from real
points, and spin crossings G(lambda) for the four-point cases.
"""

from typing import Annotated, List, Literal, Optional

from fastmcp.tools.tool import ToolAnnotations
from pydantic import Field

from src.crossing.fk import fk_crossing_continuum
from src.crossing.gfunction import make_g
from src.models.crossing import CrossingQuery
from src.models.enums import GKind


async def evaluate_crossing(
    query: Annotated[Literal["fk", "spin"], Field(
        description="'fk' for FK-Ising arc connections, 'spin' for G(lambda)"
    )],
    points: Annotated[Optional[List[float]], Field(
        description="fk: endpoints x_1 < ... < x_2k of the wired arcs [x_{2i-1}, x_{2i}]"
    )] = None,
    subset: Annotated[Optional[List[int]], Field(
        description="fk: wired arcs i_1..i_r (1-based)"
    )] = None,
    kind: Annotated[GKind, Field(
        description="spin: boundary conditions. Options: pmpf (+/-/+/free), pmpm, pmff"
    )] = "pmpf",
    lam: Annotated[Optional[float], Field(
        description="spin: cross-ratio lambda in [0, 1]",
        ge=0.0,
        le=1.0,
    )] = None,
) -> dict:
    """Evaluate a scaling-limit crossing probability.

    fk: E[sigma_i1 ... sigma_ir] from the restricted partition-function
    ratios, which is the probability that two wired arcs are connected
    when r = 2. Every ratio Z_sigma / Z_{+...+} is returned.

    spin: (plus, minus) = (1 - G(lambda), G(lambda)).

    Use this when: Comparing lattice crossing frequencies with their
    conformally invariant limits.

    Returns:
        dict: fk -> {"value": float, "ratios": {...}, "weights": {...}}
              spin -> {"plus": float, "minus": float, "G": float}

    Error Conditions:
        - ValueError: missing arguments for the query type, bad ordering
        - SingularSystemError: colliding points
    """
    if query == "fk":
        if points is None or subset is None:
            raise ValueError("fk queries need points and subset")
        return fk_crossing_continuum(CrossingQuery(points=points, subset=subset)).model_dump()
    if lam is None:
        raise ValueError("spin queries need lam")
    value = make_g(kind)(lam)
    return {"plus": 1.0 - value, "minus": value, "G": value}


CROSSING_TOOL_METADATA = {
    "name": "evaluate_crossing",
    "annotations": ToolAnnotations(
        readOnlyHint=True,
        idempotentHint=True,
        openWorldHint=False
    ),
}
