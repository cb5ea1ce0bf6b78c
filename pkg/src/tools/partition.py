"""MCP tool for exact partition functions of fixture domains.

Wraps the low-temperature expansion: the domain file is read, the boundary
arcs are resolved and every source-constrained configuration is summed.
"""

from pathlib import Path
from typing import Annotated, List, Optional

from fastmcp.tools.tool import ToolAnnotations
from pydantic import Field

from src.config import get_fixtures_path
from src.lattice.geometry import Site
from src.lowtemp.configs import ConfigSpace
from src.observables.suite import load_fixture
from src.utils.debug import TimingContext


async def compute_partition_function(
    domain: Annotated[str, Field(
        description="Fixture domain file name (resolved under IFL_FIXTURES) or an absolute path"
    )],
    sources: Annotated[Optional[List[str]], Field(
        description="Source sites in the form kind(x,y;d), e.g. 'normal(0,1;4)'. "
                    "Empty for the plain partition function."
    )] = None,
) -> dict:
    """Compute Z(domain, sources) by exhaustive low-temperature expansion.

    Sums x^(#full edges) over every edge configuration whose odd-degree
    vertices are exactly the sources, at the critical weight
    x = sqrt(2) - 1. Edges on free boundary arcs weigh 1.

    Use this when: An exact partition function or a source-constrained
    configuration sum is needed on a small lattice domain.

    Do not use: For domains with more full edges than the enumeration cap
    (IFL_ENUM_CAP); the call is refused rather than approximated.

    Returns:
        dict: {
            "z": float,  # configuration sum
            "config_count": int,  # size of the enumerated cycle space
            "wall_time": float  # seconds
        }

    Error Conditions:
        - FileNotFoundError: domain file missing
        - EnumerationCapExceeded: domain too large for exhaustive enumeration
        - SourceError: odd total parity or repeated sources
    """
    path = Path(domain)
    if not path.is_absolute():
        path = get_fixtures_path() / path
    bc = load_fixture(path)
    async with TimingContext(None, "compute_partition_function") as timer:
        space = ConfigSpace(bc.domain, [Site.parse(s) for s in sources or []], bc.free_edges)
        z = space.total_weight()
    return {"z": z, "config_count": space.size, "wall_time": timer.elapsed}


PARTITION_TOOL_METADATA = {
    "name": "compute_partition_function",
    "annotations": ToolAnnotations(
        readOnlyHint=True,
        idempotentHint=True,
        openWorldHint=False
    ),
}
