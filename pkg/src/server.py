"""FastMCP server exposing read-only Ising lab computations.

Tools:
- compute_partition_function: exact low-temperature expansion on fixture domains
- evaluate_continuum_observable: f and h for half-plane boundary conditions
- compute_drift: drift of the Loewner driving process
- evaluate_crossing: FK-Ising and spin crossing probabilities

Runs over stdio by default (`python -m src.server`); banners go to stderr.
"""

import logging
import sys
from contextlib import asynccontextmanager

from dotenv import load_dotenv
from fastmcp import FastMCP

from src.config import get_fixtures_path, get_log_level

load_dotenv()
logging.basicConfig(level=get_log_level())
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastMCP):
    """
    Warm up cached quadrature rules so the first crossing query is not slow.
    """
    print("🚀 Ising lab server starting...", file=sys.stderr)
    from src.crossing.gfunction import INTEGRANDS, make_g

    for kind in INTEGRANDS:
        make_g(kind)
    print("✅ Gauss-Jacobi rules cached", file=sys.stderr)

    fixtures = get_fixtures_path()
    if fixtures.is_dir():
        print(f"✅ Fixture domains: {fixtures}", file=sys.stderr)
    else:
        print(f"⚠️  Warning: fixture directory not found: {fixtures}", file=sys.stderr)

    print("✅ Server ready!", file=sys.stderr)

    yield

    print("🛑 Ising lab server shutting down...", file=sys.stderr)


# Import tool functions (using src. prefix for correct imports)
from src.tools.partition import compute_partition_function, PARTITION_TOOL_METADATA
from src.tools.continuum import evaluate_continuum_observable, CONTINUUM_TOOL_METADATA
from src.tools.drift import compute_drift, DRIFT_TOOL_METADATA
from src.tools.crossing import evaluate_crossing, CROSSING_TOOL_METADATA

mcp = FastMCP("Ising Lab", lifespan=lifespan)

for tool, metadata in (
    (compute_partition_function, PARTITION_TOOL_METADATA),
    (evaluate_continuum_observable, CONTINUUM_TOOL_METADATA),
    (compute_drift, DRIFT_TOOL_METADATA),
    (evaluate_crossing, CROSSING_TOOL_METADATA),
):
    mcp.tool(name=metadata["name"], annotations=metadata["annotations"])(tool)

print("✅ Ising lab server initialized", file=sys.stderr)
print("   🧮 compute_partition_function [read-only]", file=sys.stderr)
print("   📈 evaluate_continuum_observable [read-only]", file=sys.stderr)
print("   🌀 compute_drift [read-only]", file=sys.stderr)
print("   🔀 evaluate_crossing [read-only]", file=sys.stderr)


if __name__ == "__main__":
    mcp.run()
