"""MCP tools exposed by the lab server."""

from .partition import compute_partition_function
from .continuum import evaluate_continuum_observable
from .drift import compute_drift
from .crossing import evaluate_crossing

__all__ = [
    "compute_partition_function",
    "evaluate_continuum_observable",
    "compute_drift",
    "evaluate_crossing",
]
