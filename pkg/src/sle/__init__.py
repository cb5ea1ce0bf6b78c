"""The drifted Loewner driving process and its Monte Carlo harnesses."""

from src.sle.harness import HittingEstimate, MartingaleStatistic, hitting_probability, martingale_check
from src.sle.integrator import drift_function, run_ensemble, simulate, step
from src.sle.state import DriftState, Trace
from src.sle.trace import forward_map, trace_curve, vertical_slit

__all__ = [
    "DriftState",
    "HittingEstimate",
    "MartingaleStatistic",
    "Trace",
    "drift_function",
    "forward_map",
    "hitting_probability",
    "martingale_check",
    "run_ensemble",
    "simulate",
    "step",
    "trace_curve",
    "vertical_slit",
]
