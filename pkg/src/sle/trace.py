"""Planar traces from driving functions by backward Loewner steps."""

from typing import Sequence

import logging
import math

import numpy as np

logger = logging.getLogger(__name__)

# |dW| / sqrt(dt) above this near the tip makes the pointwise inversion unreliable
TIP_WARNING_RATIO = 10.0


def vertical_slit(x0: float, t: float, a: float = 0.0) -> float:
    """Image at time t of the real point a + x0 under constant driving a."""
    return math.copysign(math.sqrt(x0 * x0 + 4.0 * t), x0) + a


def _upper_sqrt(w: np.ndarray) -> np.ndarray:
    root = np.sqrt(w.astype(complex))
    return np.where(root.imag < 0, -root, root)


def trace_curve(times: Sequence[float], driving: Sequence[float], stride: int = 1) -> np.ndarray:
    """gamma(t_j) for every stride-th sample, by composing inverse one-step maps.

    Over [t_{l-1}, t_l] the driving is frozen at its value at t_l, so each inverse
    step is z -> W + sqrt((z - W)^2 - 4 dt) on the upper branch.
    """
    times = np.asarray(times, dtype=float)
    driving = np.asarray(driving, dtype=float)
    dt = np.diff(times)
    if np.any(dt <= 0):
        raise ValueError("times must increase strictly")
    jumps = np.abs(np.diff(driving)) / np.sqrt(dt)
    if len(jumps) and jumps.max() > TIP_WARNING_RATIO:
        logger.warning("Large driving increments", extra={"max_ratio": float(jumps.max())})
    indices = np.arange(0, len(times), stride)
    z = driving[indices].astype(complex)
    for l in range(len(times) - 1, 0, -1):
        active = indices >= l
        w = driving[l]
        z[active] = w + _upper_sqrt((z[active] - w) ** 2 - 4.0 * dt[l - 1])
    return z


def forward_map(z: complex, times: Sequence[float], driving: Sequence[float]) -> complex:
    """g_t(z) at the last time with the same frozen right-endpoint steps.

    The branch follows z - W continuously, so real points keep their side.
    """
    times = np.asarray(times, dtype=float)
    driving = np.asarray(driving, dtype=float)
    z = np.array([z], dtype=complex)
    for l in range(1, len(times)):
        w = driving[l]
        root = np.sqrt((z - w) ** 2 + 4.0 * (times[l] - times[l - 1]))
        z = w + np.where((root * np.conj(z - w)).real < 0, -root, root)
    return complex(z[0])
