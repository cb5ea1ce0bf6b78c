"""Monte Carlo checks on the four-point +/-/+/free process."""

from dataclasses import dataclass
from typing import Callable, Optional

import logging
import math

import numpy as np

from src.continuum.bc import ContinuumBC
from src.errors import BoundaryConditionError, EvaluationError
from src.sle.integrator import Ensemble, run_ensemble

logger = logging.getLogger(__name__)

# tracked columns for a = (a1, a2), b = (b1, inf)
A2, B1 = 0, 1


@dataclass(frozen=True)
class HittingEstimate:
    """Hit frequency among stopped paths, with bounds that count the rest.

    lower treats every unstopped path as reaching a2 first, upper as
    swallowing b1 first.
    """

    value: float
    stderr: float
    stopped: int
    n_paths: int
    unstopped_fraction: float
    lower: float
    upper: float


@dataclass(frozen=True)
class MartingaleStatistic:
    """Sample mean of G(lambda(tau)) against G(lambda(0))."""

    mean: float
    stderr: float
    expected: float
    z: float
    n_paths: int


def check_four_point(bc: ContinuumBC) -> None:
    if bc.m != 2 or bc.k != 1 or not bc.at_infinity:
        raise BoundaryConditionError("need +/-/+/free data: a = (a1, a2), b = (b1, inf)")
    a1, a2 = bc.a
    if not a2 < a1 < bc.b[0]:
        raise BoundaryConditionError(f"need a2 < a1 < b1, got a1={a1}, a2={a2}, b1={bc.b[0]}")


def initial_lambda(bc: ContinuumBC) -> float:
    a1, a2 = bc.a
    return (a1 - a2) / (bc.b[0] - a2)


def final_lambda(ensemble: Ensemble) -> np.ndarray:
    """lambda at tau, snapped to 1 when b1 was swallowed and to 0 for a2."""
    tracked = ensemble.tracked
    lam = (ensemble.a1 - tracked[:, A2]) / (tracked[:, B1] - tracked[:, A2])
    lam = np.clip(lam, 0.0, 1.0)
    lam = np.where(ensemble.swallowed == B1, 1.0, lam)
    return np.where(ensemble.swallowed == A2, 0.0, lam)


def hitting_probability(
    bc: ContinuumBC,
    n_paths: int,
    dt: Optional[float] = None,
    seed: Optional[int] = None,
    horizon: Optional[float] = None,
    jobs: int = 1,
) -> HittingEstimate:
    """Fraction of stopped paths that swallow b1 before a2.

    Paths still running at the horizon are reported through
    unstopped_fraction and the lower/upper bounds.
    """
    check_four_point(bc)
    ensemble = run_ensemble(bc, n_paths, horizon, dt, seed, jobs)
    stopped = ensemble.swallowed >= 0
    count = int(stopped.sum())
    if count == 0:
        raise EvaluationError("no path was swallowed before the horizon")
    hits = int((ensemble.swallowed[stopped] == B1).sum())
    p = hits / count
    unstopped = n_paths - count
    estimate = HittingEstimate(
        value=p,
        stderr=math.sqrt(p * (1 - p) / count),
        stopped=count,
        n_paths=n_paths,
        unstopped_fraction=unstopped / n_paths,
        lower=hits / n_paths,
        upper=(hits + unstopped) / n_paths,
    )
    if unstopped:
        logger.warning(
            "Paths still running at the horizon",
            extra={"unstopped": unstopped, "lower": estimate.lower, "upper": estimate.upper},
        )
    logger.info("Hitting probability", extra={"value": p, "stopped": count, "paths": n_paths})
    return estimate


def martingale_check(
    bc: ContinuumBC,
    g: Callable[[float], float],
    n_paths: int,
    dt: Optional[float] = None,
    seed: Optional[int] = None,
    horizon: Optional[float] = None,
    jobs: int = 1,
) -> MartingaleStatistic:
    """z-score of E[G(lambda(tau ^ horizon))] - G(lambda(0)).

    Raises:
        EvaluationError: fewer than two paths
    """
    check_four_point(bc)
    if n_paths < 2:
        raise EvaluationError("martingale check needs at least two paths")
    ensemble = run_ensemble(bc, n_paths, horizon, dt, seed, jobs)
    values = np.array([g(float(lam)) for lam in final_lambda(ensemble)])
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n_paths))
    expected = g(initial_lambda(bc))
    if stderr == 0.0:
        z = 0.0 if mean == expected else math.copysign(math.inf, mean - expected)
    else:
        z = (mean - expected) / stderr
    logger.info("Martingale check", extra={"mean": mean, "expected": expected, "z": z})
    return MartingaleStatistic(mean, stderr, expected, z, n_paths)
