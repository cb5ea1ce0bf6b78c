"""
Euler-Maruyama integration of the driving process and the Loewner flow
of the other marked points:

    d a_1 = sqrt(3) dB_t - 3 d/da_1 log|R| dt,    d x = 2 dt / (x - a_1).

Paths are integrated together as numpy arrays. Every path owns a Philox
stream spawned from the master seed, so results do not depend on how the
paths are split over workers.
"""

from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, List, Optional, Sequence

import logging
import math

import numpy as np

from src.config import DEFAULT_NOISE_CHUNK, get_drift_cap, get_dt, get_horizon, get_seed, get_swallow_eps
from src.continuum.bc import ContinuumBC
from src.continuum.closed_forms import drift, five_point_drift, four_point_drift, three_point_drift
from src.errors import LabError
from src.sle.state import DriftState, Trace, tracked_labels
from src.sle.trace import trace_curve
from src.utils.debug import TimingContext

logger = logging.getLogger(__name__)

SQRT_KAPPA = math.sqrt(3.0)

# (a1 values (n,), tracked points (n, p)) -> drift (n,); nan marks a failed evaluation
DriftFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def zero_drift(a1: np.ndarray, tracked: np.ndarray) -> np.ndarray:
    return np.zeros_like(a1)


def closed_form_drift(bc: ContinuumBC) -> Optional[DriftFn]:
    """Vectorized drift for the 3-, 4- and 5-point boundary conditions, None otherwise."""
    m, k = bc.m, bc.k
    if m == 1 and k == 1:
        return lambda a1, x: three_point_drift(a1, x[:, 0], x[:, 1])
    if m == 2 and k == 1 and bc.at_infinity:
        return lambda a1, x: four_point_drift(a1, x[:, 0], x[:, 1])
    if m == 1 and k == 2 and bc.at_infinity and bc.zeta == (-1,) and bc.a[0] < bc.b[0]:
        return lambda a1, x: five_point_drift(a1, x[:, 0], x[:, 1], x[:, 2])
    return None


def numeric_drift(bc: ContinuumBC) -> DriftFn:
    """Finite-difference drift from solved observables, one path at a time."""
    labels = tracked_labels(bc)

    def evaluate(a1: np.ndarray, tracked: np.ndarray) -> np.ndarray:
        values = np.empty_like(a1)
        for row, (x, points) in enumerate(zip(a1, tracked)):
            state = DriftState(0.0, float(x), tuple(float(p) for p in points), labels, bc.zeta)
            try:
                values[row] = drift(state.to_bc())
            except (LabError, ValueError, ZeroDivisionError):
                values[row] = np.nan
        return values

    return evaluate


def drift_function(bc: ContinuumBC, zero: bool = False) -> DriftFn:
    if zero:
        return zero_drift
    return closed_form_drift(bc) or numeric_drift(bc)


def _swallowed(a1_old, old, a1_new, new, eps: float) -> np.ndarray:
    """Index of the swallowed tracked point per row, -1 while running.

    A point is swallowed when it comes within eps of a_1 or ends up on the
    other side of it.
    """
    gaps = np.abs(new - a1_new[:, None])
    crossed = np.sign(old - a1_old[:, None]) != np.sign(new - a1_new[:, None])
    gaps = np.where(crossed & np.isfinite(new), 0.0, gaps)
    nearest = np.argmin(gaps, axis=1)
    return np.where(gaps[np.arange(len(gaps)), nearest] < eps, nearest, -1)


def _nearest(a1: np.ndarray, tracked: np.ndarray) -> np.ndarray:
    return np.argmin(np.abs(tracked - a1[:, None]), axis=1)


def _advance(a1, tracked, dt: float, dw, drift_values, cap: float):
    """One Euler-Maruyama step; rows with a failed drift stay put."""
    failed = ~np.isfinite(drift_values)
    d = np.clip(np.where(failed, 0.0, drift_values), -cap, cap)
    new_a1 = a1 + SQRT_KAPPA * dw + d * dt
    with np.errstate(divide="ignore", invalid="ignore"):
        flow = np.where(np.isfinite(tracked), 2.0 * dt / (tracked - a1[:, None]), 0.0)
    new_tracked = tracked + flow
    new_a1 = np.where(failed, a1, new_a1)
    new_tracked = np.where(failed[:, None], tracked, new_tracked)
    return new_a1, new_tracked, d, failed


def step(
    state: DriftState,
    dt: float,
    dw: float,
    drift_fn: Optional[DriftFn] = None,
    eps: Optional[float] = None,
    cap: Optional[float] = None,
) -> DriftState:
    """Advance one time step with Brownian increment dw (zero drift when drift_fn is None).

    A state whose gap is already below eps, or whose drift cannot be
    evaluated, comes back swallowed by the nearest point.
    """
    if not state.running:
        raise ValueError(f"state already swallowed {state.swallowed} at t = {state.t}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    eps = get_swallow_eps() if eps is None else eps
    cap = get_drift_cap() if cap is None else cap
    a1 = np.array([state.a1])
    tracked = np.array([state.tracked], dtype=float)
    nearest = int(_nearest(a1, tracked)[0])
    if abs(state.tracked[nearest] - state.a1) < eps:
        return state.stopped(state.labels[nearest])

    drift_values = (drift_fn or zero_drift)(a1, tracked)
    new_a1, new_tracked, _, failed = _advance(a1, tracked, dt, np.array([dw]), drift_values, cap)
    if failed[0]:
        logger.warning("Drift evaluation failed; forcing swallow", extra={"t": state.t, "a1": state.a1})
        return state.stopped(state.labels[nearest])
    hit = int(_swallowed(a1, tracked, new_a1, new_tracked, eps)[0])
    new_state = DriftState(
        state.t + dt, float(new_a1[0]), tuple(float(x) for x in new_tracked[0]), state.labels, state.zeta
    )
    return new_state if hit < 0 else new_state.stopped(state.labels[hit])


@dataclass
class Ensemble:
    """Final states of a block of paths, with optional records every record_every steps."""

    labels: tuple
    a1: np.ndarray
    tracked: np.ndarray
    swallowed: np.ndarray  # tracked index, -1 if still running at the horizon
    stop_time: np.ndarray
    compensator: np.ndarray
    record_times: Optional[np.ndarray] = None
    record_a1: Optional[np.ndarray] = None
    record_tracked: Optional[np.ndarray] = None
    record_compensator: Optional[np.ndarray] = None

    @property
    def n_paths(self) -> int:
        return len(self.a1)

    @classmethod
    def concatenate(cls, parts: Sequence["Ensemble"]) -> "Ensemble":
        def join(name: str, axis: int = 0):
            if getattr(parts[0], name) is None:
                return None
            return np.concatenate([getattr(p, name) for p in parts], axis=axis)

        return cls(
            parts[0].labels,
            join("a1"),
            join("tracked"),
            join("swallowed"),
            join("stop_time"),
            join("compensator"),
            parts[0].record_times,
            join("record_a1", 1),
            join("record_tracked", 1),
            join("record_compensator", 1),
        )


def run_block(
    bc: ContinuumBC,
    seeds: Sequence[np.random.SeedSequence],
    horizon: float,
    dt: float,
    record_every: int = 0,
    zero: bool = False,
    eps: Optional[float] = None,
    cap: Optional[float] = None,
) -> Ensemble:
    """Integrate len(seeds) paths until swallowing or the horizon."""
    eps = get_swallow_eps() if eps is None else eps
    cap = get_drift_cap() if cap is None else cap
    drift_fn = drift_function(bc, zero)
    generators = [np.random.Generator(np.random.Philox(seed)) for seed in seeds]
    n = len(generators)
    start = DriftState.from_bc(bc)
    a1 = np.full(n, start.a1)
    tracked = np.tile(np.array(start.tracked, dtype=float), (n, 1))
    compensator = np.zeros(n)
    swallowed = np.full(n, -1)
    stop_time = np.full(n, horizon)
    steps = int(math.ceil(horizon / dt - 1e-9))

    records = None
    if record_every:
        count = steps // record_every + 1
        records = (
            np.arange(count) * record_every * dt,
            np.full((count, n), np.nan),
            np.full((count, n, tracked.shape[1]), np.nan),
            np.full((count, n), np.nan),
        )
        records[1][0], records[2][0], records[3][0] = a1, tracked, 0.0

    alive = np.arange(n)
    initial = np.abs(tracked - a1[:, None]).min(axis=1) < eps
    swallowed[initial] = _nearest(a1[initial], tracked[initial])
    stop_time[initial] = 0.0
    alive = alive[~initial]

    noise = np.empty((n, DEFAULT_NOISE_CHUNK))
    for s in range(steps):
        if not len(alive):
            break
        column = s % DEFAULT_NOISE_CHUNK
        if column == 0:
            for i in alive:
                noise[i] = generators[i].standard_normal(DEFAULT_NOISE_CHUNK)
        old_a1, old_tracked = a1[alive], tracked[alive]
        dw = noise[alive, column] * math.sqrt(dt)
        new_a1, new_tracked, d, failed = _advance(old_a1, old_tracked, dt, dw, drift_fn(old_a1, old_tracked), cap)
        hit = _swallowed(old_a1, old_tracked, new_a1, new_tracked, eps)
        hit = np.where(failed & (hit < 0), _nearest(old_a1, old_tracked), hit)
        a1[alive], tracked[alive] = new_a1, new_tracked
        compensator[alive] += d * dt
        t = (s + 1) * dt
        if records is not None and (s + 1) % record_every == 0:
            row = (s + 1) // record_every
            records[1][row, alive], records[2][row, alive], records[3][row, alive] = new_a1, new_tracked, compensator[alive]
        stopped = hit >= 0
        swallowed[alive[stopped]] = hit[stopped]
        stop_time[alive[stopped]] = t
        alive = alive[~stopped]

    ensemble = Ensemble(start.labels, a1, tracked, swallowed, stop_time, compensator)
    if records is not None:
        ensemble.record_times, ensemble.record_a1, ensemble.record_tracked, ensemble.record_compensator = records
    return ensemble


def _block_worker(args) -> Ensemble:
    return run_block(*args)


def run_ensemble(
    bc: ContinuumBC,
    n_paths: int,
    horizon: Optional[float] = None,
    dt: Optional[float] = None,
    seed: Optional[int] = None,
    jobs: int = 1,
    record_every: int = 0,
    zero: bool = False,
) -> Ensemble:
    """Paths spread over `jobs` worker processes; identical results for any jobs."""
    if n_paths < 1:
        raise ValueError(f"n_paths must be positive, got {n_paths}")
    dt = get_dt() if dt is None else dt
    horizon = get_horizon() * bc.scale**2 if horizon is None else horizon
    seed = get_seed() if seed is None else seed
    seeds = np.random.SeedSequence(seed).spawn(n_paths)
    bounds = np.linspace(0, n_paths, max(1, min(jobs, n_paths)) + 1).astype(int)
    tasks = [(bc, seeds[lo:hi], horizon, dt, record_every, zero) for lo, hi in zip(bounds, bounds[1:])]

    with TimingContext(None, "run_ensemble") as timer:
        if jobs > 1:
            with Pool(jobs) as pool:
                parts = pool.map(_block_worker, tasks)
        else:
            parts = [_block_worker(task) for task in tasks]
    ensemble = Ensemble.concatenate(parts)
    logger.info(
        "Ensemble integrated",
        extra={
            "paths": n_paths,
            "dt": dt,
            "horizon": horizon,
            "stopped": int((ensemble.swallowed >= 0).sum()),
            "elapsed": timer.elapsed,
        },
    )
    return ensemble


def simulate(
    bc: ContinuumBC,
    horizon: Optional[float] = None,
    dt: Optional[float] = None,
    seed: Optional[int] = None,
    n_paths: int = 1,
    jobs: int = 1,
    record_every: int = 1,
    zero: bool = False,
    with_curve: bool = False,
) -> List[Trace]:
    """Recorded paths, cut at their swallowing time, optionally with their planar traces."""
    ensemble = run_ensemble(bc, n_paths, horizon, dt, seed, jobs, max(record_every, 1), zero)
    times = ensemble.record_times
    traces = []
    for i in range(ensemble.n_paths):
        keep = times <= ensemble.stop_time[i] + 1e-12
        hit = int(ensemble.swallowed[i])
        traces.append(
            Trace(
                times=times[keep],
                driving=ensemble.record_a1[keep, i],
                compensator=ensemble.record_compensator[keep, i],
                tracked=ensemble.record_tracked[keep, i],
                labels=ensemble.labels,
                status="swallowed" if hit >= 0 else "running",
                swallowed=ensemble.labels[hit] if hit >= 0 else None,
                stop_time=float(ensemble.stop_time[i]),
            )
        )
    if with_curve:
        for trace in traces:
            trace.curve = trace_curve(trace.times, trace.driving)
    return traces
