"""Loewner states and recorded paths."""

from dataclasses import dataclass, replace
from typing import Literal, Optional, Tuple

import numpy as np

from src.continuum.bc import ContinuumBC

Status = Literal["running", "swallowed"]


def tracked_labels(bc: ContinuumBC) -> Tuple[str, ...]:
    """Names of the points following the flow: a_2..a_m, then b_1..b_2k."""
    return tuple(f"a{i}" for i in range(2, bc.m + 1)) + tuple(f"b{i}" for i in range(1, 2 * bc.k + 1))


@dataclass(frozen=True)
class DriftState:
    """Driving value a_1(t) and the images of the other marked points at capacity time t."""

    t: float
    a1: float
    tracked: Tuple[float, ...]
    labels: Tuple[str, ...]
    zeta: Tuple[int, ...] = ()
    status: Status = "running"
    swallowed: Optional[str] = None

    @classmethod
    def from_bc(cls, bc: ContinuumBC) -> "DriftState":
        if bc.m < 1:
            raise ValueError("the driving point a_1 is required")
        return cls(0.0, bc.a[0], bc.a[1:] + bc.b, tracked_labels(bc), bc.zeta)

    def to_bc(self) -> ContinuumBC:
        m = 1 + sum(label.startswith("a") for label in self.labels)
        return ContinuumBC(a=(self.a1,) + self.tracked[: m - 1], b=self.tracked[m - 1 :], zeta=self.zeta)

    def position(self, label: str) -> float:
        return self.tracked[self.labels.index(label)]

    @property
    def running(self) -> bool:
        return self.status == "running"

    def stopped(self, label: str) -> "DriftState":
        return replace(self, status="swallowed", swallowed=label)


@dataclass
class Trace:
    """One recorded path.

    compensator is the running integral of the drift, so that
    driving - driving[0] - compensator is the martingale part.
    """

    times: np.ndarray
    driving: np.ndarray
    compensator: np.ndarray
    tracked: np.ndarray  # (samples, points)
    labels: Tuple[str, ...]
    status: Status = "running"
    swallowed: Optional[str] = None
    stop_time: Optional[float] = None
    curve: Optional[np.ndarray] = None  # complex trace points

    def final_state(self, zeta: Tuple[int, ...] = ()) -> DriftState:
        return DriftState(
            float(self.times[-1]),
            float(self.driving[-1]),
            tuple(float(x) for x in self.tracked[-1]),
            self.labels,
            zeta,
            self.status,
            self.swallowed,
        )

    def rows(self):
        """CSV rows: t, a1, the tracked points and, when present, the curve samples."""
        for i, t in enumerate(self.times):
            row = {"t": float(t), "a1": float(self.driving[i])}
            row.update({label: float(x) for label, x in zip(self.labels, self.tracked[i])})
            if self.curve is not None and i < len(self.curve):
                row["x"] = float(self.curve[i].real)
                row["y"] = float(self.curve[i].imag)
            yield row
