"""
The continuum observable f = P(z) / (prod sqrt((z - b_{2i-1})(z - b_{2i})) prod (z - a_i)).

P has degree k + m - 1 and is fixed by three families of linear conditions:
no regular part at each a_i, the end-coefficient ratio -zeta_i on the free
arcs i < k, and the normalization at b_2k. When b_2k is infinite the
problem is solved in the frame w = -1/(z - p), p to the left of all points,
and pulled back by f(z) = -f_w(w) / (z - p).
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import cmath
import logging
import math

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate, linalg

from src.continuum.bc import ContinuumBC
from src.errors import EvaluationError, SingularSystemError

logger = logging.getLogger(__name__)

REPRESENTATION = "shifted-monomial"
MAX_CONDITION = 1e13


@dataclass(frozen=True)
class SolvingFrame:
    """Finite boundary conditions the linear system is assembled in.

    pole is None when bc had no point at infinity; otherwise the frame is
    the image under w = -1/(z - pole).
    """

    bc: ContinuumBC
    pole: Optional[float]
    center: float
    width: float

    def to_frame(self, z: complex) -> complex:
        return z if self.pole is None else -1.0 / (z - self.pole)


@dataclass(frozen=True)
class ContinuumObservable:
    """Solved observable: coefficients of P in powers of t = (w - center) / width."""

    bc: ContinuumBC
    poly_coeffs: Tuple[float, ...]
    frame: SolvingFrame
    condition_number: float
    representation: str = REPRESENTATION

    def __call__(self, z: complex) -> complex:
        return eval_f(self, z)

    def polynomial(self, w: complex) -> complex:
        """P at a point of the solving frame."""
        t = (w - self.frame.center) / self.frame.width
        return complex(npoly.polyval(t, self.poly_coeffs))


def solving_frame(bc: ContinuumBC) -> SolvingFrame:
    points = bc.finite_points
    if not bc.at_infinity:
        lo, hi = min(points), max(points)
        return SolvingFrame(bc, None, (lo + hi) / 2, max(hi - lo, 1e-300))
    pole = min(points) - 1.0 - (max(points) - min(points))

    def image(x: float) -> float:
        return 0.0 if math.isinf(x) else -1.0 / (x - pole)

    finite = ContinuumBC(a=tuple(image(x) for x in bc.a), b=tuple(image(x) for x in bc.b), zeta=bc.zeta)
    images = finite.finite_points
    lo, hi = min(images), max(images)
    return SolvingFrame(finite, pole, (lo + hi) / 2, hi - lo)


def _real_root(x: float, lo: float, hi: float) -> float:
    """sqrt(x - lo) sqrt(x - hi) (principal branches) at a real x off [lo, hi]."""
    value = math.sqrt((x - lo) * (x - hi))
    return value if x > hi else -value


def _denominator_without_arc(bc: ContinuumBC, x: float, arc: Optional[int] = None, skip_a: Optional[int] = None) -> float:
    value = 1.0
    for j in range(bc.k):
        if j != arc:
            value *= _real_root(x, bc.b[2 * j], bc.b[2 * j + 1])
    for l, a in enumerate(bc.a):
        if l != skip_a:
            value *= x - a
    return value


def _basis(frame: SolvingFrame, n: int, x: float) -> Tuple[np.ndarray, np.ndarray]:
    """Values and z-derivatives of t^0..t^{n-1} at x."""
    t = (x - frame.center) / frame.width
    powers = np.array([t ** j for j in range(n)])
    derivative = np.array([j * t ** (j - 1) if j else 0.0 for j in range(n)]) / frame.width
    return powers, derivative


def assemble_system(frame: SolvingFrame) -> Tuple[np.ndarray, np.ndarray]:
    """Rows: one per a_i, one per free arc i < k, then the normalization."""
    bc = frame.bc
    n = bc.k + bc.m
    rows: List[np.ndarray] = []
    rhs: List[float] = []

    for i, a in enumerate(bc.a):
        value, derivative = _basis(frame, n, a)
        log_derivative = sum(0.5 / (a - b) for b in bc.b)
        log_derivative += sum(1.0 / (a - other) for l, other in enumerate(bc.a) if l != i)
        rows.append(derivative - log_derivative * value)
        rhs.append(0.0)

    for i in range(bc.k - 1):
        start, end = bc.b[2 * i], bc.b[2 * i + 1]
        at_end = _basis(frame, n, end)[0] / _denominator_without_arc(bc, end, arc=i)
        at_start = _basis(frame, n, start)[0] / _denominator_without_arc(bc, start, arc=i)
        rows.append(at_end + bc.zeta[i] * at_start)
        rhs.append(0.0)

    last, partner = bc.b[-1], bc.b[-2]
    scale = math.sqrt(math.pi) / (math.sqrt(last - partner) * _denominator_without_arc(bc, last, arc=bc.k - 1))
    rows.append(scale * _basis(frame, n, last)[0])
    rhs.append(1.0)
    return np.array(rows), np.array(rhs)


def solve_observable(bc: ContinuumBC) -> ContinuumObservable:
    """Solve for P.

    Raises:
        SingularSystemError: the system is numerically singular (invalid bc)
    """
    frame = solving_frame(bc)
    matrix, rhs = assemble_system(frame)
    condition = float(np.linalg.cond(matrix))
    if not math.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularSystemError(condition)
    coeffs = linalg.solve(matrix, rhs)
    logger.debug("Solved continuum observable", extra={"k": bc.k, "m": bc.m, "condition": condition})
    return ContinuumObservable(bc, tuple(float(c) for c in coeffs), frame, condition)


def condition_residuals(obs: ContinuumObservable) -> np.ndarray:
    """Residuals of every defining condition for the stored coefficients."""
    matrix, rhs = assemble_system(obs.frame)
    return matrix @ np.array(obs.poly_coeffs) - rhs


def _upper(z: complex) -> complex:
    return complex(z.real, abs(z.imag))


def _f_in_frame(obs: ContinuumObservable, w: complex) -> complex:
    bc = obs.frame.bc
    w = _upper(w)
    denominator = 1.0 + 0.0j
    for j in range(bc.k):
        denominator *= cmath.sqrt(w - bc.b[2 * j]) * cmath.sqrt(w - bc.b[2 * j + 1])
    for a in bc.a:
        denominator *= w - a
    return obs.polynomial(w) / denominator


def eval_f(obs: ContinuumObservable, z: complex) -> complex:
    """f at z in the closed upper half-plane; real z means the boundary value from above.

    Raises:
        EvaluationError: z below the real axis, or at a marked point
    """
    z = complex(z)
    bc = obs.bc
    tiny = 1e-14 * bc.scale
    if z.imag < -tiny:
        raise EvaluationError(f"z = {z} is not in the closed upper half-plane")
    if abs(z.imag) <= tiny and any(abs(z.real - x) <= tiny for x in bc.finite_points):
        raise EvaluationError(f"z = {z} is a marked point")
    z = _upper(z)
    pole = obs.frame.pole
    if pole is None:
        return _f_in_frame(obs, z)
    return -_f_in_frame(obs, obs.frame.to_frame(z)) / (z - pole)


def residue_R(obs: ContinuumObservable | ContinuumBC) -> float:
    """Residue of f at a_1 (real, nonzero for valid boundary conditions)."""
    if isinstance(obs, ContinuumBC):
        obs = solve_observable(obs)
    if obs.bc.m == 0:
        raise EvaluationError("residue needs m >= 1")
    frame = obs.frame
    a = frame.bc.a[0]
    residue = obs.polynomial(a).real / _denominator_without_arc(frame.bc, a, skip_a=0)
    if frame.pole is None:
        return residue
    return -residue * (obs.bc.a[0] - frame.pole)


def boundary_coefficient(obs: ContinuumObservable, j: int) -> float:
    """lim |sqrt(pi (z - b_j)) f(z)| at the free-arc endpoint b_j (1-based); 1 at b_2k."""
    bc = obs.frame.bc
    if not 1 <= j <= 2 * bc.k:
        raise ValueError(f"j must index a free-arc endpoint 1..{2 * bc.k}, got {j}")
    if j == 2 * bc.k:
        return 1.0
    arc = (j - 1) // 2
    x = bc.b[j - 1]
    partner = bc.b[2 * arc + 1] if j % 2 else bc.b[2 * arc]
    denominator = math.sqrt(abs(x - partner)) * abs(_denominator_without_arc(bc, x, arc=arc))
    return math.sqrt(math.pi) * abs(obs.polynomial(x)) / denominator


def closed_basis_coefficients(obs: ContinuumObservable) -> Tuple[float, ...]:
    """p_1..p_k with P = sum p_i prod_{j != i} (z - b_{2j-1}) (m = 0, finite points)."""
    bc = obs.bc
    if bc.m or bc.at_infinity:
        raise ValueError("the product basis needs m = 0 and finite points")
    starts = bc.b[0::2]
    values = []
    for i, start in enumerate(starts):
        product = math.prod(start - other for l, other in enumerate(starts) if l != i)
        values.append(obs.polynomial(start).real / product)
    return tuple(values)


def h_function(obs: ContinuumObservable, w: complex, base: Optional[float] = None) -> float:
    """Im of the integral of f^2 along the segment from a point on a fixed arc to w.

    The default base lies left of every marked point, so h vanishes on the
    plus/minus arcs.
    """
    points = obs.bc.finite_points
    if base is None:
        base = min(points) - obs.bc.scale
    w = complex(w)
    step = w - base

    def integrand(t: float, part: str) -> float:
        value = eval_f(obs, base + t * step) ** 2 * step
        return value.imag if part == "imag" else value.real

    value, _ = integrate.quad(integrand, 0.0, 1.0, args=("imag",), limit=200, epsabs=1e-12, epsrel=1e-10)
    return value


def evaluate_grid(
    obs: ContinuumObservable,
    xs: Sequence[float],
    ys: Sequence[float],
    with_h: bool = True,
) -> List[Dict[str, float]]:
    """Rows (x, y, re, im, h) over the product grid; points at marked points are skipped."""
    rows = []
    for y in ys:
        for x in xs:
            z = complex(x, y)
            try:
                value = eval_f(obs, z)
            except EvaluationError:
                continue
            row = {"x": float(x), "y": float(y), "re": value.real, "im": value.imag}
            if with_h:
                row["h"] = h_function(obs, z) if y > 0 else float("nan")
            rows.append(row)
    logger.info("Evaluated grid", extra={"points": len(rows)})
    return rows
