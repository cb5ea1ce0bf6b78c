"""
Closed forms: Cramer's rule over Cauchy principal minors for m = 0, the
explicit residue for m = 1, and the drift of the driving process.
"""

from itertools import combinations, product
from typing import Callable, Optional, Sequence, Tuple

import logging
import math

import numpy as np

from src.config import DEFAULT_DRIFT_STEP
from src.continuum.bc import ContinuumBC, chi, psi
from src.continuum.observable import residue_R, solve_observable
from src.errors import EvaluationError

logger = logging.getLogger(__name__)


def cauchy_det(x: Sequence[float], y: Sequence[float]) -> float:
    """det [1 / (x_i - y_j)] in product form (1 for the empty matrix)."""
    n = len(x)
    value = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            value *= (x[j] - x[i]) * (y[i] - y[j])
    for i in range(n):
        for j in range(n):
            value /= x[i] - y[j]
    return value


def closed_form_m0(bc: ContinuumBC) -> Tuple[float, ...]:
    """p_1..p_k of P = sum p_i prod_{j != i} (z - b_{2j-1}), normalized to p_k = 1.

    Cramer's rule on A = D + C, expanded over sign vectors s (s_i = -1 marks
    a diagonal entry of D): every term is a product of diagonal entries and a
    principal minor of a Cauchy matrix, which has a product form. The
    right-hand side column is minus the Cauchy column with b_{2r-1} replaced
    by b_{2k-1}.
    """
    if bc.m or bc.at_infinity:
        raise ValueError("closed_form_m0 needs m = 0 and finite points")
    k = bc.k
    if k == 1:
        return (1.0,)
    b = bc.b
    ends = [b[2 * i + 1] for i in range(k - 1)]
    starts = [b[2 * i] for i in range(k - 1)]
    diagonal = [
        bc.zeta[i] / (b[2 * i + 1] - b[2 * i]) * math.prod(math.sqrt(chi(bc, i + 1, j + 1)) for j in range(k) if j != i)
        for i in range(k - 1)
    ]

    def expansion(columns: Sequence[float], skip: Optional[int] = None) -> float:
        total = 0.0
        indices = [i for i in range(k - 1) if i != skip]
        for size in range(len(indices) + 1):
            for subset in combinations(indices, size):
                rest = [i for i in range(k - 1) if i not in subset]
                minor = cauchy_det([ends[i] for i in rest], [columns[i] for i in rest])
                total += math.prod(diagonal[i] for i in subset) * minor
        return total

    det_a = expansion(starts)
    coefficients = []
    for r in range(k - 1):
        substituted = list(starts)
        substituted[r] = b[2 * k - 2]
        coefficients.append(-expansion(substituted, skip=r) / det_a)
    return tuple(coefficients) + (1.0,)


def residue_closed_form(bc: ContinuumBC) -> float:
    """Residue at a_1 for m = 1, up to a factor independent of a_1.

    R = (a_1 - b_2k) prod ((a_1 - b_{2i-1}) / (a_1 - b_{2i}))^(1/2) / S with
    S = sum over s in {+-1}^k, s_k = -1, of prod_{zeta_i = -1} s_i
    prod_{i<j} chi_ij^(s_i s_j / 4) prod_{i<k} psi_ki(a_1)^((1 - s_i) / 2).
    With b_2k at infinity the factor (a_1 - b_2k)^(1/2) is dropped.
    """
    if bc.m != 1:
        raise ValueError(f"residue_closed_form needs m = 1, got m = {bc.m}")
    k = bc.k
    a1 = bc.a[0]
    b = bc.b
    zeta = bc.zeta_all
    prefactor = 1.0
    for i in range(k):
        lo, hi = b[2 * i], b[2 * i + 1]
        if math.isinf(hi):
            prefactor *= math.sqrt(abs(a1 - lo))
        else:
            prefactor *= math.sqrt((a1 - lo) / (a1 - hi))
    if not bc.at_infinity:
        prefactor *= a1 - b[-1]

    chis = {(i, j): chi(bc, i + 1, j + 1) for i in range(k) for j in range(i + 1, k)}
    psis = [psi(bc, k, i + 1, a1) for i in range(k - 1)]
    total = 0.0
    for head in product((1, -1), repeat=k - 1):
        s = head + (-1,)
        term = math.prod(s[i] for i in range(k) if zeta[i] == -1)
        term *= math.prod(value ** (s[i] * s[j] / 4) for (i, j), value in chis.items())
        term *= math.prod(psis[i] for i in range(k - 1) if s[i] == -1)
        total += term
    if total == 0:
        raise EvaluationError("residue sum vanishes; boundary conditions are degenerate")
    return prefactor / total


def _log_residue(bc: ContinuumBC, a1: float, residue: Callable[[ContinuumBC], float]) -> float:
    return math.log(abs(residue(bc.moved(a=(a1,) + bc.a[1:]))))


def drift(
    bc: ContinuumBC,
    step: Optional[float] = None,
    residue: Optional[Callable[[ContinuumBC], float]] = None,
) -> float:
    """D = -3 d/da_1 log |R| by central differences with one Richardson step.

    Raises:
        EvaluationError: a_1 too close to another marked point for any usable step
    """
    if bc.m < 1:
        raise EvaluationError("drift needs m >= 1")
    residue = residue or (lambda c: residue_R(solve_observable(c)))
    a1 = bc.a[0]
    h = (DEFAULT_DRIFT_STEP if step is None else step) * bc.scale
    gap = min(abs(a1 - x) for x in bc.finite_points if x != a1)
    h = min(h, gap / 8)
    if h < 1e-13 * bc.scale:
        raise EvaluationError(f"drift step underflow: a_1 is {gap:.3e} from another marked point")

    def central(width: float) -> float:
        return (_log_residue(bc, a1 + width, residue) - _log_residue(bc, a1 - width, residue)) / (2 * width)

    derivative = (4 * central(h / 2) - central(h)) / 3
    return -3.0 * derivative


def three_point_drift(a1: float, b1: float, b2: float) -> float:
    """+/-/free: -3/2 / (a_1 - b_1) - 3/2 / (a_1 - b_2)."""
    return -1.5 / (a1 - b1) - 1.5 / (a1 - b2)


def four_point_drift(a1: float, a2: float, b1: float) -> float:
    """+/-/+/free with b_2 at infinity."""
    return -1.5 / (a1 - b1) - 3.0 / (a1 - a2) + 3.0 / (a1 + a2 - 2 * b1)


def five_point_drift(a1: float, b1: float, b2: float, b3: float) -> float:
    """+/-/free/+/free with b_4 at infinity."""
    shift = b3 + np.sqrt((b3 - b2) * (b3 - b1))
    return -1.5 / (a1 - b1) - 1.5 / (a1 - b2) - 1.5 / (a1 - b3) + 3.0 / (a1 - shift)
