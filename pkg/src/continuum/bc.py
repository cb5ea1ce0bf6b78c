"""
Boundary conditions in the upper half-plane and the cross-ratios built from them.

Free arcs are [b_{2i-1}, b_{2i}]; everything else is plus or minus. The
sign changes a_1..a_m sit off the free arcs. Only b_{2k} may be infinite.
"""

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Tuple

import math

from src.errors import BoundaryConditionError


@dataclass(frozen=True)
class ContinuumBC:
    """Marked points a_1..a_m, free-arc endpoints b_1 < ... < b_2k and signs zeta_1..zeta_{k-1}."""

    a: Tuple[float, ...]
    b: Tuple[float, ...]
    zeta: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        object.__setattr__(self, "zeta", tuple(int(z) for z in self.zeta))
        a, b = self.a, self.b
        if len(b) < 2 or len(b) % 2:
            raise BoundaryConditionError(f"need an even number >= 2 of free-arc endpoints, got {len(b)}")
        if any(math.isinf(x) for x in b[:-1]) or any(not math.isfinite(x) for x in a):
            raise BoundaryConditionError("only b_2k may be at infinity")
        if any(math.isnan(x) for x in b):
            raise BoundaryConditionError("free-arc endpoints must be real")
        if any(x >= y for x, y in zip(b, b[1:])):
            raise BoundaryConditionError(f"free-arc endpoints must increase strictly, got {list(b)}")
        if len(self.zeta) != self.k - 1 or any(z not in (-1, 1) for z in self.zeta):
            raise BoundaryConditionError(f"need {self.k - 1} signs zeta in {{-1, +1}}, got {list(self.zeta)}")
        if len(set(a)) != len(a) or set(a) & set(b):
            raise BoundaryConditionError("marked points must be distinct")
        for i, x in enumerate(a):
            for j in range(self.k):
                if b[2 * j] <= x <= b[2 * j + 1]:
                    raise BoundaryConditionError(f"a_{i + 1} = {x} lies on the free arc {j + 1}")

    @property
    def k(self) -> int:
        return len(self.b) // 2

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def at_infinity(self) -> bool:
        return math.isinf(self.b[-1])

    @property
    def zeta_all(self) -> Tuple[int, ...]:
        """zeta_1..zeta_k with zeta_k = -zeta_1...zeta_{k-1} (-1)^m."""
        product = math.prod(self.zeta)
        return self.zeta + (-product * (-1) ** self.m,)

    @property
    def finite_points(self) -> Tuple[float, ...]:
        return tuple(x for x in self.a + self.b if math.isfinite(x))

    @property
    def scale(self) -> float:
        points = self.finite_points
        return max(max(points) - min(points), 1.0)

    def moved(self, a: Optional[Sequence[float]] = None, b: Optional[Sequence[float]] = None) -> "ContinuumBC":
        return replace(self, a=tuple(self.a if a is None else a), b=tuple(self.b if b is None else b))

    @classmethod
    def from_changes(cls, a: Sequence[float], b: Sequence[float], changes: Iterable[float]) -> "ContinuumBC":
        """Signs from the free-arc endpoints that are spin changes.

        changes lists a_{m+1}..a_{m+s-1}: the endpoints (other than b_2k)
        where the spin assigned to a free arc differs from its neighbour.
        """
        changes = set(float(x) for x in changes)
        zeta = tuple(
            (-1) ** len({float(b[2 * i]), float(b[2 * i + 1])} & changes) for i in range(len(b) // 2 - 1)
        )
        return cls(a=tuple(a), b=tuple(b), zeta=zeta)


def _check_pair(bc: ContinuumBC, i: int, j: int) -> None:
    if not (1 <= i <= bc.k and 1 <= j <= bc.k) or i == j:
        raise ValueError(f"need 1 <= i != j <= k={bc.k}, got ({i}, {j})")


def cross_ratio(x1: float, x2: float, x3: float, x4: float) -> float:
    """[x1; x2; x3; x4] = (x1 - x2)(x3 - x4) / ((x1 - x4)(x3 - x2)), with limits when one point is infinite."""
    points = (x1, x2, x3, x4)
    if len(set(points)) < 4:
        raise ValueError(f"coincident points in cross-ratio {points}")
    # factors containing the point at infinity cancel in pairs
    numerator = [(x1, x2), (x3, x4)]
    denominator = [(x1, x4), (x3, x2)]
    value = 1.0
    for p, q in numerator:
        if math.isfinite(p) and math.isfinite(q):
            value *= p - q
    for p, q in denominator:
        if math.isfinite(p) and math.isfinite(q):
            value /= p - q
    return value


def chi(bc: ContinuumBC, i: int, j: int) -> float:
    """Cross-ratio of the endpoints of free arcs i and j (1-based)."""
    _check_pair(bc, i, j)
    b = bc.b
    return cross_ratio(b[2 * i - 2], b[2 * j - 2], b[2 * i - 1], b[2 * j - 1])


def psi(bc: ContinuumBC, i: int, j: int, x: float) -> float:
    """chi_ij with x substituted for b_{2i-1}, divided by chi_ij."""
    _check_pair(bc, i, j)
    b = bc.b
    lo, hi, start = b[2 * j - 2], b[2 * j - 1], b[2 * i - 2]
    if x in (lo, hi):
        raise ValueError(f"x = {x} coincides with an endpoint of free arc {j}")
    if math.isinf(hi):
        return (x - lo) / (start - lo)
    return (x - lo) * (start - hi) / ((x - hi) * (start - lo))
