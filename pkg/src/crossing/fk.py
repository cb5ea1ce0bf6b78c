"""
Continuum FK-Ising crossings from boundary coefficients of m = 0 observables.

Wired arcs [x_{2i-1}, x_{2i}] alternate with free arcs; w = -1/(z - p) with
p inside the first wired arc turns the free arcs into [b_{2i-1}, b_{2i}]
with b = (w(x_2), ..., w(x_2k), w(x_1)) and zeta_i = sigma_i sigma_{i+1}.
Flipping sigma_1..sigma_i multiplies Z_sigma by the coefficient of the
sigma observable at b_{2i}.
"""

from itertools import product
from typing import Dict, Literal, Optional, Sequence, Tuple

import logging
import math

from src.continuum.bc import ContinuumBC
from src.continuum.maps import MobiusMap, RectangleMap
from src.continuum.observable import boundary_coefficient, solve_observable
from src.models.crossing import CrossingQuery, FKCrossingResult

logger = logging.getLogger(__name__)

Signs = Tuple[int, ...]


def sign_key(sigma: Signs) -> str:
    return "".join("+" if s > 0 else "-" for s in sigma)


def relabel(points: Sequence[float], sigma: Signs) -> ContinuumBC:
    """Boundary conditions whose observable carries the ratios around sigma."""
    pole = (points[0] + points[1]) / 2
    phi = MobiusMap.conjugation(pole)
    b = tuple(phi.boundary(x) for x in points[1:]) + (phi.boundary(points[0]),)
    zeta = tuple(sigma[i] * sigma[i + 1] for i in range(len(sigma) - 1))
    return ContinuumBC(a=(), b=b, zeta=zeta)


class RatioTable:
    """Z_sigma / Z_{+...+} for the sign vectors with sigma_k = +1, with one solved observable per visited sigma."""

    def __init__(self, points: Sequence[float]):
        self.points = tuple(points)
        self.k = len(points) // 2
        self._coefficients: Dict[Signs, Tuple[float, ...]] = {}

    def coefficients(self, sigma: Signs) -> Tuple[float, ...]:
        """Coefficients at b_2, b_4, ..., b_{2k-2} of the sigma observable."""
        if sigma not in self._coefficients:
            obs = solve_observable(relabel(self.points, sigma))
            self._coefficients[sigma] = tuple(boundary_coefficient(obs, 2 * i) for i in range(1, self.k))
        return self._coefficients[sigma]

    def ratio(self, sigma: Signs, order: Literal["asc", "desc"] = "asc") -> float:
        """Telescope from +...+ to sigma by flipping the prefixes at its sign changes."""
        if len(sigma) != self.k or sigma[-1] != 1:
            raise ValueError(f"sigma must have {self.k} entries ending in +1, got {sigma}")
        changes = [i for i in range(1, self.k) if sigma[i - 1] != sigma[i]]
        if order == "desc":
            changes.reverse()
        current = (1,) * self.k
        value = 1.0
        for i in changes:
            value *= self.coefficients(current)[i - 1]
            current = tuple(-s for s in current[:i]) + current[i:]
        return value

    @property
    def solved(self) -> int:
        return len(self._coefficients)


def fk_crossing_continuum(
    query: CrossingQuery, order: Literal["asc", "desc"] = "asc", table: Optional[RatioTable] = None
) -> FKCrossingResult:
    """E[sigma_i1 ... sigma_ir] with sigma_i1 = +1 under the restricted sums Z_sigma.

    For r = 2 this is the probability that wired arcs i1 and i2 lie in the
    same cluster; for r = 1 it is 1.
    """
    k = query.k
    table = table or RatioTable(query.points)
    anchor = query.subset[0] - 1
    ratios: Dict[str, float] = {}
    weights: Dict[str, float] = {}
    correlation = 0.0
    for head in product((1, -1), repeat=k - 1):
        tau = head + (1,)
        z = table.ratio(tau, order)
        ratios[sign_key(tau)] = z
        sigma = tuple(s * tau[anchor] for s in tau)
        weights[sign_key(sigma)] = z
        correlation += z * math.prod(sigma[i - 1] for i in query.subset)
    total = sum(weights.values())
    weights = {key: value / total for key, value in weights.items()}
    value = correlation / total
    logger.info(
        "FK crossing",
        extra={"k": k, "subset": list(query.subset), "value": value, "observables": table.solved},
    )
    return FKCrossingResult(value=value, ratios=ratios, weights=weights)


def _free_arc_pole(lo: float, hi: float) -> Optional[float]:
    """A point on the counterclockwise arc from lo to hi; None when it passes through infinity."""
    if math.isinf(lo):
        return hi - 1.0
    if math.isinf(hi):
        return lo + 1.0
    if lo < hi:
        return (lo + hi) / 2
    return None


def half_plane_points(images: Sequence[float]) -> Tuple[float, ...]:
    """Increasing real points from boundary images listed counterclockwise from x_1.

    The images may wrap through infinity; a Mobius map sends a point of the
    last free arc [x_2k, x_1] to infinity when the list does not already
    increase.
    """
    images = tuple(images)
    pole = _free_arc_pole(images[-1], images[0])
    if pole is not None:
        phi = MobiusMap.conjugation(pole)
        images = tuple(phi.boundary(x) for x in images)
    if any(not math.isfinite(x) for x in images) or any(x >= y for x, y in zip(images, images[1:])):
        raise ValueError(f"boundary points are not in counterclockwise order: {images}")
    return images


def rectangle_points(width: int, height: int, marks: Sequence[complex]) -> Tuple[float, ...]:
    """Half-plane points for lattice marks on the boundary of a width x height rectangle."""
    rect = RectangleMap(width / height)
    return half_plane_points([rect.boundary(complex(z) / height) for z in marks])
