"""Spin-crossing predictions for four marked points with +/-/+/free type boundary conditions."""

from typing import Optional, Sequence, Tuple

import logging
import math

from src.continuum.bc import cross_ratio
from src.continuum.maps import RectangleMap
from src.crossing.gfunction import GFunction, make_g
from src.models.enums import GKind

logger = logging.getLogger(__name__)


def _counterclockwise(points: Sequence[float]) -> bool:
    """True when the points follow the real line (infinity last) up to a cyclic shift."""
    keys = [math.inf if math.isinf(x) else x for x in points]
    descents = sum(keys[i] > keys[(i + 1) % len(keys)] for i in range(len(keys)))
    return descents == 1 and len(set(keys)) == len(keys)


def _real(x: complex) -> float:
    if isinstance(x, complex):
        if x.imag:
            raise ValueError(f"half-plane marked points must be real, got {x}")
        return x.real
    return float(x)


def crossing_lambda(a1: float, a2: float, b1: float, b2: float) -> float:
    """(a1 - a2)(b1 - b2) / ((a1 - b2)(b1 - a2)) for the counterclockwise order b2, a2, a1, b1."""
    if not _counterclockwise((b2, a2, a1, b1)):
        raise ValueError(f"marked points must be in counterclockwise order b2, a2, a1, b1; got {(b2, a2, a1, b1)}")
    lam = cross_ratio(a1, a2, b1, b2)
    if not 0.0 < lam < 1.0:
        raise ValueError(f"cross-ratio {lam} outside (0, 1)")
    return lam


def spin_crossing_prediction(
    a1: complex,
    a2: complex,
    b1: complex,
    b2: complex,
    kind: GKind = "pmpf",
    rectangle: Optional[float] = None,
    g: Optional[GFunction] = None,
) -> Tuple[float, float]:
    """(plus-crossing, minus-crossing) probabilities, (1 - G(lambda), G(lambda)).

    Points are real half-plane points, or boundary points of the rectangle
    [0, rectangle] x [0, 1] when its length is given.
    """
    if rectangle is not None:
        rect = RectangleMap(rectangle)
        a1, a2, b1, b2 = (rect.boundary(complex(z)) for z in (a1, a2, b1, b2))
    lam = crossing_lambda(*(_real(x) for x in (a1, a2, b1, b2)))
    g = g or make_g(kind)
    value = g(lam)
    logger.debug("Spin crossing", extra={"kind": kind, "lambda": lam, "G": value})
    return 1.0 - value, value
