"""
Spin-crossing functions G(lambda) = int_0^lambda g / int_0^1 g for the three
four-point boundary conditions.

g(s) = s^beta (1 - s)^alpha h(s) with h smooth on [0, 1], integrated by
Gauss-Jacobi rules whose weights carry the endpoint powers.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import logging
import math

import numpy as np
from scipy import integrate, special

from src.config import get_jacobi_nodes
from src.models.enums import GKind

logger = logging.getLogger(__name__)

# kind -> (beta: power of s, alpha: power of 1 - s, smooth factor)
INTEGRANDS: Dict[str, Tuple[float, float, Callable[[np.ndarray], np.ndarray]]] = {
    "pmpf": (2.0 / 3.0, -1.0 / 3.0, lambda s: (2.0 - s) ** -2),
    "pmpm": (2.0 / 3.0, 2.0 / 3.0, lambda s: 1.0 / (1.0 - s + s * s)),
    "pmff": (-1.0 / 3.0, -1.0 / 3.0, lambda s: np.ones_like(s)),
}


@lru_cache(maxsize=32)
def _rule(n: int, alpha: float, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes in [0, 1] and weights for int_0^1 u^beta (1 - u)^alpha F(u) du."""
    x, w = special.roots_jacobi(n, alpha, beta)
    return (1.0 + x) / 2.0, w / 2.0 ** (alpha + beta + 1.0)


@dataclass(frozen=True)
class GFunction:
    """Normalized primitive of s^beta (1 - s)^alpha h(s) on [0, 1]."""

    kind: GKind
    beta: float
    alpha: float
    smooth: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    nodes: int
    normalization: float

    def __call__(self, lam: float) -> float:
        return G_eval(self, lam)

    def integrand(self, s: float) -> float:
        return s ** self.beta * (1.0 - s) ** self.alpha * float(self.smooth(np.asarray(s)))


def make_g(kind: GKind, nodes: Optional[int] = None) -> GFunction:
    if kind not in INTEGRANDS:
        raise ValueError(f"unknown G kind {kind!r}; expected one of {sorted(INTEGRANDS)}")
    nodes = get_jacobi_nodes() if nodes is None else nodes
    beta, alpha, smooth = INTEGRANDS[kind]
    u, w = _rule(nodes, alpha, beta)
    normalization = float(np.dot(w, smooth(u)))
    return GFunction(kind, beta, alpha, smooth, nodes, normalization)


def _partial(g: GFunction, lam: float) -> float:
    """int_0^lam g for lam <= 1/2 (the factor (1 - lam u)^alpha stays smooth)."""
    u, w = _rule(g.nodes, 0.0, g.beta)
    s = lam * u
    return lam ** (g.beta + 1.0) * float(np.dot(w, (1.0 - s) ** g.alpha * g.smooth(s)))


def _tail(g: GFunction, lam: float) -> float:
    """int_lam^1 g for lam >= 1/2."""
    v, w = _rule(g.nodes, 0.0, g.alpha)
    gap = 1.0 - lam
    s = 1.0 - gap * v
    return gap ** (g.alpha + 1.0) * float(np.dot(w, s ** g.beta * g.smooth(s)))


def G_eval(g: GFunction, lam: float) -> float:
    """G(lam) for lam in [0, 1]."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if lam == 0.0:
        return 0.0
    if lam == 1.0:
        return 1.0
    if lam <= 0.5:
        return _partial(g, lam) / g.normalization
    return 1.0 - _tail(g, lam) / g.normalization


def G_quad(g: GFunction, lam: float) -> float:
    """Independent adaptive quadrature of the same ratio (reference values)."""
    total, _ = integrate.quad(g.integrand, 0.0, 1.0, limit=400, epsabs=1e-14, epsrel=1e-12)
    if lam <= 0.0:
        return 0.0
    part, _ = integrate.quad(g.integrand, 0.0, lam, limit=400, epsabs=1e-14, epsrel=1e-12)
    return part / total
