"""
Conformal maps onto the upper half-plane and covariant transport of f.

f_{Omega,B}(z) = phi'(z)^(1/2) f_{H,phi(B)}(phi(z)).
"""

from dataclasses import dataclass
from typing import Protocol, Sequence

import cmath
import math

import mpmath
from scipy import integrate

from src.continuum.bc import ContinuumBC
from src.continuum.observable import ContinuumObservable, eval_f, solve_observable
from src.errors import EvaluationError


class ConformalMap(Protocol):
    def __call__(self, z: complex) -> complex: ...

    def sqrt_derivative(self, z: complex) -> complex: ...

    def contains(self, z: complex) -> bool: ...


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d) with real coefficients and a d - b c = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det <= 0:
            raise ValueError(f"Mobius map must preserve the upper half-plane (ad - bc = {det})")
        scale = math.sqrt(det)
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) / scale)

    @classmethod
    def conjugation(cls, pole: float) -> "MobiusMap":
        """z -> -1 / (z - pole)."""
        return cls(0.0, -1.0, 1.0, -pole)

    def __call__(self, z: complex) -> complex:
        if math.isinf(abs(z)):
            return self.a / self.c if self.c else complex("inf")
        denominator = self.c * z + self.d
        if denominator == 0:
            return complex("inf")
        return (self.a * z + self.b) / denominator

    def boundary(self, x: float) -> float:
        """Image of a real point (inf for the pole)."""
        value = self(x)
        return float("inf") if math.isinf(abs(value)) else value.real

    def sqrt_derivative(self, z: complex) -> complex:
        return 1.0 / (self.c * z + self.d)

    def contains(self, z: complex) -> bool:
        return z.imag >= 0


@dataclass(frozen=True)
class RectangleMap:
    """[0, length] x [0, 1] onto the upper half-plane by a Jacobi sn.

    The bottom midpoint goes to 0, the top midpoint to infinity and the
    corners to +-1, +-1/k.
    """

    length: float

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"rectangle length must be positive, got {self.length}")

    @property
    def parameter(self) -> mpmath.mpf:
        return mpmath.mfrom(q=mpmath.exp(-2 * mpmath.pi / self.length))

    @property
    def stretch(self) -> mpmath.mpf:
        return 2 * mpmath.ellipk(self.parameter) / self.length

    def _argument(self, z: complex):
        return self.stretch * (mpmath.mpc(z) - self.length / 2)

    def __call__(self, z: complex) -> complex:
        return complex(mpmath.ellipfun("sn", self._argument(z), m=self.parameter))

    def boundary(self, z: complex) -> float:
        """Image of a boundary point (inf at the top midpoint)."""
        if abs(complex(z) - complex(self.length / 2, 1.0)) < 1e-12:
            return float("inf")
        try:
            value = self(z)
        except ZeroDivisionError:
            return float("inf")
        return float("inf") if not math.isfinite(abs(value)) or abs(value) > 1e15 else value.real

    def derivative(self, z: complex) -> complex:
        u, m = self._argument(z), self.parameter
        return complex(self.stretch * mpmath.ellipfun("cn", u, m=m) * mpmath.ellipfun("dn", u, m=m))

    def sqrt_derivative(self, z: complex) -> complex:
        return cmath.sqrt(self.derivative(z))

    def contains(self, z: complex) -> bool:
        return 0 <= z.real <= self.length and 0 <= z.imag <= 1


def quadrature_preimage(rect: RectangleMap, zeta: complex) -> complex:
    """Inverse of RectangleMap by Schwarz-Christoffel quadrature along the segment [0, zeta]."""
    k2 = float(rect.parameter)

    def integrand(u: float, part: str) -> float:
        t = zeta * u
        value = zeta / (cmath.sqrt(1 - t * t) * cmath.sqrt(1 - k2 * t * t))
        return value.real if part == "real" else value.imag

    real, _ = integrate.quad(integrand, 0.0, 1.0, args=("real",), epsabs=1e-13, epsrel=1e-12, limit=200)
    imag, _ = integrate.quad(integrand, 0.0, 1.0, args=("imag",), epsabs=1e-13, epsrel=1e-12, limit=200)
    return rect.length / 2 + complex(real, imag) / float(rect.stretch)


def transport(obs: ContinuumObservable, phi: ConformalMap, z: complex) -> complex:
    """f_{Omega,B}(z) for an observable solved on the image boundary conditions phi(B).

    The square root of phi' is the branch the map supplies: 1 / (c z + d) for a
    Mobius map, the principal root for the rectangle (positive on the bottom
    edge). It must be positive at the preimage of b_2k for the normalization
    to carry over.

    Raises:
        EvaluationError: z outside the domain of phi
    """
    if not phi.contains(z):
        raise EvaluationError(f"z = {z} lies outside the domain of the map")
    return phi.sqrt_derivative(z) * eval_f(obs, phi(z))


def image_bc(phi, a: Sequence[float], b: Sequence[float], zeta: Sequence[int]) -> ContinuumBC:
    """Boundary conditions phi(B) from boundary points of the domain."""
    return ContinuumBC(
        a=tuple(phi.boundary(x) for x in a),
        b=tuple(phi.boundary(x) for x in b),
        zeta=tuple(zeta),
    )


def observable_in_domain(phi, a: Sequence[float], b: Sequence[float], zeta: Sequence[int] = ()) -> ContinuumObservable:
    """Solve f_{H, phi(B)} for boundary points given in the domain of phi."""
    return solve_observable(image_bc(phi, a, b, zeta))
