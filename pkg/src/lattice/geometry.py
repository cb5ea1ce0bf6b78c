"""
Square-lattice geometry shared by every discrete module.

Directions are integers mod 8 in units of pi/4 (0 = east, 2 = north, ...).
Even directions point along lattice edges, odd ones along diagonals towards
corners and faces.
"""

from dataclasses import dataclass
from typing import Tuple

import cmath
import math
import re

from src.models.enums import SiteKind

Vertex = Tuple[int, int]
Face = Tuple[int, int]
Strand = Tuple[Vertex, int]  # half-edge or corner edge leaving a vertex

SITE_PATTERN = re.compile(r"(vertex|mid|corner|normal)\((-?\d+),(-?\d+)(?:;(-?\d+))?\)")

STEPS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


def step(v: Vertex, d: int) -> Vertex:
    """Neighbour of v along edge direction d (even) or diagonal d (odd)."""
    dx, dy = STEPS[d % 8]
    return (v[0] + dx, v[1] + dy)


def turn(d_in: int, d_out: int) -> int:
    """Tangent rotation (units of pi/4) when heading d_in turns to d_out."""
    return ((d_out - d_in + 4) % 8) - 4


def face_at(v: Vertex, d: int) -> Face:
    """Face lying in diagonal direction d (odd) of vertex v."""
    x, y = v
    return {1: (x, y), 3: (x - 1, y), 5: (x - 1, y - 1), 7: (x, y - 1)}[d % 8]


def faces_of_edge(v: Vertex, d: int) -> Tuple[Face, Face]:
    """The two faces adjacent to the edge leaving v in direction d (left, right)."""
    return face_at(v, d + 1), face_at(v, d - 1)


def face_vertices(f: Face) -> Tuple[Vertex, Vertex, Vertex, Vertex]:
    """Vertices of a face, counterclockwise from the lower-left one."""
    i, j = f
    return ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))


def canonical_edge(v: Vertex, d: int) -> Strand:
    """Edge key: (lower-left endpoint, 0 or 2)."""
    d %= 8
    if d in (0, 2):
        return (v, d)
    return (step(v, d), d - 4)


def edge_strands(edge: Strand) -> Tuple[Strand, Strand]:
    """The two half-edges of a lattice edge."""
    v, d = edge
    return (v, d), (step(v, d), (d + 4) % 8)


def eta_of(u: int) -> complex:
    """eta for an outward direction u (unwrapped, units of pi/4): eta^2 = (i e)^-1."""
    return cmath.exp(-1j * math.pi * (u + 2) / 8.0)


@dataclass(frozen=True, order=True)
class Site:
    """A decorated-graph vertex.

    kind: vertex, mid (canonical edge key), corner (vertex + odd direction)
          or normal (vertex + direction of a non-domain edge)
    """

    kind: SiteKind
    x: int
    y: int
    d: int = 0

    @property
    def vertex(self) -> Vertex:
        return (self.x, self.y)

    @property
    def strand(self) -> Strand:
        return ((self.x, self.y), self.d)

    def position(self, mesh: float = 1.0) -> complex:
        """Planar position (mesh units)."""
        base = complex(self.x, self.y)
        if self.kind == "vertex":
            return mesh * base
        dx, dy = STEPS[self.d % 8]
        scale = 0.25 if self.kind == "corner" else 0.5
        return mesh * (base + scale * complex(dx, dy))

    def __str__(self) -> str:
        return f"{self.kind}({self.x},{self.y};{self.d})"

    @classmethod
    def parse(cls, text: str) -> "Site":
        """Inverse of str(): "mid(1,0;0)"; the direction may be omitted for vertices."""
        match = SITE_PATTERN.fullmatch(text.replace(" ", ""))
        if not match:
            raise ValueError(f"cannot parse site {text!r}; expected kind(x,y;d)")
        kind, x, y, d = match.groups()
        return cls(kind, int(x), int(y), int(d or 0))

    @classmethod
    def vertex_site(cls, v: Vertex) -> "Site":
        return cls("vertex", v[0], v[1], 0)

    @classmethod
    def mid(cls, v: Vertex, d: int) -> "Site":
        (x, y), dd = canonical_edge(v, d)
        return cls("mid", x, y, dd)

    @classmethod
    def corner(cls, v: Vertex, d: int) -> "Site":
        if d % 2 == 0:
            raise ValueError(f"corner direction must be odd, got {d}")
        return cls("corner", v[0], v[1], d % 8)

    @classmethod
    def normal(cls, v: Vertex, d: int) -> "Site":
        if d % 2:
            raise ValueError(f"normal edge direction must be even, got {d}")
        return cls("normal", v[0], v[1], d % 8)
