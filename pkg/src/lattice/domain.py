"""
Decorated discrete domains.

A domain is a simply connected polyomino of unit faces on the mesh-delta
square lattice, decorated with midedges, four corners per vertex and the
counterclockwise boundary cycle with its discrete outer normals.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

import logging

import networkx as nx

from src.config import CORNER_WEIGHT, SQRT_X
from src.errors import DomainError
from src.lattice.geometry import (
    Face,
    Site,
    Strand,
    Vertex,
    canonical_edge,
    edge_strands,
    face_at,
    face_vertices,
    faces_of_edge,
    step,
    turn,
)
from src.models.domain import DomainSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryVertex:
    """Boundary vertex with the travel directions of the counterclockwise cycle."""

    vertex: Vertex
    d_in: int
    d_out: int

    def normal_directions(self) -> List[int]:
        """Outer directions, in the order the boundary traversal passes them."""
        count = (self.d_out - 1 - (self.d_in + 5)) % 8 + 1
        return [(self.d_in + 5 + j) % 8 for j in range(count)]


@dataclass(frozen=True)
class OuterNormal:
    """Discrete outer normal (edge or corner) with its unwrapped direction."""

    site: Site
    u: int  # unwrapped outward direction, units of pi/4
    index: int  # position along the boundary cycle


@dataclass(frozen=True)
class DecoratedDomain:
    """Faces of a mesh-delta polyomino plus the decoration used by the observables."""

    mesh: float
    faces: FrozenSet[Face]
    vertices: FrozenSet[Vertex]
    edges: FrozenSet[Strand]
    boundary: Tuple[BoundaryVertex, ...]
    normals: Tuple[OuterNormal, ...]
    _normal_index: Dict[Site, int] = field(default_factory=dict, repr=False, compare=False)
    _boundary_index: Dict[Vertex, int] = field(default_factory=dict, repr=False, compare=False)

    # Incidence

    def has_edge(self, v: Vertex, d: int) -> bool:
        return d % 2 == 0 and canonical_edge(v, d) in self.edges

    def is_boundary_edge(self, edge: Strand) -> bool:
        v, d = edge
        left, right = faces_of_edge(v, d)
        return (left in self.faces) != (right in self.faces)

    def interior_edges(self) -> List[Strand]:
        return sorted(e for e in self.edges if not self.is_boundary_edge(e))

    @property
    def midedges(self) -> List[Site]:
        return [Site("mid", v[0], v[1], d) for (v, d) in sorted(self.edges)]

    @property
    def corners(self) -> List[Site]:
        """All four corners of every vertex."""
        return [Site.corner(v, d) for v in sorted(self.vertices) for d in (1, 3, 5, 7)]

    @property
    def inner_corners(self) -> List[Site]:
        return [q for q in self.corners if face_at(q.vertex, q.d) in self.faces]

    @property
    def corner_edge_weight(self) -> float:
        return CORNER_WEIGHT

    @property
    def half_edge_weight(self) -> float:
        return SQRT_X

    @property
    def boundary_vertices(self) -> List[Vertex]:
        return [b.vertex for b in self.boundary]

    def boundary_position(self, v: Vertex) -> int:
        if v not in self._boundary_index:
            raise DomainError(f"{v} is not a boundary vertex")
        return self._boundary_index[v]

    def boundary_edges(self) -> List[Strand]:
        """Oriented boundary edges (v, d_out), domain on the left, counterclockwise."""
        return [(b.vertex, b.d_out) for b in self.boundary]

    def normal_of(self, site: Site) -> OuterNormal:
        return self.normals[self._normal_index[site]]

    def is_outer_normal(self, site: Site) -> bool:
        return site in self._normal_index

    def normals_at(self, v: Vertex) -> List[OuterNormal]:
        return [n for n in self.normals if n.site.vertex == v]

    def is_inner_corner(self, site: Site) -> bool:
        return site.kind == "corner" and face_at(site.vertex, site.d) in self.faces

    def contains_site(self, site: Site) -> bool:
        if site.kind == "vertex":
            return site.vertex in self.vertices
        if site.kind == "mid":
            return site.strand in self.edges
        if site.kind == "corner":
            return site.vertex in self.vertices and site.d % 2 == 1
        return self.is_outer_normal(site)

    def strand_weight(self, strand: Strand) -> float:
        """Weight of one half-edge or corner edge (free arcs are handled by the caller)."""
        return CORNER_WEIGHT if strand[1] % 2 else SQRT_X

    def __repr__(self) -> str:
        return (
            f"DecoratedDomain(faces={len(self.faces)}, edges={len(self.edges)}, "
            f"vertices={len(self.vertices)}, mesh={self.mesh})"
        )


def _check_simply_connected(faces: FrozenSet[Face]) -> None:
    graph = nx.Graph()
    graph.add_nodes_from(faces)
    for (i, j) in faces:
        for nb in ((i + 1, j), (i, j + 1)):
            if nb in faces:
                graph.add_edge((i, j), nb)
    if not nx.is_connected(graph):
        components = sorted(nx.connected_components(graph), key=len)
        raise DomainError("face set is not edge-connected", cell=min(components[0]))

    xs = [f[0] for f in faces]
    ys = [f[1] for f in faces]
    box = nx.grid_2d_graph(range(min(xs) - 1, max(xs) + 2), range(min(ys) - 1, max(ys) + 2))
    box.remove_nodes_from(faces)
    if not nx.is_connected(box):
        outside = nx.node_connected_component(box, (min(xs) - 1, min(ys) - 1))
        hole = min(c for c in box.nodes if c not in outside)
        raise DomainError("face set is not simply connected", cell=hole)


def _boundary_cycle(faces: FrozenSet[Face], edges: Iterable[Strand]) -> Tuple[BoundaryVertex, ...]:
    out_dir: Dict[Vertex, int] = {}
    for (v, d) in edges:
        left, right = faces_of_edge(v, d)
        if (left in faces) == (right in faces):
            continue
        start, direction = (v, d) if left in faces else (step(v, d), (d + 4) % 8)
        if start in out_dir:
            raise DomainError(f"boundary pinches at vertex {start}")
        out_dir[start] = direction

    start = min(out_dir, key=lambda v: (v[1], v[0]))
    cycle: List[Tuple[Vertex, int]] = []
    v = start
    while True:
        cycle.append((v, out_dir[v]))
        v = step(v, out_dir[v])
        if v == start:
            break
    if len(cycle) != len(out_dir):
        raise DomainError("boundary is not a single cycle", cell=None)
    return tuple(
        BoundaryVertex(v, cycle[i - 1][1], d_out) for i, (v, d_out) in enumerate(cycle)
    )


def _outer_normals(boundary: Tuple[BoundaryVertex, ...]) -> Tuple[OuterNormal, ...]:
    normals: List[OuterNormal] = []
    u = None
    prev = None
    for bv in boundary:
        for d in bv.normal_directions():
            u = d if u is None else u + turn(prev, d)
            prev = d
            kind = "corner" if d % 2 else "normal"
            normals.append(OuterNormal(Site(kind, bv.vertex[0], bv.vertex[1], d), u, len(normals)))
    return tuple(normals)


def build_domain(spec: DomainSpec | Iterable[Face], mesh: float = 1.0) -> DecoratedDomain:
    """Build a decorated domain from a domain spec or a plain face list.

    Raises:
        DomainError: face set disconnected, with holes, or pinched; the
            offending cell is reported
    """
    if isinstance(spec, DomainSpec):
        cells = spec.cells()
        mesh = spec.mesh
    else:
        cells = [tuple(f) for f in spec]
    if mesh <= 0:
        raise DomainError(f"mesh must be positive, got {mesh}")
    faces = frozenset(cells)
    if not faces:
        raise DomainError("empty face set")
    _check_simply_connected(faces)

    vertices = frozenset(v for f in faces for v in face_vertices(f))
    edges = set()
    for f in faces:
        a, b, c, d = face_vertices(f)
        edges.update({(a, 0), (b, 2), (d, 0), (a, 2)})
    edges = frozenset(edges)

    boundary = _boundary_cycle(faces, edges)
    normals = _outer_normals(boundary)
    domain = DecoratedDomain(
        mesh=mesh,
        faces=faces,
        vertices=vertices,
        edges=edges,
        boundary=boundary,
        normals=normals,
        _normal_index={n.site: n.index for n in normals},
        _boundary_index={b.vertex: i for i, b in enumerate(boundary)},
    )
    logger.info(
        "Built domain",
        extra={"faces": len(faces), "edges": len(edges), "boundary": len(boundary)},
    )
    return domain


def face_edges(f: Face) -> List[Strand]:
    """Canonical edges around a face: bottom, right, top, left."""
    a, b, c, d = face_vertices(f)
    return [(a, 0), (b, 2), (d, 0), (a, 2)]


def face_strands(f: Face) -> List[Strand]:
    """The eight half-edges around a face."""
    return [s for e in face_edges(f) for s in edge_strands(e)]
