"""
The integrated pair (H_vertex, H_face), a discrete Im of the integral of F^2.

H_vertex(v) - H_face(u) = sqrt2 delta |F(q)|^2 for every corner q joining
vertex v to face u. Values are propagated along a BFS tree from a base
outer face next to a plus/minus edge and every other relation is then used
as a closure check.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import logging
import math

import networkx as nx

from src.config import BOUNDARY_LAPLACIAN_WEIGHT, get_tolerance
from src.errors import SiteError, ToleranceViolation
from src.lattice.boundary import BoundaryConditionsDiscrete
from src.lattice.domain import face_edges
from src.lattice.geometry import Face, Site, Vertex, canonical_edge, face_at, face_vertices, faces_of_edge, step
from src.models.results import CheckReport
from src.observables.checks import _report
from src.observables.observable import DiscreteObservable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HPair:
    """H on vertices and faces, with the base face where H_face = 0."""

    h_vertices: Dict[Vertex, float]
    h_faces: Dict[Face, float]
    base_face: Face
    closure_defect: float
    free_constants: Tuple[float, ...] = field(default_factory=tuple)

    def shifted(self, constant: float) -> "HPair":
        return HPair(
            h_vertices={v: h + constant for v, h in self.h_vertices.items()},
            h_faces={u: h + constant for u, h in self.h_faces.items()},
            base_face=self.base_face,
            closure_defect=self.closure_defect,
            free_constants=tuple(c + constant for c in self.free_constants),
        )


def _fixed_edges(bc: BoundaryConditionsDiscrete) -> List[Tuple[Vertex, int]]:
    return [(v, d) for arc in bc.arcs if not arc.is_free for (v, d) in arc.edges]


def _kept_outer_faces(bc: BoundaryConditionsDiscrete) -> set:
    domain = bc.domain
    fixed_vertices = set()
    for (v, d) in _fixed_edges(bc):
        fixed_vertices.update({v, step(v, d)})
    candidates = {face_at(v, d) for v in domain.vertices for d in (1, 3, 5, 7)} - domain.faces
    kept = set()
    for u in candidates:
        if any(e in bc.free_edges for e in face_edges(u)):
            continue
        inside = [v for v in face_vertices(u) if v in domain.vertices]
        if all(v in fixed_vertices for v in inside):
            kept.add(u)
    return kept


def free_arc_vertices(bc: BoundaryConditionsDiscrete) -> List[List[Vertex]]:
    """Vertices of each free arc (free-arc numbering), endpoints included."""
    arcs = []
    for arc in bc.free_arcs:
        vertices = [v for (v, _) in arc.edges] + [arc.end]
        arcs.append(vertices)
    return arcs


def build_H(obs: DiscreteObservable, tol: Optional[float] = None, strict: bool = True) -> HPair:
    """Integrate |F|^2 over corners into (H_vertex, H_face).

    The observable is normalized first when k >= 1; with no free arc the raw
    values are integrated.

    Raises:
        ToleranceViolation: closure defect above tolerance (strict mode)
    """
    tol = get_tolerance() if tol is None else tol
    bc = obs.bc
    domain = bc.domain
    if obs.normalization != "normalized" and bc.k:
        obs = obs.normalized()
    faces = set(domain.faces) | _kept_outer_faces(bc)
    scale = math.sqrt(2.0) * domain.mesh

    graph = nx.Graph()
    relations = []
    for q, value in obs.values.items():
        if q.kind != "corner":
            continue
        u = face_at(q.vertex, q.d)
        if u not in faces:
            continue
        rhs = scale * abs(value) ** 2
        relations.append((q.vertex, u, rhs, q))
        graph.add_edge(("v", q.vertex), ("f", u), rhs=rhs)

    base = None
    for (v, d) in _fixed_edges(bc):
        right = face_at(v, d - 1)
        if right in faces and graph.has_node(("f", right)):
            base = right
            break
    if base is None:
        raise SiteError("no outer face next to a plus/minus edge carries corner values")

    values: Dict[Tuple[str, tuple], float] = {("f", base): 0.0}
    for parent, child in nx.bfs_edges(graph, ("f", base)):
        rhs = graph.edges[parent, child]["rhs"]
        # H_vertex = H_face + rhs
        values[child] = values[parent] + rhs if child[0] == "v" else values[parent] - rhs

    defect = 0.0
    worst = None
    for v, u, rhs, q in relations:
        if ("v", v) not in values or ("f", u) not in values:
            continue
        residual = abs(values[("v", v)] - values[("f", u)] - rhs)
        if residual > defect:
            defect, worst = residual, q
    if strict and defect > tol:
        raise ToleranceViolation("H closure", defect, tol, site=str(worst))

    h_vertices = {key[1]: h for key, h in values.items() if key[0] == "v"}
    h_faces = {key[1]: h for key, h in values.items() if key[0] == "f"}
    constants = tuple(
        sum(h_vertices[v] for v in arc) / len(arc) for arc in free_arc_vertices(bc)
    )
    logger.info("Built H", extra={"closure_defect": defect, "faces": len(h_faces)})
    return HPair(h_vertices, h_faces, base, defect, constants)


def boundary_values_check(H: HPair, bc: BoundaryConditionsDiscrete, tol: Optional[float] = None) -> List[CheckReport]:
    """H_face = 0 on outer faces along plus/minus edges; H_vertex constant on free arcs, 1 on the last."""
    tol = get_tolerance() if tol is None else tol
    outer = []
    for (v, d) in _fixed_edges(bc):
        u = face_at(v, d - 1)
        if u in H.h_faces:
            outer.append((f"face{u}", abs(H.h_faces[u])))
    free = []
    arcs = free_arc_vertices(bc)
    for i, arc in enumerate(arcs):
        target = 1.0 if i == len(arcs) - 1 else H.free_constants[i]
        for v in arc:
            free.append((f"arc{i + 1}:{v}", abs(H.h_vertices[v] - target)))
    return [_report("H on plus/minus faces", outer, tol), _report("H on free arcs", free, tol)]


def laplacian_check(H: HPair, bc: BoundaryConditionsDiscrete, tol: Optional[float] = None) -> List[CheckReport]:
    """Sub/superharmonicity with the boundary-modified Laplacian.

    Delta H_vertex >= -tol away from a_1..a_m and free arcs (outer vertices
    count as 0 with weight c); Delta H_face <= tol at all inside faces
    (free edges lead to C_i with weight c).
    """
    tol = get_tolerance() if tol is None else tol
    c = BOUNDARY_LAPLACIAN_WEIGHT
    domain = bc.domain
    skip = set(bc.marked_a[: bc.m])
    for (v, d) in bc.free_edges:
        skip.update({v, step(v, d)})

    vertex_defects = []
    for v in sorted(domain.vertices - skip):
        h = H.h_vertices[v]
        total = 0.0
        for d in (0, 2, 4, 6):
            if domain.has_edge(v, d):
                total += H.h_vertices[step(v, d)] - h
            else:
                total += c * (0.0 - h)
        vertex_defects.append((f"vertex{v}", max(0.0, -total)))

    face_defects = []
    for u in sorted(domain.faces):
        h = H.h_faces[u]
        total = 0.0
        for edge in face_edges(u):
            left, right = faces_of_edge(*edge)
            other = right if left == u else left
            if other in domain.faces:
                total += H.h_faces[other] - h
            elif edge in bc.free_edges:
                total += c * (H.free_constants[bc.free_arc_of_edge[edge]] - h)
            else:
                total += H.h_faces.get(other, 0.0) - h
        face_defects.append((f"face{u}", max(0.0, total)))

    return [
        _report("Laplacian H_vertex >= 0", vertex_defects, tol),
        _report("Laplacian H_face <= 0", face_defects, tol),
    ]


def plaquette_check(obs: DiscreteObservable, tol: Optional[float] = None) -> CheckReport:
    """|F(q1)|^2 + |F(q3)|^2 = |F(e)|^2 = |F(q2)|^2 + |F(q4)|^2 at interior edges."""
    domain = obs.bc.domain
    tol = (get_tolerance() if tol is None else tol) * max(obs.max_abs, 1e-300) ** 2
    defects = []
    for edge in domain.interior_edges():
        v, d = edge
        w = step(v, d)
        z = Site("mid", v[0], v[1], d)
        pairs = ((Site.corner(v, d - 1), Site.corner(w, d + 3)), (Site.corner(v, d + 1), Site.corner(w, d + 5)))
        if z not in obs.values or any(q not in obs.values for pair in pairs for q in pair):
            continue
        fe = abs(obs.values[z]) ** 2
        for a, b in pairs:
            defects.append((str(z), abs(abs(obs.values[a]) ** 2 + abs(obs.values[b]) ** 2 - fe)))
    return _report("plaquette closure", defects, tol)


def appendix_identity_check(H: HPair, obs: DiscreteObservable, tol: Optional[float] = None) -> CheckReport:
    """(sqrt2 delta)^-1 Delta H_face(u) = -2 |F(c1) + i F(c2) - F(c3) - i F(c4)|^2 at interior faces.

    Corners c1..c4 run clockwise from the lower-right corner of u.
    """
    tol = get_tolerance() if tol is None else tol
    if obs.normalization != "normalized" and obs.bc.k:
        obs = obs.normalized()
    domain = obs.bc.domain
    scale = math.sqrt(2.0) * domain.mesh
    defects = []
    for u in sorted(domain.faces):
        neighbours = []
        for edge in face_edges(u):
            left, right = faces_of_edge(*edge)
            neighbours.append(right if left == u else left)
        if any(n not in domain.faces for n in neighbours):
            continue
        i, j = u
        c1, c2, c3, c4 = (
            obs.values[Site.corner((i + 1, j), 3)],
            obs.values[Site.corner((i, j), 1)],
            obs.values[Site.corner((i, j + 1), 7)],
            obs.values[Site.corner((i + 1, j + 1), 5)],
        )
        laplacian = sum(H.h_faces[n] - H.h_faces[u] for n in neighbours)
        expected = -2.0 * abs(c1 + 1j * c2 - c3 - 1j * c4) ** 2
        defects.append((f"face{u}", abs(laplacian / scale - expected) / max(1.0, abs(expected))))
    return _report("appendix face Laplacian identity", defects, tol)
