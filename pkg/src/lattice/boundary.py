"""
Boundary conditions on a decorated domain.

Arcs are given counterclockwise, the first one starting at the reference
point a_1. Free arcs are numbered counterclockwise from a_1, except that a
free arc starting at a_1 is numbered last. The last free arc always carries the
spin that makes its far endpoint b_2k a sign change; a requested spin of the
other sign is accepted and relabeled. The outside spin of a free edge enters
no weight.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import logging

from src.errors import BoundaryConditionError
from src.lattice.domain import DecoratedDomain
from src.lattice.geometry import Site, Strand, Vertex, canonical_edge, eta_of, step
from src.models.domain import ArcSpec
from src.models.enums import ArcLabel

logger = logging.getLogger(__name__)

FIXED_SPIN = {"plus": 1, "minus": -1}


@dataclass(frozen=True)
class Arc:
    """A boundary arc and the counterclockwise boundary edges it covers."""

    label: ArcLabel
    start: Vertex
    end: Vertex
    spin: int
    edges: Tuple[Strand, ...]  # oriented (v, d_out)

    @property
    def is_free(self) -> bool:
        return self.label == "free"


@dataclass(frozen=True)
class BoundaryConditionsDiscrete:
    """Arcs, marked points and the chosen normals at the marked points."""

    domain: DecoratedDomain
    arcs: Tuple[Arc, ...]
    marked_a: Tuple[Vertex, ...]
    marked_b: Tuple[Vertex, ...]
    m: int
    s: int
    normals_a: Tuple[Site, ...]
    normals_b: Tuple[Site, ...]
    free_edges: frozenset = field(default_factory=frozenset)
    edge_spin: Dict[Strand, int] = field(default_factory=dict, repr=False, compare=False)
    free_arc_of_edge: Dict[Strand, int] = field(default_factory=dict, repr=False, compare=False)
    relabeled: bool = False  # the requested spin of the last free arc was flipped

    @property
    def k(self) -> int:
        return len(self.marked_b) // 2

    @property
    def assigned_spins(self) -> Tuple[int, ...]:
        """Spins of the free arcs in free-arc numbering."""
        return tuple(arc.spin for arc in self.free_arcs)

    @property
    def free_arcs(self) -> List[Arc]:
        free = [arc for arc in self.arcs if arc.is_free]
        if free and self.arcs[0].is_free:
            free = free[1:] + free[:1]
        return free

    @property
    def sources(self) -> Tuple[Site, ...]:
        """Source normals n_{a_1} .. n_{a_{m+s-1}} of the observable."""
        return self.normals_a[:-1]

    @property
    def flip_normals(self) -> Tuple[Site, ...]:
        """n_{a_2} .. n_{a_{m+s-1}}: eta changes sign after each of them."""
        return self.sources[1:]

    def outer_pairing(self) -> List[Tuple[Site, Site]]:
        """Nested non-crossing pairing of the flip normals in boundary order."""
        order = sorted(self.flip_normals, key=self._ccw_offset)
        return [(order[i], order[-1 - i]) for i in range(len(order) // 2)]

    def zeta(self) -> Tuple[int, ...]:
        """Sign data zeta_1..zeta_k of the continuum problem."""
        inner = set(self.marked_a[self.m:-1]) if self.k else set()
        zetas = []
        for i in range(self.k - 1):
            hits = len({self.marked_b[2 * i], self.marked_b[2 * i + 1]} & inner)
            zetas.append((-1) ** hits)
        product = 1
        for z in zetas:
            product *= z
        zetas.append(-product * (-1) ** self.m)
        return tuple(zetas)

    def is_free_edge(self, edge: Strand) -> bool:
        return canonical_edge(*edge) in self.free_edges

    def _ccw_offset(self, site: Site) -> int:
        start = self.domain.normal_of(self.normals_a[0]).index
        return (self.domain.normal_of(site).index - start) % len(self.domain.normals)


def _walk_arc(domain: DecoratedDomain, start: Vertex, end: Vertex, whole: bool) -> Tuple[Strand, ...]:
    cycle = domain.boundary
    i = domain.boundary_position(start)
    j = domain.boundary_position(end)
    length = (j - i) % len(cycle)
    if whole:
        length = len(cycle)
    return tuple((cycle[(i + t) % len(cycle)].vertex, cycle[(i + t) % len(cycle)].d_out) for t in range(length))


def _first_normal(domain: DecoratedDomain, v: Vertex, parity: int, last: bool = False) -> Optional[Site]:
    found = [n.site for n in domain.normals_at(v) if n.site.d % 2 == parity]
    if not found:
        return None
    return found[-1] if last else found[0]


def boundary_arcs(domain: DecoratedDomain, marks: Sequence[ArcSpec | dict]) -> BoundaryConditionsDiscrete:
    """Partition the boundary into labelled arcs and locate the marked points.

    Raises:
        BoundaryConditionError: marks off the boundary or out of cyclic
            order, zero-length arcs, adjacent free arcs, or a marked point
            without an outer edge normal
    """
    specs = [m if isinstance(m, ArcSpec) else ArcSpec.model_validate(m) for m in marks]
    if not specs:
        raise BoundaryConditionError("at least one arc is required")
    for spec in specs:
        for v in (spec.start, spec.end):
            if v not in domain._boundary_index:
                raise BoundaryConditionError(f"mark {v} is not a boundary vertex")

    n = len(specs)
    if n == 1:
        if specs[0].start != specs[0].end:
            raise BoundaryConditionError("a single arc must close up on itself")
        if specs[0].label == "free":
            raise BoundaryConditionError("a single free arc carries no sign change")
    else:
        for i, spec in enumerate(specs):
            following = specs[(i + 1) % n]
            if spec.end != following.start:
                raise BoundaryConditionError(
                    f"arc {i} ends at {spec.end} but arc {(i + 1) % n} starts at {following.start}"
                )
            if spec.start == spec.end:
                kind = "free arc" if spec.label == "free" else "arc"
                raise BoundaryConditionError(f"{kind} {i} has zero length at {spec.start}")
        total = sum(
            (domain.boundary_position(s.end) - domain.boundary_position(s.start)) % len(domain.boundary)
            for s in specs
        )
        if total != len(domain.boundary):
            raise BoundaryConditionError("marks are not in counterclockwise cyclic order")
        for i, spec in enumerate(specs):
            if spec.label == "free" and specs[(i + 1) % n].label == "free":
                raise BoundaryConditionError(f"free arcs {i} and {(i + 1) % n} are adjacent")

    spins = []
    for spec in specs:
        spins.append(FIXED_SPIN[spec.label] if spec.label != "free" else (spec.spin or 1))

    relabeled = False
    free_idx = [i for i, spec in enumerate(specs) if spec.label == "free"]
    if free_idx and free_idx[0] == 0:
        free_idx = free_idx[1:] + free_idx[:1]
    if free_idx:
        last = free_idx[-1]
        forced = -spins[(last + 1) % n]
        if specs[last].spin is not None and specs[last].spin != forced:
            relabeled = True
            logger.info(
                "Relabeled last free arc",
                extra={"arc": last, "requested": specs[last].spin, "spin": forced},
            )
        spins[last] = forced

    arcs = tuple(
        Arc(spec.label, spec.start, spec.end, spins[i], _walk_arc(domain, spec.start, spec.end, n == 1))
        for i, spec in enumerate(specs)
    )

    # sign changes at junctions; junction i sits at arcs[i].start
    changes = []
    for i in range(n if n > 1 else 0):
        before, after = arcs[i - 1], arcs[i]
        if before.spin != after.spin:
            changes.append((i, before.is_free or after.is_free))
    if changes and changes[0][0] != 0:
        raise BoundaryConditionError("the first arc must start at a sign change (a_1)")

    marked_b = tuple(v for i in free_idx for v in (arcs[i].start, arcs[i].end))
    b_last = marked_b[-1] if marked_b else None
    pm = [arcs[i].start for i, is_free in changes if not is_free]
    fr = [arcs[i].start for i, is_free in changes if is_free and arcs[i].start != b_last]
    if b_last is not None:
        fr.append(b_last)
    if b_last is not None and b_last == arcs[0].start:
        raise BoundaryConditionError("a_1 cannot coincide with b_2k; start the arcs at another sign change")
    if pm and changes[0][1]:
        raise BoundaryConditionError("a_1 must separate a plus arc from a minus arc when m > 0")
    marked_a = tuple(pm + fr)

    normals_a = []
    for v in marked_a:
        site = _first_normal(domain, v, 0)
        if site is None:
            raise BoundaryConditionError(f"marked point {v} has no outer edge normal")
        normals_a.append(site)
    normals_b = []
    for j, v in enumerate(marked_b):
        normals_b.append(_first_normal(domain, v, 1, last=(j % 2 == 1)))

    edge_spin: Dict[Strand, int] = {}
    free_arc_of_edge: Dict[Strand, int] = {}
    free_order = {arc_index: number for number, arc_index in enumerate(free_idx)}
    for i, arc in enumerate(arcs):
        for (v, d) in arc.edges:
            key = canonical_edge(v, d)
            edge_spin[key] = arc.spin
            if arc.is_free:
                free_arc_of_edge[key] = free_order[i]

    bc = BoundaryConditionsDiscrete(
        domain=domain,
        arcs=arcs,
        marked_a=marked_a,
        marked_b=marked_b,
        m=len(pm),
        s=len(fr),
        normals_a=tuple(normals_a),
        normals_b=tuple(normals_b),
        free_edges=frozenset(free_arc_of_edge),
        edge_spin=edge_spin,
        free_arc_of_edge=free_arc_of_edge,
        relabeled=relabeled,
    )
    if (bc.m + bc.s) % 2:
        raise BoundaryConditionError(f"odd number of sign changes (m={bc.m}, s={bc.s})")
    logger.info("Boundary conditions", extra={"m": bc.m, "s": bc.s, "k": bc.k})
    return bc


@dataclass(frozen=True)
class EtaAssignment:
    """Sign-resolved eta at every outer normal, transported from a start normal."""

    values: Dict[Site, complex]
    start: Site
    loop_value: complex  # eta at the start normal after one full loop

    def __getitem__(self, site: Site) -> complex:
        return self.values[site]


def eta_along_boundary(
    bc: BoundaryConditionsDiscrete,
    start_normal: Optional[Site] = None,
    direction: str = "ccw",
) -> EtaAssignment:
    """Transport eta continuously along the boundary from start_normal.

    The sign flips after each flip normal n_{a_2}..n_{a_{m+s-1}} is passed.
    Transporting clockwise gives -1 times the same field away from start_normal.
    """
    domain = bc.domain
    normals = domain.normals
    start_normal = start_normal or bc.normals_a[0]
    i0 = domain.normal_of(start_normal).index
    flips = set(bc.flip_normals)
    size = len(normals)
    sign_step = 1 if direction == "ccw" else -1

    values: Dict[Site, complex] = {}
    u = normals[i0].u
    base_u = u
    sign = 1
    for t in range(size):
        idx = (i0 + sign_step * t) % size
        normal = normals[idx]
        if t > 0:
            prev = normals[(idx - sign_step) % size]
            delta = normal.u - prev.u
            if sign_step == 1 and idx == 0:
                delta += 8
            if sign_step == -1 and idx == size - 1:
                delta -= 8
            u += delta
            if sign_step == 1 and prev.site in flips:
                sign = -sign
            if sign_step == -1 and normal.site in flips:
                sign = -sign
        values[normal.site] = sign * eta_of(u)
    loop_value = eta_of(base_u + 8 * sign_step)
    return EtaAssignment(values=values, start=start_normal, loop_value=loop_value)
