"""
Winding of the source-to-target curve in an edge configuration.

At every vertex the curve leaves along the first unused included strand
counterclockwise from the strand it arrived on ("turn right"), or clockwise
for the "turn left" resolution. Stubs at paired source normals are joined
by outer arcs running counterclockwise outside the domain.
"""

from typing import Dict, List, Optional, Tuple

import math

from src.errors import SiteError
from src.lattice.boundary import BoundaryConditionsDiscrete
from src.lattice.geometry import Site, Strand, Vertex, canonical_edge, step, turn
from src.lowtemp.configs import ConfigSpace, EdgeConfig
from src.models.enums import InterfaceSide, TurnRule

END = -1


class CurveTracer:
    """Strand tables for fast traversal of many masks of one ConfigSpace.

    Args:
        space: Configuration space whose sources are the observable sources
            followed by the target site
        bc: Boundary conditions (for unwrapped normal directions and the pairing)
        start: The reference normal n_{a_1}
        target: The evaluation site
    """

    def __init__(self, space: ConfigSpace, bc: BoundaryConditionsDiscrete, start: Site, target: Site):
        self.space = space
        self.start = start
        self.target = target
        self.slots: Dict[Vertex, List[int]] = {}
        self.partner: List[int] = [END] * len(space.strands)
        self.jump: Dict[int, Tuple[int, int]] = {}  # stub -> (partner stub, extra rotation)

        for i, (v, d) in enumerate(space.strands):
            self.slots.setdefault(v, [END] * 8)[d % 8] = i
        for i in range(space.n_domain):
            v, d = space.strands[i]
            self.partner[i] = space.index[(step(v, d), (d + 4) % 8)]

        self.target_strand: Optional[int] = None
        self.target_edge: Optional[Strand] = None
        if target.kind in ("corner", "normal"):
            self.target_strand = space.index[target.strand]
        elif target.kind == "mid":
            self.target_edge = target.strand
        else:
            raise SiteError(f"cannot trace a curve to {target}")

        domain = bc.domain
        base = domain.normal_of(start).u
        offset = {}
        for site in bc.flip_normals:
            u = domain.normal_of(site).u
            offset[site] = u - base if u >= base else u - base + 8
        for a, b in bc.outer_pairing():
            for j, k in ((a, b), (b, a)):
                rotation = offset[k] - offset[j]
                if rotation < 0:
                    rotation += 8
                self.jump[space.index[j.strand]] = (space.index[k.strand], 4 + rotation)
        self.start_index = space.index[start.strand]

    def trace(self, mask: int, rule: TurnRule = "right") -> int:
        """Net tangent rotation in units of pi/4 from n_{a_1} to the target."""
        used = {self.start_index}
        v, back = self.start.vertex, self.start.d
        heading = (back + 4) % 8
        winding = 0
        sweep = 1 if rule == "right" else -1
        while True:
            slots = self.slots[v]
            chosen = END
            for t in range(1, 8):
                d = (back + sweep * t) % 8
                i = slots[d]
                if i != END and (mask >> i) & 1 and i not in used:
                    chosen, direction = i, d
                    break
            if chosen == END:
                raise SiteError(f"configuration is not admissible: curve stops at {v}")
            winding += turn(heading, direction)
            used.add(chosen)
            heading = direction
            if chosen == self.target_strand:
                return winding
            if chosen < self.space.n_domain:
                mate = self.partner[chosen]
                if (mask >> mate) & 1:
                    used.add(mate)
                    v = step(v, direction)
                    back = (direction + 4) % 8
                    continue
                if self.target_edge == canonical_edge(v, direction):
                    return winding
                raise SiteError(f"configuration is not admissible: dangling half-edge at {v}")
            if chosen not in self.jump:
                raise SiteError(f"configuration is not admissible: unexpected stub at {v}")
            mate, rotation = self.jump[chosen]
            used.add(mate)
            winding += rotation
            v, back = self.space.strands[mate]
            heading = (back + 4) % 8


def winding(
    config: EdgeConfig,
    bc: BoundaryConditionsDiscrete,
    end: Site,
    rule: TurnRule = "right",
) -> float:
    """Tangent rotation (radians) of the curve from n_{a_1} to end.

    config must belong to Conf(domain, n_{a_1}, ..., n_{a_{m+s-1}}, end).
    """
    space = ConfigSpace(bc.domain, tuple(bc.sources) + (end,), bc.free_edges)
    if not config.is_admissible(bc.domain):
        raise SiteError("configuration is not admissible for its sources")
    tracer = CurveTracer(space, bc, bc.sources[0], end)
    return tracer.trace(space.to_mask(config), rule) * math.pi / 4.0


def interface(config: EdgeConfig, bc: BoundaryConditionsDiscrete, side: InterfaceSide = "rightmost") -> List[Vertex]:
    """Lattice vertices of the domain wall leaving a_1, resolved rightmost or leftmost.

    config is a spin domain-wall configuration (vertex sources at the sign
    changes). The walk enters at a_1 from its outer normal and stops at the
    next odd-degree vertex.
    """
    if side not in ("rightmost", "leftmost"):
        raise ValueError(f"side must be 'rightmost' or 'leftmost', got {side!r}")
    domain = bc.domain
    strands = {s for s in config.strands if s[1] % 2 == 0 and domain.has_edge(*s)}
    ends = {s.vertex for s in config.sources if s.kind == "vertex"}
    start = bc.normals_a[0]
    v, back = start.vertex, start.d
    sweep = 1 if side == "rightmost" else -1
    used = set()
    path = [v]
    while True:
        chosen = None
        for t in range(1, 8):
            d = (back + sweep * t) % 8
            if d % 2 == 0 and (v, d) in strands and (v, d) not in used:
                chosen = d
                break
        if chosen is None:
            return path
        w = step(v, chosen)
        used.update({(v, chosen), (w, (chosen + 4) % 8)})
        v, back = w, (chosen + 4) % 8
        path.append(v)
        if v in ends:
            return path
