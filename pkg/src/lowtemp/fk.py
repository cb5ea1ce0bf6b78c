"""
FK-Ising crossing probabilities on small domains.

Wired arcs are the non-free arcs of the boundary conditions (their labels
are ignored); wired arc indices are 0-based in counterclockwise order from
arcs[0]. Restricted sums Z_sigma fix the spin of every wired arc.
"""

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import logging
import math

import networkx as nx
import numpy as np

from src.config import CRITICAL_X, get_enum_cap
from src.errors import BoundaryConditionError, EnumerationCapExceeded
from src.lattice.boundary import BoundaryConditionsDiscrete
from src.lattice.geometry import Site, Strand, canonical_edge, faces_of_edge
from src.lowtemp.configs import ConfigSpace

logger = logging.getLogger(__name__)


def wired_arcs(bc: BoundaryConditionsDiscrete) -> List[int]:
    """Indices into bc.arcs of the wired arcs, validating the alternation."""
    arcs = bc.arcs
    wired = [i for i, arc in enumerate(arcs) if not arc.is_free]
    for i, arc in enumerate(arcs):
        if not arc.is_free and not arcs[(i + 1) % len(arcs)].is_free and len(arcs) > 1:
            raise BoundaryConditionError("wired and free arcs must alternate")
    return wired


def _outside_spins(bc: BoundaryConditionsDiscrete, sigma: Sequence[int]) -> Dict[Strand, Optional[int]]:
    """Outside spin per boundary edge: sigma_i on wired arc i, None on free arcs."""
    wired = wired_arcs(bc)
    spin_of_arc = {arc_index: sigma[i] for i, arc_index in enumerate(wired)}
    outside: Dict[Strand, Optional[int]] = {}
    for arc_index, arc in enumerate(bc.arcs):
        for (v, d) in arc.edges:
            outside[canonical_edge(v, d)] = spin_of_arc.get(arc_index)
    return outside


def _sources_for(bc: BoundaryConditionsDiscrete, outside: Dict[Strand, Optional[int]]) -> Tuple[Site, ...]:
    """Sign-change vertices when each free arc copies the spin of the arc before it."""
    spins: List[int] = []
    current = None
    edges = bc.domain.boundary_edges()
    for (v, d) in edges:
        value = outside[canonical_edge(v, d)]
        if value is not None:
            current = value
        spins.append(current)
    first = next(s for s in spins if s is not None)
    spins = [first if s is None else s for s in spins]
    # free arcs before the first wired edge copy the last wired spin
    last = spins[-1]
    for i, (v, d) in enumerate(edges):
        if outside[canonical_edge(v, d)] is not None:
            break
        spins[i] = last
    sources = []
    for i, (v, _) in enumerate(edges):
        if spins[i - 1] != spins[i]:
            sources.append(Site.vertex_site(v))
    return tuple(sorted(sources))


def restricted_z(bc: BoundaryConditionsDiscrete, sigma: Sequence[int], cap: Optional[int] = None) -> float:
    """Z_sigma: spin partition function with wired arc i fixed to sigma[i], free arcs uncoupled."""
    outside = _outside_spins(bc, sigma)
    domain = bc.domain
    if is_rectangle(domain):
        return transfer_matrix_z(domain, outside)
    free = [e for e, value in outside.items() if value is None]
    space = ConfigSpace(domain, _sources_for(bc, outside), free, cap)
    return space.total_weight()


def is_rectangle(domain) -> bool:
    xs = [f[0] for f in domain.faces]
    ys = [f[1] for f in domain.faces]
    width = max(xs) - min(xs) + 1
    height = max(ys) - min(ys) + 1
    return width * height == len(domain.faces)


def transfer_matrix_z(domain, outside: Dict[Strand, Optional[int]], x: float = CRITICAL_X) -> float:
    """Spin partition function of a rectangle by column transfer matrices.

    outside maps each boundary edge to the spin across it, or None for no
    coupling. Columns have 2^height states.
    """
    if not is_rectangle(domain):
        raise ValueError("transfer matrix needs a rectangular domain")
    x0 = min(f[0] for f in domain.faces)
    y0 = min(f[1] for f in domain.faces)
    width = max(f[0] for f in domain.faces) - x0 + 1
    height = max(f[1] for f in domain.faces) - y0 + 1
    states = np.array(list(product((1, -1), repeat=height)), dtype=np.int8)  # row r = column spins

    def boundary_factor(edge: Strand, spins: np.ndarray) -> np.ndarray:
        value = outside.get(edge)
        if value is None:
            return np.ones(len(spins))
        return np.where(spins != value, x, 1.0)

    def column_weight(c: int) -> np.ndarray:
        i = x0 + c
        weight = np.ones(len(states))
        for r in range(height - 1):
            weight *= np.where(states[:, r] != states[:, r + 1], x, 1.0)
        weight *= boundary_factor(((i, y0), 0), states[:, 0])
        weight *= boundary_factor(((i, y0 + height), 0), states[:, height - 1])
        if c == 0:
            for r in range(height):
                weight *= boundary_factor(((x0, y0 + r), 2), states[:, r])
        if c == width - 1:
            for r in range(height):
                weight *= boundary_factor(((x0 + width, y0 + r), 2), states[:, r])
        return weight

    disagree = (states[:, None, :] != states[None, :, :]).sum(axis=2)
    transfer = x ** disagree
    vector = column_weight(0)
    for c in range(1, width):
        vector = (vector @ transfer) * column_weight(c)
    return float(vector.sum())


def fk_crossing_exact(
    bc: BoundaryConditionsDiscrete,
    subset: Sequence[int],
    cap: Optional[int] = None,
) -> float:
    """E[sigma(arc_i1) ... sigma(arc_ir)] with sigma(arc_i1) fixed to +1.

    Sums restricted partition functions Z_sigma over all wired spin
    assignments. For r = 2 this equals the probability that the two wired
    arcs lie in the same FK cluster.
    """
    wired = wired_arcs(bc)
    k = len(wired)
    subset = list(subset)
    if not subset or any(i < 0 or i >= k for i in subset) or len(set(subset)) != len(subset):
        raise ValueError(f"subset must list distinct wired-arc indices in [0, {k})")
    anchor = subset[0]
    numerator = []
    denominator = []
    for sigma in product((1, -1), repeat=k):
        if sigma[anchor] != 1:
            continue
        z = restricted_z(bc, sigma, cap)
        sign = 1
        for i in subset:
            sign *= sigma[i]
        numerator.append(sign * z)
        denominator.append(z)
    value = math.fsum(numerator) / math.fsum(denominator)
    logger.info("FK crossing (spin sums)", extra={"k": k, "subset": subset, "value": value})
    return value


def same_cluster_probability(bc: BoundaryConditionsDiscrete, subset: Sequence[int], cap: Optional[int] = None) -> float:
    """Probability that the listed wired arcs belong to one FK cluster."""
    if len(subset) <= 2:
        return fk_crossing_exact(bc, subset, cap) if len(subset) == 2 else 1.0
    return random_cluster_probability(bc, subset, cap)


def random_cluster_probability(
    bc: BoundaryConditionsDiscrete,
    subset: Sequence[int],
    cap: Optional[int] = None,
) -> float:
    """Same-cluster probability by brute force over bond configurations.

    Independent of the spin representation: nodes are the faces plus one
    node per wired arc, bonds open with p = 1 - x, weight 2^#clusters.
    """
    cap = get_enum_cap() if cap is None else cap
    domain = bc.domain
    wired = wired_arcs(bc)
    arc_node = {}
    for number, arc_index in enumerate(wired):
        for (v, d) in bc.arcs[arc_index].edges:
            arc_node[canonical_edge(v, d)] = ("arc", number)

    bonds = []
    for edge in sorted(domain.edges):
        left, right = faces_of_edge(*edge)
        if left in domain.faces and right in domain.faces:
            bonds.append((left, right))
        elif edge in arc_node:
            face = left if left in domain.faces else right
            bonds.append((face, arc_node[edge]))
    if len(bonds) > cap:
        raise EnumerationCapExceeded(len(bonds), cap)

    nodes = list(domain.faces) + [("arc", i) for i in range(len(wired))]
    targets = [("arc", i) for i in subset]
    p = 1.0 - CRITICAL_X
    hit = []
    total = []
    for mask in range(1 << len(bonds)):
        graph = nx.Graph()
        graph.add_nodes_from(nodes)
        graph.add_edges_from(b for i, b in enumerate(bonds) if mask >> i & 1)
        n_open = mask.bit_count()
        weight = p ** n_open * (1 - p) ** (len(bonds) - n_open) * 2 ** nx.number_connected_components(graph)
        total.append(weight)
        component = nx.node_connected_component(graph, targets[0])
        if all(t in component for t in targets):
            hit.append(weight)
    return math.fsum(hit) / math.fsum(total)
