"""
Spin configurations: the bijection with edge configurations and sampling.

Outside every boundary edge sits a fixed spin: +1/-1 on plus/minus arcs and
the assigned spin on free arcs. Free edges carry no coupling.
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import logging

import networkx as nx
import numpy as np

from src.config import CRITICAL_X, get_mc_burn_in, get_mc_thin, get_seed
from src.errors import BoundaryConditionError, EnumerationCapExceeded
from src.lattice.boundary import BoundaryConditionsDiscrete
from src.lattice.domain import face_edges
from src.lattice.geometry import Face, Site, Strand, canonical_edge, edge_strands, faces_of_edge
from src.lowtemp.configs import ConfigSpace, EdgeConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpinConfig:
    """Spins on faces plus the fixed outside spins along the boundary."""

    spins: Dict[Face, int]
    outside: Dict[Strand, int]  # canonical boundary edge -> spin across it

    def __getitem__(self, face: Face) -> int:
        return self.spins[face]


def _neighbour(domain, face: Face, edge: Strand) -> Optional[Face]:
    left, right = faces_of_edge(*edge)
    other = right if left == face else left
    return other if other in domain.faces else None


def spins_to_edges(spin: SpinConfig, bc: BoundaryConditionsDiscrete) -> EdgeConfig:
    """Edges separating unequal spins; sources are the odd-degree vertices.

    Raises:
        BoundaryConditionError: outside spins differ from the boundary conditions
    """
    for edge, value in bc.edge_spin.items():
        if spin.outside.get(edge) != value:
            raise BoundaryConditionError(f"outside spin at {edge} violates the boundary conditions")
    domain = bc.domain
    strands = set()
    for edge in domain.edges:
        left, right = faces_of_edge(*edge)
        a = spin.spins[left] if left in domain.faces else spin.outside[edge]
        b = spin.spins[right] if right in domain.faces else spin.outside[edge]
        if a != b:
            strands.update(edge_strands(edge))
    degree: Dict = {}
    for (v, _) in strands:
        degree[v] = degree.get(v, 0) + 1
    sources = tuple(sorted(Site.vertex_site(v) for v, n in degree.items() if n % 2))
    return EdgeConfig(strands=frozenset(strands), sources=sources)


def edges_to_spins(config: EdgeConfig, bc: BoundaryConditionsDiscrete) -> SpinConfig:
    """Inverse of spins_to_edges.

    Raises:
        ValueError: the edge set is not the domain wall of any spin configuration
    """
    domain = bc.domain
    included = {canonical_edge(v, d) for (v, d) in config.strands if d % 2 == 0 and domain.has_edge(v, d)}
    spins: Dict[Face, int] = {}
    queue = deque()
    for edge, outside in sorted(bc.edge_spin.items()):
        left, right = faces_of_edge(*edge)
        face = left if left in domain.faces else right
        value = -outside if edge in included else outside
        if face not in spins:
            spins[face] = value
            queue.append(face)
    while queue:
        face = queue.popleft()
        for edge in face_edges(face):
            other = _neighbour(domain, face, edge)
            if other is None or other in spins:
                continue
            spins[other] = -spins[face] if edge in included else spins[face]
            queue.append(other)

    result = SpinConfig(spins=spins, outside=dict(bc.edge_spin))
    if spins_to_edges(result, bc).strands != frozenset(
        s for s in config.strands if s[1] % 2 == 0 and domain.has_edge(*s)
    ):
        raise ValueError("edge set is not a domain wall configuration")
    return result


def boltzmann_weight(spin: SpinConfig, bc: BoundaryConditionsDiscrete, x: float = CRITICAL_X) -> float:
    """prod over non-free edges of x^[spins differ], i.e. exp(-2 beta) per disagreement."""
    domain = bc.domain
    disagreements = 0
    for edge in domain.edges:
        if edge in bc.free_edges:
            continue
        left, right = faces_of_edge(*edge)
        a = spin.spins[left] if left in domain.faces else spin.outside[edge]
        b = spin.spins[right] if right in domain.faces else spin.outside[edge]
        disagreements += a != b
    return x ** disagreements


class MetropolisChain:
    """Checkerboard single-spin-flip Metropolis chain for the spin measure.

    Faces of one colour never touch, so each half-sweep updates them
    simultaneously.

    Args:
        bc: Boundary conditions (fixes the outside spins and free edges)
        rng: numpy Generator owning this chain's noise
        outside: Optional override of outside spins per boundary edge
            (None entries decouple the edge)
    """

    def __init__(self, bc: BoundaryConditionsDiscrete, rng: np.random.Generator, outside=None):
        domain = bc.domain
        self.bc = bc
        self.rng = rng
        self.faces: List[Face] = sorted(domain.faces)
        index = {f: i for i, f in enumerate(self.faces)}
        n = len(self.faces)
        outside = dict(bc.edge_spin) if outside is None else outside

        # neighbour slots: index into [spins..., ghost spins...]
        self.ghosts: List[int] = []
        nbr = np.zeros((n, 4), dtype=np.int64)
        active = np.zeros((n, 4), dtype=bool)
        for i, f in enumerate(self.faces):
            for slot, edge in enumerate(face_edges(f)):
                other = _neighbour(domain, f, edge)
                if other is not None:
                    nbr[i, slot] = index[other]
                    active[i, slot] = True
                else:
                    value = outside.get(edge)
                    active[i, slot] = value is not None and edge not in bc.free_edges
                    nbr[i, slot] = n + len(self.ghosts)
                    self.ghosts.append(value if value is not None else 1)
        self.nbr = nbr
        self.active = active
        self.state = np.concatenate([np.ones(n, dtype=np.int8), np.array(self.ghosts, dtype=np.int8)])
        parity = np.array([(f[0] + f[1]) % 2 for f in self.faces])
        self.colours = [np.flatnonzero(parity == c) for c in (0, 1)]

    def sweep(self) -> None:
        for sites in self.colours:
            s = self.state[sites]
            neighbours = self.state[self.nbr[sites]]
            disagree = (neighbours != s[:, None]) & self.active[sites]
            delta = (self.active[sites].sum(axis=1) - 2 * disagree.sum(axis=1)).astype(float)
            accept = self.rng.random(len(sites)) < CRITICAL_X ** delta
            self.state[sites[accept]] = -s[accept]

    def spins(self) -> Dict[Face, int]:
        return {f: int(self.state[i]) for i, f in enumerate(self.faces)}

    def snapshot(self) -> SpinConfig:
        return SpinConfig(spins=self.spins(), outside=dict(self.bc.edge_spin))


def _exact_samples(space: ConfigSpace, bc, count: int, rng: np.random.Generator) -> Iterator[SpinConfig]:
    masks = list(space.masks())
    weights = np.array([space.weight(mask) for mask in masks])
    chosen = rng.choice(len(masks), size=count, p=weights / weights.sum())
    for i in chosen:
        yield edges_to_spins(space.to_config(masks[i]), bc)


def sample_spins(
    bc: BoundaryConditionsDiscrete,
    count: int,
    seed: Optional[int] = None,
    method: str = "auto",
    burn_in: Optional[int] = None,
    thin: Optional[int] = None,
) -> Iterator[SpinConfig]:
    """Sample spin configurations from the Ising measure with these boundary conditions.

    Exact sampling from the enumerated configuration space when the domain
    is under the enumeration cap, otherwise a checkerboard Metropolis chain
    with burn_in sweeps and thin sweeps between samples.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    seed = get_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    sources = tuple(Site.vertex_site(v) for v in bc.marked_a)
    if method in ("auto", "exact"):
        try:
            space = ConfigSpace(bc.domain, sources, bc.free_edges)
        except EnumerationCapExceeded:
            if method == "exact":
                raise
        else:
            logger.info("Exact spin sampling", extra={"count": count, "configs": space.size})
            yield from _exact_samples(space, bc, count, rng)
            return

    burn_in = get_mc_burn_in() if burn_in is None else burn_in
    thin = get_mc_thin() if thin is None else thin
    chain = MetropolisChain(bc, rng)
    logger.info("Metropolis spin sampling", extra={"count": count, "burn_in": burn_in, "thin": thin})
    for _ in range(burn_in):
        chain.sweep()
    for _ in range(count):
        for _ in range(thin):
            chain.sweep()
        yield chain.snapshot()


def plus_crossing(spin: SpinConfig, bc: BoundaryConditionsDiscrete) -> bool:
    """Whether a path of plus faces joins the two plus arcs.

    Raises:
        BoundaryConditionError: the boundary conditions do not have exactly two plus arcs
    """
    plus_arcs = [arc for arc in bc.arcs if arc.label == "plus"]
    if len(plus_arcs) != 2:
        raise BoundaryConditionError(f"plus crossings need two plus arcs, got {len(plus_arcs)}")
    domain = bc.domain
    graph = nx.Graph()
    graph.add_nodes_from([("arc", 0), ("arc", 1)])
    for edge in domain.edges:
        left, right = faces_of_edge(*edge)
        if left in domain.faces and right in domain.faces:
            if spin.spins[left] == spin.spins[right] == 1:
                graph.add_edge(left, right)
    for number, arc in enumerate(plus_arcs):
        for (v, d) in arc.edges:
            left, right = faces_of_edge(v, d)
            face = left if left in domain.faces else right
            if spin.spins[face] == 1:
                graph.add_edge(("arc", number), face)
    return nx.has_path(graph, ("arc", 0), ("arc", 1))
