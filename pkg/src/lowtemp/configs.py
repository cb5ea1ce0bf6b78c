"""
Low-temperature expansion: source-constrained even subgraphs.

Configurations live on the decorated graph: every lattice edge is two
half-edges meeting at its midedge, and outer normals and corners hang off
lattice vertices as stubs. Once the sources are fixed the admissible
configurations form an affine space S_0 + span(face cycles), walked here in
Gray-code order.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import logging
import math

import networkx as nx

from src.config import CORNER_WEIGHT, SQRT_X, get_enum_cap
from src.errors import EnumerationCapExceeded, SourceError
from src.lattice.domain import DecoratedDomain, face_strands
from src.lattice.geometry import Site, Strand, Vertex, canonical_edge, edge_strands, step
from src.utils.debug import format_debug_message

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeConfig:
    """A set of half-edges / corner edges with prescribed odd-degree sources."""

    strands: FrozenSet[Strand]
    sources: Tuple[Site, ...]

    @property
    def full_edges(self) -> List[Strand]:
        """Lattice edges with both halves included."""
        edges = []
        for (v, d) in self.strands:
            if d % 2 == 0 and (step(v, d), (d + 4) % 8) in self.strands:
                key = canonical_edge(v, d)
                if key == (v, d):
                    edges.append(key)
        return sorted(edges)

    def vertex_degree(self, v: Vertex) -> int:
        return sum(1 for (w, _) in self.strands if w == v)

    def is_admissible(self, domain: DecoratedDomain) -> bool:
        """Parity check: sources odd, every other decorated vertex even."""
        odd_vertices = {s.vertex for s in self.sources if s.kind == "vertex"}
        for v in domain.vertices:
            if (self.vertex_degree(v) % 2 == 1) != (v in odd_vertices):
                return False
        odd_mids = {s.strand for s in self.sources if s.kind == "mid"}
        for edge in domain.edges:
            a, b = edge_strands(edge)
            degree = (a in self.strands) + (b in self.strands)
            if (degree % 2 == 1) != (edge in odd_mids):
                return False
        stubs = {s.strand for s in self.sources if s.kind in ("corner", "normal")}
        for (v, d) in self.strands:
            if d % 2 == 1 or not domain.has_edge(v, d):
                if (v, d) not in stubs:
                    return False
        return stubs <= self.strands


class ConfigSpace:
    """Bitmask model of Conf(domain, sources) with per-strand weights.

    Strand bits: both half-edges of every domain edge, then one stub per
    corner or outer-normal source. Half-edges on free edges weigh 1.
    """

    def __init__(
        self,
        domain: DecoratedDomain,
        sources: Sequence[Site],
        free_edges: Iterable[Strand] = (),
        cap: Optional[int] = None,
    ):
        cap = get_enum_cap() if cap is None else cap
        if len(domain.edges) > cap:
            raise EnumerationCapExceeded(len(domain.edges), cap)
        self.domain = domain
        self.sources = tuple(sources)
        self.free_edges = frozenset(canonical_edge(*e) for e in free_edges)
        _validate_sources(domain, self.sources)

        self.strands: List[Strand] = []
        for edge in sorted(domain.edges):
            self.strands.extend(edge_strands(edge))
        self.n_domain = len(self.strands)
        for site in self.sources:
            if site.kind in ("corner", "normal"):
                self.strands.append(site.strand)
        self.index: Dict[Strand, int] = {s: i for i, s in enumerate(self.strands)}

        self.nonfree_mask = 0
        for i in range(self.n_domain):
            v, d = self.strands[i]
            if canonical_edge(v, d) not in self.free_edges:
                self.nonfree_mask |= 1 << i
        self.stub_factor = 1.0
        for site in self.sources:
            if site.kind == "corner":
                self.stub_factor *= CORNER_WEIGHT
            elif site.kind == "normal":
                self.stub_factor *= SQRT_X

        self.faces = sorted(domain.faces)
        self.face_masks = [self._mask(face_strands(f)) for f in self.faces]
        self.base = self._base_config()

    def _mask(self, strands: Iterable[Strand]) -> int:
        mask = 0
        for s in strands:
            mask |= 1 << self.index[s]
        return mask

    def _base_config(self) -> int:
        odd: Dict[Vertex, int] = {}
        mask = 0
        for site in self.sources:
            if site.kind == "vertex":
                v = site.vertex
            else:
                strand = site.strand
                if site.kind == "mid":
                    strand = (site.vertex, site.d)
                mask ^= 1 << self.index[strand]
                v = site.vertex
            odd[v] = odd.get(v, 0) ^ 1

        graph = nx.Graph()
        for (v, d) in self.domain.edges:
            graph.add_edge(v, step(v, d), direction=d)
        root = min(graph.nodes)
        order = [root] + [child for _, child in nx.bfs_edges(graph, root)]
        parent = dict(nx.bfs_predecessors(graph, root))
        for v in reversed(order[1:]):
            if odd.get(v, 0):
                p = parent[v]
                for strand in edge_strands(canonical_edge(v, _direction(v, p))):
                    mask ^= 1 << self.index[strand]
                odd[v] = 0
                odd[p] = odd.get(p, 0) ^ 1
        if odd.get(root, 0):
            raise SourceError("sources have odd total parity")
        return mask

    @property
    def size(self) -> int:
        return 1 << len(self.faces)

    def masks(self) -> Iterator[int]:
        """All admissible configurations, each once, in Gray-code order."""
        mask = self.base
        yield mask
        for i in range(1, self.size):
            bit = (i & -i).bit_length() - 1
            mask ^= self.face_masks[bit]
            yield mask

    def nonfree_count(self, mask: int) -> int:
        return (mask & self.nonfree_mask).bit_count()

    def weight(self, mask: int) -> float:
        return self.stub_factor * SQRT_X ** self.nonfree_count(mask)

    def to_config(self, mask: int) -> EdgeConfig:
        strands = frozenset(s for i, s in enumerate(self.strands) if mask >> i & 1)
        return EdgeConfig(strands=strands, sources=self.sources)

    def to_mask(self, config: EdgeConfig) -> int:
        return self._mask(config.strands)

    def weight_counts(self) -> Counter:
        """Histogram of non-free strand counts over all configurations."""
        return Counter(self.nonfree_count(mask) for mask in self.masks())

    def total_weight(self, counts: Optional[Counter] = None) -> float:
        counts = self.weight_counts() if counts is None else counts
        return self.stub_factor * math.fsum(c * SQRT_X ** n for n, c in counts.items())


def _direction(v: Vertex, w: Vertex) -> int:
    for d in (0, 2, 4, 6):
        if step(v, d) == w:
            return d
    raise ValueError(f"{v} and {w} are not adjacent")


def _validate_sources(domain: DecoratedDomain, sources: Sequence[Site]) -> None:
    if len(set(sources)) != len(sources):
        raise SourceError("sources must be distinct")
    if len(sources) % 2:
        raise SourceError(f"number of sources must be even, got {len(sources)}")
    for site in sources:
        if not domain.contains_site(site):
            raise SourceError(f"source {site} is not a decorated vertex of the domain")


def enumerate_configs(
    domain: DecoratedDomain,
    sources: Sequence[Site] = (),
    free_edges: Iterable[Strand] = (),
    cap: Optional[int] = None,
) -> Iterator[EdgeConfig]:
    """Yield every configuration of Conf(domain, sources) exactly once.

    Raises:
        SourceError: repeated sources, odd count, or a source off the domain
        EnumerationCapExceeded: more full edges than the cap
    """
    space = ConfigSpace(domain, sources, free_edges, cap)
    logger.debug(format_debug_message("enumerate_configs", "Starting", faces=len(space.faces), sources=len(sources)))
    for mask in space.masks():
        yield space.to_config(mask)


def config_weight(config: EdgeConfig, free_edges: Iterable[Strand] = ()) -> float:
    """Product of strand weights; half-edges on free edges weigh 1."""
    free = frozenset(canonical_edge(*e) for e in free_edges)
    weight = 1.0
    for (v, d) in config.strands:
        if d % 2:
            weight *= CORNER_WEIGHT
        elif canonical_edge(v, d) not in free:
            weight *= SQRT_X
    return weight


def partition_function(
    domain: DecoratedDomain,
    bc=None,
    sources: Sequence[Site] = (),
    cap: Optional[int] = None,
) -> float:
    """Z(domain, sources): compensated sum of configuration weights.

    bc (BoundaryConditionsDiscrete or None) only decides which edges are free.
    """
    free = bc.free_edges if bc is not None else ()
    space = ConfigSpace(domain, sources, free, cap)
    z = space.total_weight()
    logger.info("Partition function", extra={"faces": len(space.faces), "sources": len(sources), "z": z})
    return z
