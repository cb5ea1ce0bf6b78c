"""
Monte Carlo estimate of the normalized observable on domains too large to enumerate.

A spin sample gives a domain-wall configuration S; adding stubs at the
sources and at n_{b_2k} puts S in Conf(sources, n_{b_2k}), whose total weight
is the normalizing partition function. Moving the last stub to z along a
fixed lattice path gamma is a bijection onto Conf(sources, z), so

    F_normalized(z) = i eta E[ w(S xor gamma) / w(S) exp(-i wind / 2) ] / (2^(1/4) sqrt(delta)).
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import cmath
import logging
import math
import sys

import networkx as nx
import numpy as np

from src.config import SQRT_X, get_mc_burn_in, get_mc_thin, get_seed
from src.errors import SiteError
from src.lattice.boundary import BoundaryConditionsDiscrete, eta_along_boundary
from src.lattice.geometry import Site, canonical_edge, edge_strands, step
from src.lowtemp.configs import ConfigSpace, _direction
from src.lowtemp.spins import MetropolisChain, spins_to_edges
from src.models.enums import TurnRule
from src.observables.observable import DiscreteObservable, check_site
from src.observables.winding import CurveTracer
from src.utils.debug import TimingContext

logger = logging.getLogger(__name__)

NO_CAP = sys.maxsize


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Batch-means estimate of the normalized observable at one site."""

    site: Site
    value: complex
    stderr: float
    samples: int


class _SiteEstimator:
    """Per-site tables: the target space, its tracer and the path from b_2k to z."""

    def __init__(self, bc: BoundaryConditionsDiscrete, site: Site, graph: nx.Graph):
        self.site = site
        self.space = ConfigSpace(bc.domain, tuple(bc.sources) + (site,), bc.free_edges, NO_CAP)
        self.tracer = CurveTracer(self.space, bc, bc.sources[0], site)
        origin = ConfigSpace(bc.domain, tuple(bc.sources) + (bc.normals_b[-1],), bc.free_edges, NO_CAP)
        self.stub_ratio = self.space.stub_factor / origin.stub_factor

        path = nx.shortest_path(graph, bc.marked_b[-1], site.vertex)
        gamma = 0
        for v, w in zip(path, path[1:]):
            for strand in edge_strands(canonical_edge(v, _direction(v, w))):
                gamma ^= 1 << self.space.index[strand]
        if site.kind == "mid":
            gamma ^= 1 << self.space.index[(site.vertex, site.d)]
        self.gamma = gamma
        self.stubs = 0
        for i in range(self.space.n_domain, len(self.space.strands)):
            self.stubs |= 1 << i

    def term(self, walls: int, rule: TurnRule) -> complex:
        mask = (walls ^ self.gamma) | self.stubs
        exponent = self.space.nonfree_count(mask) - self.space.nonfree_count(walls)
        winding = self.tracer.trace(mask, rule)
        return self.stub_ratio * SQRT_X ** exponent * cmath.exp(-1j * math.pi * winding / 8.0)


def _batch_means(terms: np.ndarray, batches: int):
    batches = max(2, min(batches, len(terms)))
    means = np.array([chunk.mean() for chunk in np.array_split(terms, batches)])
    spread = np.abs(means - means.mean())
    return complex(terms.mean()), float(math.sqrt(np.sum(spread ** 2) / (batches * (batches - 1))))


def estimate_observable(
    bc: BoundaryConditionsDiscrete,
    sites: Iterable[Site],
    samples: int,
    seed: Optional[int] = None,
    burn_in: Optional[int] = None,
    thin: Optional[int] = None,
    rule: TurnRule = "right",
    batches: int = 20,
) -> Dict[Site, MonteCarloEstimate]:
    """Estimate the normalized F at each site from one Metropolis chain.

    Raises:
        SiteError: invalid site, or no free arc to normalize by
    """
    if bc.k == 0:
        raise SiteError("Monte Carlo normalization needs a free arc (k >= 1)")
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    sites = list(sites)
    for site in sites:
        check_site(bc, site)
    seed = get_seed() if seed is None else seed
    burn_in = get_mc_burn_in() if burn_in is None else burn_in
    thin = get_mc_thin() if thin is None else thin

    graph = nx.Graph()
    for (v, d) in bc.domain.edges:
        graph.add_edge(v, step(v, d))
    estimators = [_SiteEstimator(bc, site, graph) for site in sites]
    index = estimators[0].space.index if estimators else {}
    eta = eta_along_boundary(bc)[bc.sources[0]]
    prefactor = 1j * eta / (2 ** 0.25 * math.sqrt(bc.domain.mesh))

    chain = MetropolisChain(bc, np.random.default_rng(seed))
    terms = np.zeros((len(sites), samples), dtype=complex)
    with TimingContext(None, "monte carlo observable") as timer:
        for _ in range(burn_in):
            chain.sweep()
        for n in range(samples):
            for _ in range(thin):
                chain.sweep()
            walls = 0
            for strand in spins_to_edges(chain.snapshot(), bc).strands:
                walls |= 1 << index[strand]
            for j, estimator in enumerate(estimators):
                terms[j, n] = estimator.term(walls, rule)

    results = {}
    for j, site in enumerate(sites):
        mean, err = _batch_means(terms[j], batches)
        results[site] = MonteCarloEstimate(site, prefactor * mean, abs(prefactor) * err, samples)
    logger.info(
        "Monte Carlo observable",
        extra={"sites": len(sites), "samples": samples, "seconds": timer.elapsed},
    )
    return results


def monte_carlo_observable(
    bc: BoundaryConditionsDiscrete,
    sites: Iterable[Site],
    samples: int,
    seed: Optional[int] = None,
    rule: TurnRule = "right",
    **kwargs,
) -> DiscreteObservable:
    """estimate_observable packaged as a normalized DiscreteObservable (stderr in metadata)."""
    estimates = estimate_observable(bc, sites, samples, seed=seed, rule=rule, **kwargs)
    return DiscreteObservable(
        bc=bc,
        values={site: e.value for site, e in estimates.items()},
        reference=bc.sources[0],
        eta_reference=eta_along_boundary(bc)[bc.sources[0]],
        normalization="normalized",
        rule=rule,
        metadata={
            "method": "metropolis",
            "samples": samples,
            "stderr": {str(site): e.stderr for site, e in estimates.items()},
        },
    )


def relative_errors(estimate: DiscreteObservable, exact: DiscreteObservable) -> List[float]:
    """|F_mc - F| / |F| at the sites both carry (magnitude of F bounded away from 0)."""
    errors = []
    for site, value in estimate.values.items():
        if site in exact.values and abs(exact.values[site]) > 1e-12:
            errors.append(abs(value - exact.values[site]) / abs(exact.values[site]))
    return errors
