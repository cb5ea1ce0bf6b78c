"""
The fermionic observable F(z) on a decorated domain.

F(z) = i eta_{n_{a_1}} sum over S in Conf(n_{a_1}, ..., n_{a_{m+s-1}}, z) of
weight(S) exp(-i wind(S) / 2). Weights are accumulated as integer counts per
(winding mod 4 pi, number of non-free half-edges) and summed once at the end.
"""

from collections import Counter
from dataclasses import dataclass, field, replace
from functools import partial
from multiprocessing import Pool
from typing import Dict, Iterable, List, Optional

import cmath
import logging
import math

from src.config import SQRT_X
from src.errors import SiteError
from src.lattice.boundary import BoundaryConditionsDiscrete, eta_along_boundary
from src.lattice.geometry import Site
from src.lowtemp.configs import ConfigSpace, partition_function
from src.models.enums import Normalization, TurnRule
from src.observables.winding import CurveTracer
from src.utils.debug import format_debug_message

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscreteObservable:
    """Observable values at corners, midedges and outer normals."""

    bc: BoundaryConditionsDiscrete
    values: Dict[Site, complex]
    reference: Site
    eta_reference: complex
    normalization: Normalization = "raw"
    scale: float = 1.0  # values = raw values / scale
    rule: TurnRule = "right"
    metadata: Dict[str, object] = field(default_factory=dict)

    def __getitem__(self, site: Site) -> complex:
        return self.values[site]

    def __contains__(self, site: Site) -> bool:
        return site in self.values

    @property
    def max_abs(self) -> float:
        return max((abs(v) for v in self.values.values()), default=0.0)

    def with_values(self, values: Dict[Site, complex]) -> "DiscreteObservable":
        return replace(self, values=dict(values))

    def normalized(self) -> "DiscreteObservable":
        """Divide by 2^(1/4) sqrt(delta) Z(sources, n_{b_2k})."""
        if self.normalization == "normalized":
            return self
        factor = normalization_constant(self.bc)
        return replace(
            self,
            values={site: value / factor for site, value in self.values.items()},
            normalization="normalized",
            scale=factor,
        )


def normalization_constant(bc: BoundaryConditionsDiscrete) -> float:
    if bc.k == 0:
        raise SiteError("normalization needs a free arc (k >= 1)")
    z = partition_function(bc.domain, bc, tuple(bc.sources) + (bc.normals_b[-1],))
    return 2 ** 0.25 * math.sqrt(bc.domain.mesh) * z


def check_site(bc: BoundaryConditionsDiscrete, site: Site) -> None:
    """Raise SiteError unless F is defined at site by the configuration sum."""
    domain = bc.domain
    if site.kind not in ("corner", "mid", "normal") or not domain.contains_site(site):
        raise SiteError(f"{site} is not a corner, midedge or outer normal of the domain")
    if site in bc.sources:
        raise SiteError(f"{site} is a source normal")
    if site.kind == "mid" and site.strand in bc.free_edges:
        raise SiteError(f"{site} lies on a free arc; use extend_to_free")


def admissible_sites(bc: BoundaryConditionsDiscrete) -> List[Site]:
    """Every corner, non-free midedge and non-source outer normal edge."""
    domain = bc.domain
    sources = set(bc.sources)
    sites = list(domain.corners)
    sites += [z for z in domain.midedges if z.strand not in bc.free_edges]
    sites += [n.site for n in domain.normals if n.site.kind == "normal" and n.site not in sources]
    return sites


def _winding_counts(bc: BoundaryConditionsDiscrete, site: Site, rule: TurnRule, cap: Optional[int]):
    space = ConfigSpace(bc.domain, tuple(bc.sources) + (site,), bc.free_edges, cap)
    tracer = CurveTracer(space, bc, bc.sources[0], site)
    counts: Counter = Counter()
    for mask in space.masks():
        counts[(tracer.trace(mask, rule) % 16, space.nonfree_count(mask))] += 1
    return space, counts


def observable_value(
    bc: BoundaryConditionsDiscrete,
    site: Site,
    rule: TurnRule = "right",
    cap: Optional[int] = None,
    eta_reference: Optional[complex] = None,
) -> complex:
    """Raw F at one site.

    Raises:
        SiteError: site on a free arc, a source normal, or not a valid site
        EnumerationCapExceeded: domain above the enumeration cap
    """
    check_site(bc, site)
    if eta_reference is None:
        eta_reference = eta_along_boundary(bc)[bc.sources[0]]
    space, counts = _winding_counts(bc, site, rule, cap)
    terms = [
        count * SQRT_X ** n * cmath.exp(-1j * math.pi * w / 8.0) for (w, n), count in counts.items()
    ]
    total = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    return 1j * eta_reference * space.stub_factor * total


def observable(
    bc: BoundaryConditionsDiscrete,
    sites: Optional[Iterable[Site]] = None,
    normalization: Normalization = "raw",
    rule: TurnRule = "right",
    jobs: int = 1,
    cap: Optional[int] = None,
) -> DiscreteObservable:
    """Evaluate F at the given sites (default: every admissible site).

    Sites are independent; jobs > 1 spreads them over a process pool.
    """
    if not bc.sources:
        raise SiteError("the observable needs at least the reference normal n_{a_1}")
    sites = admissible_sites(bc) if sites is None else list(sites)
    for site in sites:
        check_site(bc, site)
    eta_reference = eta_along_boundary(bc)[bc.sources[0]]
    logger.debug(format_debug_message("observable", "Evaluating", sites=len(sites), jobs=jobs, rule=rule))

    worker = partial(observable_value, bc, rule=rule, cap=cap, eta_reference=eta_reference)
    if jobs > 1:
        with Pool(jobs) as pool:
            results = pool.map(worker, sites)
    else:
        results = [worker(site) for site in sites]

    pairing = [(str(a), str(b)) for a, b in bc.outer_pairing()]
    obs = DiscreteObservable(
        bc=bc,
        values=dict(zip(sites, results)),
        reference=bc.sources[0],
        eta_reference=eta_reference,
        rule=rule,
        metadata={"pairing": pairing, "resolution": rule},
    )
    logger.info("Observable computed", extra={"sites": len(sites), "m": bc.m, "s": bc.s, "k": bc.k})
    return obs.normalized() if normalization == "normalized" else obs
