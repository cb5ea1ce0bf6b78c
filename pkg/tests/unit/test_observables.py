"""Unit tests for the discrete fermionic observable and its identities."""

import math

import pytest

from src.errors import SiteError
from src.lattice.boundary import boundary_arcs
from src.lattice.domain import build_domain
from src.lattice.geometry import Site
from src.lowtemp.configs import enumerate_configs
from src.lowtemp.spins import sample_spins, spins_to_edges
from src.models.domain import DomainSpec
from src.observables.checks import boundary_identity_check, collinearity_check, extend_to_free, shol_check
from src.observables.hfunction import appendix_identity_check, boundary_values_check, build_H, laplacian_check
from src.observables.montecarlo import estimate_observable, monte_carlo_observable, relative_errors
from src.observables.observable import admissible_sites, check_site, normalization_constant, observable
from src.observables.suite import load_fixture, verify_identities
from src.observables.winding import interface, winding
from tests.conftest import DOMAINS


@pytest.fixture
def domino_obs(domino_bc):
    return observable(domino_bc)


class TestObservable:
    """Exhaustive evaluation of F."""

    def test_every_admissible_site_is_evaluated(self, domino_bc, domino_obs):
        sites = admissible_sites(domino_bc)
        assert set(domino_obs.values) == set(sites)
        assert domino_obs.max_abs > 0

    def test_reference_normal_is_recorded(self, domino_bc, domino_obs):
        """n_{a_1} is the first source and fixes the overall phase."""
        assert domino_obs.reference == domino_bc.sources[0]
        assert abs(domino_obs.eta_reference) == pytest.approx(1.0)

    def test_normalization_divides_by_constant(self, domino_bc, domino_obs):
        normalized = domino_obs.normalized()
        constant = normalization_constant(domino_bc)
        site = next(iter(domino_obs.values))
        assert normalized.normalization == "normalized"
        assert normalized.scale == pytest.approx(constant)
        assert normalized[site] == pytest.approx(domino_obs[site] / constant)
        assert normalized.normalized() is normalized

    @pytest.mark.parametrize("path", ["square1_pm.json", "rect3x3_pm.json"])
    def test_plus_minus_sources_skip_the_last_change(self, path):
        """Pure +/- data: sources n_{a_1}..n_{a_{m-1}}, and n_{a_m} is an evaluation site."""
        bc = load_fixture(DOMAINS / path)
        assert bc.sources == bc.normals_a[:-1]
        obs = observable(bc)
        assert bc.normals_a[-1] in obs
        assert abs(obs[bc.normals_a[-1]]) > 0
        assert boundary_identity_check(obs, tol=1e-10).ok

    def test_normalization_needs_free_arc(self, square_bc):
        obs = observable(square_bc)
        with pytest.raises(SiteError, match="k >= 1"):
            obs.normalized()

    def test_free_midedge_is_refused(self, domino_bc):
        """F on a free arc is only defined through the corner extension."""
        v, d = next(arc for arc in domino_bc.arcs if arc.is_free).edges[0]
        with pytest.raises(SiteError, match="free arc"):
            check_site(domino_bc, Site.mid(v, d))

    def test_source_normal_is_refused(self, domino_bc):
        with pytest.raises(SiteError, match="source normal"):
            check_site(domino_bc, domino_bc.sources[0])

    def test_vertex_is_not_a_site(self, domino_bc):
        with pytest.raises(SiteError, match="not a corner"):
            check_site(domino_bc, Site.vertex_site((0, 0)))

    def test_free_arc_extension_is_finite(self, domino_bc, domino_obs):
        for edge in domino_bc.free_edges:
            assert abs(extend_to_free(domino_obs, edge)) < float("inf")

    def test_process_pool_matches_serial(self, domino_bc, domino_obs):
        pooled = observable(domino_bc, jobs=2)
        for site, value in domino_obs.values.items():
            assert pooled[site] == pytest.approx(value, abs=1e-14)


class TestIdentities:
    """The discrete identities hold to round-off."""

    @pytest.mark.parametrize("name", ["square_bc", "domino_bc"])
    def test_suite_passes(self, name, request):
        bc = request.getfixturevalue(name)
        reports = verify_identities(bc, tol=1e-10)
        failed = [(r.name, r.max_defect) for r in reports if not r.ok]
        assert not failed, f"failed identities: {failed}"

    def test_normalized_suite_has_h_checks(self, domino_bc):
        names = {r.name for r in verify_identities(domino_bc)}
        assert "H closure" in names
        assert "winding invariance" in names

    def test_perturbed_value_breaks_shol(self, domino_obs):
        """Tampering with one corner is caught by the projection identity."""
        corner = next(site for site in domino_obs.values if site.kind == "corner")
        values = dict(domino_obs.values)
        values[corner] += 0.1 * domino_obs.max_abs
        report = shol_check(domino_obs.with_values(values), tol=1e-10)
        assert not report.ok
        assert report.violations[0].defect > 1e-3 * domino_obs.max_abs

    def test_collinearity_holds(self, domino_obs):
        report = collinearity_check(domino_obs, tol=1e-10)
        assert report.ok
        assert report.n_checked > 0


class TestMonteCarlo:
    """Metropolis estimates of the normalized observable."""

    def test_needs_free_arc(self, square_bc):
        with pytest.raises(SiteError, match="k >= 1"):
            estimate_observable(square_bc, [], samples=10)

    def test_needs_two_samples(self, domino_bc):
        with pytest.raises(ValueError, match="samples"):
            estimate_observable(domino_bc, [], samples=1)

    def test_stderr_carries_the_mesh_factor(self):
        """Quartering the mesh doubles both the estimate and its standard error."""
        arcs = [
            {"label": "minus", "from": [1, 0], "to": [3, 1]},
            {"label": "free", "from": [3, 1], "to": [2, 3]},
            {"label": "plus", "from": [2, 3], "to": [1, 0]},
        ]
        estimates = []
        for mesh in (1.0, 0.25):
            spec = DomainSpec.model_validate({"rect": [3, 3], "mesh": mesh, "arcs": arcs})
            bc = boundary_arcs(build_domain(spec), spec.arcs)
            site = Site.mid((1, 1), 0)
            estimates.append(estimate_observable(bc, [site], samples=40, seed=9, burn_in=10, thin=1)[site])
        coarse, fine = estimates
        assert fine.value == pytest.approx(2 * coarse.value, rel=1e-12)
        assert fine.stderr == pytest.approx(2 * coarse.stderr, rel=1e-12)
        assert coarse.stderr > 0

    @pytest.mark.slow
    def test_agrees_with_exhaustive_sum(self, rect_pmf_bc):
        """Estimates land within a few standard errors of the exact values."""
        sites = [s for s in admissible_sites(rect_pmf_bc) if s.kind == "corner"][:4]
        exact = observable(rect_pmf_bc, sites=sites, normalization="normalized")
        estimate = monte_carlo_observable(rect_pmf_bc, sites, samples=4000, seed=17, burn_in=200, thin=2)
        for site in sites:
            stderr = estimate.metadata["stderr"][str(site)]
            bound = max(5 * stderr, 0.05 * exact.max_abs)
            assert abs(estimate[site] - exact[site]) < bound, f"site {site}"
        assert max(relative_errors(estimate, exact)) < 0.5


class TestInterface:
    """Domain wall leaving a_1 in sampled spin configurations."""

    @pytest.mark.parametrize("side", ["rightmost", "leftmost"])
    def test_wall_joins_the_sign_changes(self, square_bc, side):
        start = square_bc.normals_a[0].vertex
        for spin in sample_spins(square_bc, 20, seed=3, method="exact"):
            path = interface(spins_to_edges(spin, square_bc), square_bc, side)
            assert path[0] == start
            assert set((path[0], path[-1])) == set(square_bc.marked_a)
            assert len(path) == 3
            for v, w in zip(path, path[1:]):
                assert abs(v[0] - w[0]) + abs(v[1] - w[1]) == 1

    def test_unknown_side(self, square_bc):
        spin = next(sample_spins(square_bc, 1, seed=1, method="exact"))
        with pytest.raises(ValueError, match="rightmost"):
            interface(spins_to_edges(spin, square_bc), square_bc, "middle")


class TestWinding:
    def test_resolutions_agree_modulo_four_pi(self, domino_bc):
        """The turn rule changes the winding of a configuration by multiples of 4 pi only."""
        targets = [z for z in admissible_sites(domino_bc) if z.kind == "mid"]
        assert targets
        for end in targets:
            for config in enumerate_configs(domino_bc.domain, tuple(domino_bc.sources) + (end,), domino_bc.free_edges):
                right = winding(config, domino_bc, end, "right")
                left = winding(config, domino_bc, end, "left")
                turns = (right - left) / (4 * math.pi)
                assert turns == pytest.approx(round(turns), abs=1e-12), f"{end}"
                assert (right / (math.pi / 4)) == pytest.approx(round(right / (math.pi / 4)), abs=1e-12)


class TestHFunction:
    """Integration of |F|^2 into (H_vertex, H_face)."""

    def test_free_arc_values(self, domino_bc):
        H = build_H(observable(domino_bc, normalization="normalized"), tol=1e-10)
        assert H.closure_defect < 1e-10
        assert H.h_faces[H.base_face] == 0.0
        assert len(H.free_constants) == domino_bc.k
        reports = boundary_values_check(H, domino_bc, tol=1e-10)
        assert all(report.ok for report in reports)
        assert reports[1].n_checked > 0

    @pytest.mark.parametrize("path", ["square1_pm.json", "rect3x3_pm.json"])
    def test_plus_minus_only(self, path):
        """With no free arc H comes from the raw observable and only the +/- checks apply."""
        bc = load_fixture(DOMAINS / path)
        assert bc.k == 0
        obs = observable(bc)
        H = build_H(obs, tol=1e-10)
        assert H.free_constants == ()
        outer, free = boundary_values_check(H, bc, tol=1e-10)
        assert outer.ok and outer.n_checked > 0
        assert free.ok and free.n_checked == 0
        assert all(report.ok for report in laplacian_check(H, bc, tol=1e-10))
        assert appendix_identity_check(H, obs, tol=1e-10).ok
        assert min(H.h_vertices.values()) >= -1e-10

    def test_plus_minus_suite_includes_h(self, square_bc):
        names = {report.name for report in verify_identities(square_bc, tol=1e-10)}
        assert {"H closure", "H on plus/minus faces", "Laplacian H_vertex >= 0"} <= names
        assert "free-arc collinearity" not in names
