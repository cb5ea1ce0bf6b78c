"""Spin-crossing functions G by Gauss-Jacobi rules."""

import numpy as np
import pytest

from src.crossing.gfunction import INTEGRANDS, G_eval, G_quad, make_g

KINDS = sorted(INTEGRANDS)


class TestGFunction:
    """G is a distribution function on [0, 1]."""

    @pytest.mark.parametrize("kind", KINDS)
    def test_endpoints(self, kind):
        g = make_g(kind)
        assert g(0.0) == 0.0
        assert g(1.0) == 1.0

    @pytest.mark.parametrize("kind", ["pmpm", "pmff"])
    def test_symmetric_kinds_split_in_half(self, kind):
        """Integrands symmetric under s -> 1 - s give G(1/2) = 1/2."""
        assert make_g(kind)(0.5) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("lam", [0.05, 0.3, 0.5, 0.7, 0.95])
    def test_matches_adaptive_quadrature(self, kind, lam):
        g = make_g(kind)
        assert G_eval(g, lam) == pytest.approx(G_quad(g, lam), abs=1e-8)

    @pytest.mark.parametrize("kind", KINDS)
    def test_monotone(self, kind):
        g = make_g(kind)
        values = [g(lam) for lam in np.linspace(0.0, 1.0, 41)]
        assert all(x < y for x, y in zip(values, values[1:]))

    def test_continuous_at_the_split(self):
        """The head and tail rules meet at 1/2."""
        g = make_g("pmpf")
        assert g(0.5 - 1e-9) == pytest.approx(g(0.5 + 1e-9), abs=1e-8)

    def test_node_count_converges(self):
        assert make_g("pmpf", nodes=32)(0.4) == pytest.approx(make_g("pmpf", nodes=64)(0.4), abs=1e-12)

    def test_lambda_out_of_range(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            make_g("pmpf")(1.5)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown G kind"):
            make_g("ppff")
