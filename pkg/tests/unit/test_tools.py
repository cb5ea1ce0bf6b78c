"""Unit tests for the async MCP tool functions."""

import math
import os
from unittest.mock import patch

import pytest

from src.errors import BoundaryConditionError, SourceError
from src.tools.continuum import evaluate_continuum_observable
from src.tools.crossing import evaluate_crossing
from src.tools.drift import compute_drift
from src.tools.partition import compute_partition_function
from tests.conftest import DOMAINS


class TestComputePartitionFunction:
    async def test_fixture_name_resolves_under_fixtures(self):
        with patch.dict(os.environ, {"IFL_FIXTURES": str(DOMAINS)}):
            result = await compute_partition_function("square1_pm.json")
        assert result["z"] == pytest.approx(18 - 12 * math.sqrt(2))
        assert result["config_count"] == 2
        assert result["wall_time"] >= 0

    async def test_absolute_path_with_sources(self):
        result = await compute_partition_function(
            str(DOMAINS / "square1_pm.json"), sources=["vertex(0,0)", "vertex(1,0)"]
        )
        x = math.sqrt(2) - 1
        assert result["z"] == pytest.approx(x + x**3)

    async def test_missing_domain(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            await compute_partition_function(str(tmp_path / "nowhere.json"))

    async def test_odd_sources(self):
        with pytest.raises(SourceError):
            await compute_partition_function(str(DOMAINS / "square1_pm.json"), sources=["vertex(0,0)"])


class TestEvaluateContinuumObservable:
    async def test_single_arc_values(self):
        result = await evaluate_continuum_observable(b=[0.0, 1.0], points=[[2.0, 0.0], [0.5, 1.0]])
        first, second = result["values"]
        assert first["re"] == pytest.approx(1 / math.sqrt(2 * math.pi))
        assert first["h"] is None
        assert math.isfinite(second["h"])
        assert result["residue"] is None

    async def test_residue_reported(self):
        result = await evaluate_continuum_observable(b=[1.0, math.inf], points=[[-1.0, 0.0]], a=[0.0])
        assert result["residue"] != 0
        assert result["values"][0]["re"] == pytest.approx(3 / (math.sqrt(math.pi) * math.sqrt(2)), rel=1e-9)

    async def test_bad_boundary_data(self):
        with pytest.raises(BoundaryConditionError):
            await evaluate_continuum_observable(b=[1.0, 0.0], points=[[0.0, 1.0]])


class TestComputeDrift:
    async def test_closed_form_reported(self):
        result = await compute_drift(a=[0.0, 1.0], b=[2.0, math.inf])
        assert result["closed_form"] == pytest.approx(2.75)
        assert result["drift"] == pytest.approx(2.75, rel=1e-6)

    async def test_no_closed_form(self):
        result = await compute_drift(a=[-1.0], b=[0.0, 1.0, 2.0, 3.0], zeta=[1])
        assert result["closed_form"] is None
        assert math.isfinite(result["drift"])


class TestEvaluateCrossing:
    async def test_fk_query(self):
        result = await evaluate_crossing("fk", points=[-3.0, -1.0, 1.0, 3.0], subset=[1, 2])
        assert 0 < result["value"] < 1
        assert set(result["ratios"]) == {"++", "-+"}

    async def test_spin_query(self):
        result = await evaluate_crossing("spin", kind="pmpm", lam=0.5)
        assert result["minus"] == pytest.approx(0.5, abs=1e-12)
        assert result["plus"] + result["minus"] == pytest.approx(1.0)

    async def test_missing_arguments(self):
        with pytest.raises(ValueError, match="points and subset"):
            await evaluate_crossing("fk", points=[0.0, 1.0])
        with pytest.raises(ValueError, match="lam"):
            await evaluate_crossing("spin")
