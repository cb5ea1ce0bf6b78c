"""Unit tests for environment-driven configuration."""

import math
import os
from pathlib import Path
from unittest.mock import patch

import pytest

from src import config


class TestDefaults:
    """Constants of the critical model."""

    def test_critical_weight(self):
        """x = sqrt(2) - 1 and the derived strand weights."""
        assert config.CRITICAL_X == pytest.approx(math.sqrt(2) - 1)
        assert config.SQRT_X**2 == pytest.approx(config.CRITICAL_X)
        assert config.CORNER_WEIGHT == pytest.approx(config.SQRT_X * math.cos(math.pi / 8))

    def test_default_fixtures_point_at_test_domains(self):
        """The default fixture directory is the repository's domain fixtures."""
        path = Path(config.DEFAULT_FIXTURES)
        assert path.parts[-3:] == ("tests", "fixtures", "domains")


class TestGetters:
    """IFL_* environment overrides."""

    @patch.dict(os.environ, {}, clear=True)
    def test_getters_fall_back_to_defaults(self):
        """Without environment variables every getter returns its default."""
        assert config.get_enum_cap() == config.DEFAULT_ENUM_CAP
        assert config.get_tolerance() == config.DEFAULT_TOL
        assert config.get_seed() == config.DEFAULT_SEED
        assert config.get_dt() == config.DEFAULT_DT
        assert config.get_horizon() == config.DEFAULT_HORIZON
        assert config.get_jacobi_nodes() == config.DEFAULT_JACOBI_NODES
        assert config.get_log_level() == "WARNING"

    @patch.dict(
        os.environ,
        {
            "IFL_ENUM_CAP": "20",
            "IFL_TOL": "1e-6",
            "IFL_SEED": "7",
            "IFL_DT": "0.001",
            "IFL_SWALLOW_EPS": "1e-3",
            "IFL_DRIFT_CAP": "50",
            "IFL_HORIZON": "2.5",
            "IFL_JACOBI_NODES": "32",
            "IFL_MC_BURN_IN": "10",
            "IFL_MC_THIN": "2",
            "IFL_LOG_LEVEL": "debug",
        },
    )
    def test_getters_read_environment(self):
        """Values are parsed to the getter's type."""
        assert config.get_enum_cap() == 20
        assert config.get_tolerance() == 1e-6
        assert config.get_seed() == 7
        assert config.get_dt() == 0.001
        assert config.get_swallow_eps() == 1e-3
        assert config.get_drift_cap() == 50.0
        assert config.get_horizon() == 2.5
        assert config.get_jacobi_nodes() == 32
        assert config.get_mc_burn_in() == 10
        assert config.get_mc_thin() == 2
        assert config.get_log_level() == "DEBUG"

    def test_fixtures_path_override(self, tmp_path):
        """IFL_FIXTURES replaces the fixture directory."""
        with patch.dict(os.environ, {"IFL_FIXTURES": str(tmp_path)}):
            assert config.get_fixtures_path() == tmp_path

    @patch.dict(os.environ, {"IFL_SEED": "not-a-number"})
    def test_malformed_value_raises(self):
        """Malformed numbers surface as ValueError."""
        with pytest.raises(ValueError):
            config.get_seed()
