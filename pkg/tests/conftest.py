"""Shared pytest fixtures for the Ising lab test suite."""

from pathlib import Path

import pytest

from src.lattice.boundary import boundary_arcs
from src.lattice.domain import build_domain
from src.models.domain import DomainSpec
from src.observables.suite import load_fixture

FIXTURES = Path(__file__).parent / "fixtures"
DOMAINS = FIXTURES / "domains"


def rectangle_bc(width: int, height: int, arcs: list):
    """Boundary conditions on a width x height rectangle from arc dicts."""
    spec = DomainSpec.model_validate({"rect": [width, height], "arcs": arcs})
    return boundary_arcs(build_domain(spec), spec.arcs)


def wired_sides_bc(width: int, height: int):
    """Free bottom and top, wired right and left sides."""
    return rectangle_bc(
        width,
        height,
        [
            {"label": "free", "from": [0, 0], "to": [width, 0]},
            {"label": "plus", "from": [width, 0], "to": [width, height]},
            {"label": "free", "from": [width, height], "to": [0, height]},
            {"label": "plus", "from": [0, height], "to": [0, 0]},
        ],
    )


@pytest.fixture
def domains_dir() -> Path:
    return DOMAINS


@pytest.fixture
def square_bc():
    """Single face, minus on the lower-right half, plus on the rest."""
    return load_fixture(DOMAINS / "square1_pm.json")


@pytest.fixture
def domino_bc():
    """Two faces with +/-/free boundary conditions."""
    return load_fixture(DOMAINS / "domino_pmf.json")


@pytest.fixture
def rect_pmf_bc():
    """3 x 3 square with +/-/free boundary conditions."""
    return load_fixture(DOMAINS / "rect3x3_pmf.json")


@pytest.fixture
def fk_bc():
    """4 x 3 rectangle with wired sides."""
    return load_fixture(FIXTURES / "fk" / "rect4x3_wired_sides.json")
