"""Discrete identity suite over every fixture domain."""

import pytest

from src.observables.suite import load_fixture, verify_identities
from tests.conftest import DOMAINS

pytestmark = pytest.mark.integration

FIXTURE_FILES = sorted(DOMAINS.glob("*.json")) + sorted(DOMAINS.glob("*.yaml"))


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=[p.stem for p in FIXTURE_FILES])
def test_identities_hold(path):
    reports = verify_identities(load_fixture(path), tol=1e-10)
    failed = {report.name: report.max_defect for report in reports if not report.ok}
    assert not failed, f"{path.name}: {failed}"


def test_fixtures_present():
    assert len(FIXTURE_FILES) >= 8
