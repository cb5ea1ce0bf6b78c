"""Drift of the driving process: closed forms against the numerical residue."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.continuum.bc import ContinuumBC
from src.continuum.closed_forms import (
    drift,
    five_point_drift,
    four_point_drift,
    residue_closed_form,
    three_point_drift,
)
from src.errors import EvaluationError

gap = st.floats(min_value=0.2, max_value=4.0)


class TestThreePoint:
    """+/-/free: one sign change and one free arc."""

    @settings(max_examples=25, deadline=None)
    @given(gap, gap)
    def test_matches_numeric(self, left, width):
        a1, b1, b2 = -left, 0.0, width
        numeric = drift(ContinuumBC(a=(a1,), b=(b1, b2)))
        assert numeric == pytest.approx(three_point_drift(a1, b1, b2), rel=1e-6)

    def test_closed_residue_gives_same_drift(self):
        """The a_1-independent factor drops out of the log-derivative."""
        bc = ContinuumBC(a=(-1.0,), b=(0.0, 1.0, 2.0, 3.0), zeta=(1,))
        assert drift(bc, residue=residue_closed_form) == pytest.approx(drift(bc), rel=1e-6)


class TestFourPoint:
    """+/-/+/free with the free arc running to infinity."""

    def test_spot_value(self):
        assert four_point_drift(0.0, 1.0, 2.0) == pytest.approx(2.75)
        assert drift(ContinuumBC(a=(0.0, 1.0), b=(2.0, math.inf))) == pytest.approx(2.75, rel=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(gap, gap)
    def test_matches_numeric(self, spacing, distance):
        a2, a1 = -spacing - distance, -distance
        numeric = drift(ContinuumBC(a=(a1, a2), b=(0.0, math.inf)))
        assert numeric == pytest.approx(four_point_drift(a1, a2, 0.0), rel=1e-6)

    def test_attracted_to_the_other_change(self):
        """Near a_2 the drift points at a_2."""
        a2 = -1.0
        for a1 in (a2 + 0.01, a2 - 0.01):
            value = four_point_drift(a1, a2, 0.0)
            assert math.copysign(1.0, value) == math.copysign(1.0, a2 - a1)


class TestFivePoint:
    """+/-/free/+/free with b_4 at infinity and zeta = -1."""

    def test_spot_value(self):
        expected = 2.75 - 3.0 / (3.0 + math.sqrt(2.0))
        assert five_point_drift(-1.0, 0.0, 1.0, 2.0) == pytest.approx(expected)
        bc = ContinuumBC(a=(-1.0,), b=(0.0, 1.0, 2.0, math.inf), zeta=(-1,))
        assert drift(bc) == pytest.approx(expected, rel=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(gap, gap, gap, gap)
    def test_matches_numeric(self, left, first, between, second):
        b1 = 0.0
        a1 = b1 - left
        b2 = b1 + first
        b3 = b2 + between
        bc = ContinuumBC(a=(a1,), b=(b1, b2, b3, math.inf), zeta=(-1,))
        assert drift(bc) == pytest.approx(five_point_drift(a1, b1, b2, b3), rel=1e-6)


class TestDriftErrors:
    def test_needs_a_change(self):
        with pytest.raises(EvaluationError, match="m >= 1"):
            drift(ContinuumBC(a=(), b=(0.0, 1.0)))

    def test_step_underflow(self):
        with pytest.raises(EvaluationError, match="underflow"):
            drift(ContinuumBC(a=(-1e-15,), b=(0.0, 1.0)))
