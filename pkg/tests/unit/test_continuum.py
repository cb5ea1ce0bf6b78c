"""Unit tests for the continuum boundary-value problem and conformal maps."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.continuum.bc import ContinuumBC, chi, cross_ratio, psi
from src.continuum.closed_forms import closed_form_m0, residue_closed_form
from src.continuum.maps import MobiusMap, RectangleMap, observable_in_domain, quadrature_preimage, transport
from src.continuum.observable import (
    boundary_coefficient,
    closed_basis_coefficients,
    condition_residuals,
    eval_f,
    evaluate_grid,
    h_function,
    residue_R,
    solve_observable,
)
from src.errors import BoundaryConditionError, EvaluationError

SQRT_PI = math.sqrt(math.pi)


class TestContinuumBC:
    """Validation of marked points."""

    @pytest.mark.parametrize(
        "kwargs, message",
        [
            ({"a": (), "b": (0.0,)}, "even number"),
            ({"a": (), "b": (1.0, 0.0)}, "increase strictly"),
            ({"a": (), "b": (0.0, math.inf, 2.0, 3.0), "zeta": (1,)}, "infinity"),
            ({"a": (0.5,), "b": (0.0, 1.0)}, "free arc"),
            ({"a": (), "b": (0.0, 1.0, 2.0, 3.0)}, "signs zeta"),
            ({"a": (), "b": (0.0, 1.0, 2.0, 3.0), "zeta": (2,)}, "signs zeta"),
            ({"a": (2.0, 2.0), "b": (0.0, 1.0)}, "distinct"),
        ],
    )
    def test_invalid_boundary_conditions(self, kwargs, message):
        with pytest.raises(BoundaryConditionError, match=message):
            ContinuumBC(**kwargs)

    def test_last_sign_closes_the_product(self):
        """zeta_k = -zeta_1 ... zeta_{k-1} (-1)^m."""
        bc = ContinuumBC(a=(5.0,), b=(0.0, 1.0, 2.0, 3.0), zeta=(-1,))
        assert bc.zeta_all == (-1, -1)
        assert ContinuumBC(a=(), b=(0.0, 1.0, 2.0, 3.0), zeta=(1,)).zeta_all == (1, -1)

    def test_signs_from_changes(self):
        """A free arc with one spin-change endpoint has zeta = -1."""
        bc = ContinuumBC.from_changes(a=(-1.0,), b=(0.0, 1.0, 2.0, 3.0), changes=[1.0])
        assert bc.zeta == (-1,)

    def test_cross_ratio_with_infinity(self):
        """Factors containing the infinite point cancel."""
        assert cross_ratio(0.0, 1.0, 2.0, math.inf) == pytest.approx(-1.0)

    def test_chi_is_mobius_invariant(self):
        """Cross-ratios of free-arc endpoints survive z -> (2z + 1) / (z + 1)."""
        phi = MobiusMap(2.0, 1.0, 1.0, 1.0)
        b = (0.0, 1.0, 2.0, 3.0)
        original = ContinuumBC(a=(), b=b, zeta=(1,))
        image = ContinuumBC(a=(), b=tuple(phi.boundary(x) for x in b), zeta=(1,))
        assert chi(image, 1, 2) == pytest.approx(chi(original, 1, 2), rel=1e-12)

    def test_psi_is_one_at_the_arc_start(self):
        bc = ContinuumBC(a=(), b=(0.0, 1.0, 2.0, 3.0), zeta=(1,))
        assert psi(bc, 2, 1, 2.0) == pytest.approx(1.0)
        with pytest.raises(ValueError, match="coincides"):
            psi(bc, 2, 1, 1.0)


class TestSolveObservable:
    """The linear system and evaluation of f."""

    def test_single_free_arc(self):
        """m = 0, k = 1: f = 1 / sqrt(pi z (z - 1))."""
        obs = solve_observable(ContinuumBC(a=(), b=(0.0, 1.0)))
        assert obs.polynomial(0.5).real == pytest.approx(1 / SQRT_PI, rel=1e-12)
        assert eval_f(obs, 2.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-12)
        for x in (0.2, 0.5, 0.9):
            assert abs(eval_f(obs, x).real) < 1e-12

    def test_one_change_and_half_line(self):
        """a = 0, free arc [1, inf): f = (z - 2) / (sqrt(pi) z sqrt(1 - z))."""
        obs = solve_observable(ContinuumBC(a=(0.0,), b=(1.0, math.inf)))
        assert eval_f(obs, -1.0) == pytest.approx(3 / (SQRT_PI * math.sqrt(2)), rel=1e-9)
        for z in (0.5 + 1j, -2 + 0.5j, 3 + 2j):
            expected = (z - 2) / (SQRT_PI * z * cmath.sqrt(1 - z))
            assert eval_f(obs, z) == pytest.approx(expected, rel=1e-9), f"z = {z}"

    def test_conditions_are_satisfied(self):
        obs = solve_observable(ContinuumBC(a=(-1.0, 4.0), b=(0.0, 1.0, 2.0, 3.0), zeta=(-1,)))
        assert max(abs(r) for r in condition_residuals(obs)) < 1e-10
        assert obs.condition_number < 1e13

    def test_evaluation_errors(self):
        obs = solve_observable(ContinuumBC(a=(), b=(0.0, 1.0)))
        with pytest.raises(EvaluationError, match="upper half-plane"):
            eval_f(obs, 0.5 - 1j)
        with pytest.raises(EvaluationError, match="marked point"):
            eval_f(obs, 1.0)

    def test_boundary_coefficients(self):
        """|sqrt(pi (z - b_j)) f| tends to 1 at both ends of a single arc."""
        obs = solve_observable(ContinuumBC(a=(), b=(0.0, 1.0)))
        assert boundary_coefficient(obs, 2) == 1.0
        assert boundary_coefficient(obs, 1) == pytest.approx(1.0, rel=1e-12)
        with pytest.raises(ValueError, match="free-arc endpoint"):
            boundary_coefficient(obs, 3)

    def test_residue_needs_a_change(self):
        with pytest.raises(EvaluationError, match="m >= 1"):
            residue_R(ContinuumBC(a=(), b=(0.0, 1.0)))

    def test_h_vanishes_on_fixed_arcs(self):
        obs = solve_observable(ContinuumBC(a=(), b=(0.0, 1.0)))
        assert abs(h_function(obs, -0.5)) < 1e-9
        assert math.isfinite(h_function(obs, 0.5 + 0.5j))

    def test_grid_skips_marked_points(self):
        obs = solve_observable(ContinuumBC(a=(), b=(0.0, 1.0)))
        rows = evaluate_grid(obs, [0.0, 0.5], [0.0], with_h=False)
        assert [row["x"] for row in rows] == [0.5]


@st.composite
def free_arcs_m0(draw):
    """Finite free arcs with gaps of order one and random signs."""
    k = draw(st.integers(min_value=2, max_value=4))
    gaps = draw(st.lists(st.floats(min_value=0.3, max_value=2.0), min_size=2 * k, max_size=2 * k))
    points = []
    x = 0.0
    for gap in gaps:
        x += gap
        points.append(x)
    zeta = draw(st.lists(st.sampled_from([-1, 1]), min_size=k - 1, max_size=k - 1))
    return ContinuumBC(a=(), b=tuple(points), zeta=tuple(zeta))


class TestClosedForms:
    """Closed forms against the linear solver."""

    @settings(max_examples=30, deadline=None)
    @given(free_arcs_m0())
    def test_product_basis_coefficients(self, bc):
        """Ratios p_i / p_k from Cauchy minors match the solved polynomial."""
        solved = closed_basis_coefficients(solve_observable(bc))
        closed = closed_form_m0(bc)
        for i, (p, q) in enumerate(zip(solved, closed)):
            assert p / solved[-1] == pytest.approx(q, rel=1e-7, abs=1e-9), f"coefficient {i + 1}"

    def test_closed_form_needs_m0(self):
        with pytest.raises(ValueError, match="m = 0"):
            closed_form_m0(ContinuumBC(a=(-1.0,), b=(0.0, 1.0)))

    @pytest.mark.parametrize(
        "b, zeta, a1_values",
        [
            ((0.0, 1.0), (), (1.5, 2.0, 4.0)),
            ((0.0, 1.0, 2.0, 3.0), (1,), (3.5, 5.0, 8.0)),
            ((0.0, 1.0, 2.0, 3.0), (-1,), (3.5, 5.0, 8.0)),
            ((0.0, 1.0, 2.0, math.inf), (-1,), (-3.0, -2.0, -0.5)),
            ((0.0, 1.0, 2.0, 3.0), (1,), (-1.0, -2.0, -3.0)),
            ((0.0, 1.0, 2.0, 3.0), (-1,), (-1.0, -2.0, -3.0)),
        ],
    )
    def test_residue_closed_form_up_to_constant(self, b, zeta, a1_values):
        """R / R_closed does not depend on a_1."""
        ratios = []
        for a1 in a1_values:
            bc = ContinuumBC(a=(a1,), b=b, zeta=zeta)
            ratios.append(residue_R(bc) / residue_closed_form(bc))
        for ratio in ratios[1:]:
            assert ratio == pytest.approx(ratios[0], rel=1e-7)

    def test_residue_closed_form_needs_one_change(self):
        with pytest.raises(ValueError, match="m = 1"):
            residue_closed_form(ContinuumBC(a=(), b=(0.0, 1.0)))


class TestMaps:
    """Conformal covariance and the rectangle map."""

    def test_mobius_must_preserve_half_plane(self):
        with pytest.raises(ValueError, match="upper half-plane"):
            MobiusMap(0.0, 1.0, 1.0, 0.0)

    def test_mobius_covariance(self):
        """f_{H,B}(z) = phi'(z)^(1/2) f_{H,phi(B)}(phi(z))."""
        phi = MobiusMap(2.0, 1.0, 1.0, 1.0)
        a, b = (0.5,), (1.0, 2.0)
        direct = solve_observable(ContinuumBC(a=a, b=b))
        mapped = observable_in_domain(phi, a, b)
        for z in (0.3 + 0.7j, 3 + 1j, -0.5 + 0.2j):
            assert transport(mapped, phi, z) == pytest.approx(direct(z), rel=1e-8), f"z = {z}"

    def test_rectangle_marked_points(self):
        rect = RectangleMap(2.0)
        k = math.sqrt(float(rect.parameter))
        assert abs(rect(1.0)) < 1e-12
        assert rect(0.0) == pytest.approx(-1.0)
        assert rect(2.0) == pytest.approx(1.0)
        assert rect(1j) == pytest.approx(-1 / k, rel=1e-9)
        assert rect.boundary(1.0 + 1j) == math.inf

    def test_rectangle_derivative_positive_on_bottom(self):
        rect = RectangleMap(3.0)
        for x in (0.5, 1.5, 2.5):
            root = rect.sqrt_derivative(x)
            assert root.real > 0 and abs(root.imag) < 1e-12

    @pytest.mark.parametrize("z", [0.7 + 0.4j, 1.2 + 0.9j, 0.1 + 0.1j])
    def test_quadrature_inverts_rectangle(self, z):
        rect = RectangleMap(2.0)
        assert quadrature_preimage(rect, rect(z)) == pytest.approx(z, abs=1e-8)

    def test_transport_outside_domain(self):
        rect = RectangleMap(2.0)
        obs = observable_in_domain(rect, (0.5,), (1.5, 1.0 + 1j))
        with pytest.raises(EvaluationError, match="outside"):
            transport(obs, rect, 5.0 + 0.5j)

    def test_rectangle_length_positive(self):
        with pytest.raises(ValueError, match="positive"):
            RectangleMap(0.0)

    def test_top_midpoint_goes_to_infinity(self):
        for length in (1.0, 1.5, 2.0):
            assert RectangleMap(length).boundary(complex(length / 2, 1.0)) == math.inf


H_CASES = [
    ContinuumBC(a=(), b=(0.0, 1.0, 2.0, 3.0), zeta=(1,)),
    ContinuumBC(a=(), b=(0.0, 1.0, 2.0, 3.0), zeta=(-1,)),
    ContinuumBC(a=(4.0,), b=(0.0, 1.0, 2.0, 3.0), zeta=(1,)),
    ContinuumBC(a=(-1.0,), b=(0.0, 1.0, 2.0, 3.0), zeta=(-1,)),
]


def _jump(obs, x: float, w: complex, eps: float) -> float:
    """h just right of x minus h just left of x."""
    return h_function(obs, w, base=x - eps) - h_function(obs, w, base=x + eps)


class TestHInvariants:
    """h is nonnegative and jumps only at the free-arc endpoints."""

    def test_single_arc_closed_form(self):
        """k = 1 on [0, 1]: h(z) = arg((z - 1) / z) / pi."""
        obs = solve_observable(ContinuumBC(a=(), b=(0.0, 1.0)))
        for z in (0.5 + 0.5j, -1 + 2j, 3 + 0.1j, 0.2 + 0.05j):
            assert h_function(obs, z) == pytest.approx(cmath.phase((z - 1) / z) / math.pi, abs=1e-8), f"z = {z}"

    @pytest.mark.parametrize("bc", H_CASES, ids=lambda bc: f"m{bc.m}-zeta{bc.zeta}")
    def test_nonnegative_on_grid(self, bc):
        obs = solve_observable(bc)
        values = [h_function(obs, complex(x, y)) for x in np.linspace(-1.5, 5.5, 8) for y in (0.25, 1.0, 3.0)]
        assert min(values) >= -1e-8

    @pytest.mark.parametrize("bc", H_CASES, ids=lambda bc: f"m{bc.m}-zeta{bc.zeta}")
    def test_jumps_at_marked_points(self, bc):
        """h rises by c_j^2 entering a free arc, falls by the same leaving it, and is continuous at a_i."""
        obs = solve_observable(bc)
        w = 1.5 + 1.0j
        for arc in range(bc.k):
            enter = _jump(obs, bc.b[2 * arc], w, 1e-4)
            leave = _jump(obs, bc.b[2 * arc + 1], w, 1e-4)
            assert enter == pytest.approx(boundary_coefficient(obs, 2 * arc + 1) ** 2, rel=5e-3)
            assert leave == pytest.approx(-boundary_coefficient(obs, 2 * arc + 2) ** 2, rel=5e-3)
            assert enter == pytest.approx(-leave, rel=5e-3)
        scale = max(boundary_coefficient(obs, j) ** 2 for j in range(1, 2 * bc.k + 1))
        for a in bc.a:
            assert abs(_jump(obs, a, w, 1e-3)) < 1e-2 * scale


class TestResidueLimit:
    """f - R / (z - a_1) vanishes linearly at a_1."""

    @pytest.mark.parametrize(
        "bc",
        [
            ContinuumBC(a=(0.0,), b=(1.0, math.inf)),
            ContinuumBC(a=(4.0,), b=(0.0, 1.0, 2.0, 3.0), zeta=(1,)),
            ContinuumBC(a=(-1.0,), b=(0.0, 1.0, 2.0, math.inf), zeta=(-1,)),
        ],
        ids=["half-line", "two-arcs", "five-point"],
    )
    def test_regular_part_is_linear(self, bc):
        obs = solve_observable(bc)
        a1, residue = bc.a[0], residue_R(obs)
        gaps = [abs(eval_f(obs, a1 + 1j * t) - residue / (1j * t)) for t in (1e-1, 1e-2, 1e-3)]
        assert gaps[0] / gaps[1] > 5
        assert gaps[1] / gaps[2] > 5

    def test_half_line_slope(self):
        """a = 0, free arc [1, inf): the regular part is -z / (4 sqrt(pi)) to first order."""
        obs = solve_observable(ContinuumBC(a=(0.0,), b=(1.0, math.inf)))
        residue = residue_R(obs)
        t = 1e-3
        gap = eval_f(obs, 1j * t) - residue / (1j * t)
        assert gap == pytest.approx(-1j * t / (4 * SQRT_PI), rel=1e-2)


def _random_points(rng: np.random.Generator, count: int) -> tuple:
    return tuple(np.cumsum(rng.uniform(0.3, 2.0, size=count)))


class TestRandomClosedForms:
    """Seeded sweep of the closed forms over k <= 4."""

    def test_m0_coefficients(self):
        rng = np.random.default_rng(2024)
        for trial in range(100):
            k = int(rng.integers(1, 5))
            bc = ContinuumBC(a=(), b=_random_points(rng, 2 * k), zeta=tuple(rng.choice([-1, 1], size=k - 1)))
            solved = closed_basis_coefficients(solve_observable(bc))
            closed = closed_form_m0(bc)
            for p, q in zip(solved, closed):
                assert p / solved[-1] == pytest.approx(q, rel=1e-8, abs=1e-10), f"trial {trial}: {bc}"

    def test_m1_residue(self):
        rng = np.random.default_rng(2025)
        for trial in range(100):
            k = int(rng.integers(1, 5))
            b = _random_points(rng, 2 * k)
            zeta = tuple(rng.choice([-1, 1], size=k - 1))
            ratios = []
            for offset in (0.5, 1.5, 3.0):
                bc = ContinuumBC(a=(b[-1] + offset,), b=b, zeta=zeta)
                ratios.append(residue_R(bc) / residue_closed_form(bc))
            for ratio in ratios[1:]:
                assert ratio == pytest.approx(ratios[0], rel=1e-8), f"trial {trial}: b = {b}, zeta = {zeta}"
