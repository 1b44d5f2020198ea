"""Reduced-simulator tests: exactness, no-mixing, dense agreement."""

import math

import numpy as np
import pytest

from groverswitch import analytic, dense, reduced
from groverswitch.core import ClassSizes, PhaseSchedule, synthetic_sets

FIG2 = ClassSizes(5, 10, 5, 5000)


def test_init_uniform_values():
    state = reduced.init_uniform(ClassSizes(1, 0, 1, 2))
    assert state.amp_a == pytest.approx(0.5)
    assert state.amp_minus == 0
    assert state.amp_plus == pytest.approx(0.5)
    assert state.amp_ell == pytest.approx(math.sqrt(2) / 2)


def test_init_uniform_all_losing():
    state = reduced.init_uniform(ClassSizes(0, 0, 0, 5))
    assert (state.amp_a, state.amp_minus, state.amp_plus) == (0, 0, 0)
    assert state.amp_ell == pytest.approx(1.0)


def test_init_uniform_norm_headline():
    vec = reduced.init_uniform(FIG2).vector
    assert abs(np.linalg.norm(vec) - 1.0) < 1e-15


def test_oracle_no_winning_amplitude():
    state = reduced.init_uniform(ClassSizes(0, 0, 0, 5))
    assert reduced.apply_oracle(state, "second") == state


def test_oracle_is_involution():
    state = reduced.init_uniform(ClassSizes(2, 1, 3, 6))
    twice = reduced.apply_oracle(reduced.apply_oracle(state, "first"), "first")
    assert np.allclose(twice.vector, state.vector)


def test_oracle_flips_first_set_classes():
    state = reduced.init_uniform(ClassSizes(1, 0, 1, 2))
    flipped = reduced.apply_oracle(state, "first")
    assert flipped.amp_a == pytest.approx(-0.5)
    assert flipped.amp_plus == pytest.approx(0.5)
    assert flipped.amp_ell == pytest.approx(math.sqrt(2) / 2)


def test_oracle_rejects_unknown_selector():
    state = reduced.init_uniform(ClassSizes(1, 0, 1, 2))
    with pytest.raises(ValueError):
        reduced.apply_oracle(state, "third")


def test_diffusion_negates_pivot():
    pivot = reduced.init_uniform(ClassSizes(2, 1, 1, 4))
    assert np.allclose(reduced.apply_diffusion(pivot, pivot).vector, -pivot.vector)


def test_diffusion_fixes_orthogonal_states():
    sizes = ClassSizes(1, 1, 1, 1)
    pivot = reduced.init_uniform(sizes)
    orthogonal = reduced.ReducedState(
        amp_a=0.5, amp_minus=-0.5, amp_plus=0.5, amp_ell=-0.5, sizes=sizes
    )
    assert abs(np.vdot(pivot.vector, orthogonal.vector)) < 1e-15
    out = reduced.apply_diffusion(orthogonal, pivot)
    assert np.allclose(out.vector, orthogonal.vector)


def test_single_step_reaches_certainty_on_four_items():
    sizes = ClassSizes(1, 0, 0, 3)
    trajectory = reduced.run_schedule(sizes, PhaseSchedule(1, 0))
    assert trajectory[-1].p_first == pytest.approx(1.0, abs=1e-14)
    points, _ = dense.run_grover_schedule(4, {0}, {0}, PhaseSchedule(1, 0))
    assert points[-1].p_first == pytest.approx(1.0, abs=1e-14)


def test_diffusion_validates_inputs():
    sizes = ClassSizes(1, 0, 1, 2)
    state = reduced.init_uniform(sizes)
    with pytest.raises(ValueError):
        reduced.apply_diffusion(state, reduced.init_uniform(ClassSizes(1, 0, 1, 3)))


def test_zero_class_amplitude_enforced():
    with pytest.raises(ValueError, match="empty class"):
        reduced.ReducedState(
            amp_a=0.5, amp_minus=0.5, amp_plus=0.5, amp_ell=0.5, sizes=ClassSizes(1, 0, 1, 2)
        )


def test_run_schedule_zero_queries():
    trajectory = reduced.run_schedule(ClassSizes(2, 1, 1, 6), PhaseSchedule(0, 0))
    assert len(trajectory) == 1
    assert trajectory[0].p_second == pytest.approx(3 / 10, abs=1e-15)


def test_second_phase_only_follows_rotation_identity():
    sizes = ClassSizes(3, 0, 2, 95)
    nu = math.asin(math.sqrt(5 / 100))
    trajectory = reduced.run_schedule(sizes, PhaseSchedule(0, 12))
    for j, point in enumerate(trajectory):
        assert point.p_second == pytest.approx(
            math.sin((2 * j + 1) * nu) ** 2, abs=1e-12
        )


def test_headline_shape_matches_dense_at_scaled_sizes():
    sizes = ClassSizes(1, 2, 1, 1000)
    tilde, full = synthetic_sets(sizes)
    for schedule in (PhaseSchedule(5, 9), PhaseSchedule(0, 4), PhaseSchedule(8, 0)):
        r_points = reduced.run_schedule(sizes, schedule)
        d_points, _ = dense.run_grover_schedule(sizes.total, tilde, full, schedule)
        for rp, dp in zip(r_points, d_points):
            assert rp.p_first == pytest.approx(dp.p_first, abs=1e-10)
            assert rp.p_second == pytest.approx(dp.p_second, abs=1e-10)


def test_norm_preserved_along_long_runs():
    rng = np.random.default_rng(5)
    for _ in range(20):
        parts = rng.integers(0, 50, size=4)
        if parts.sum() == 0:
            continue
        sizes = ClassSizes(*map(int, parts))
        schedule = PhaseSchedule(int(rng.integers(0, 40)), int(rng.integers(0, 40)))
        for point in reduced.run_schedule(sizes, schedule):
            assert abs(np.linalg.norm(point.state.vector) - 1.0) < 1e-12


def test_measure_decomposition_uniform_state():
    angles = reduced.measure_decomposition(reduced.init_uniform(FIG2))
    assert angles.epsilon == pytest.approx(0.0, abs=1e-12)


def test_measure_decomposition_containment_chi():
    sizes = ClassSizes(2, 0, 3, 27)
    for k in (1, 2, 3):
        state = reduced.run_schedule(sizes, PhaseSchedule(k, 0))[-1].state
        assert reduced.measure_decomposition(state).chi == pytest.approx(
            math.pi / 2, abs=1e-12
        )


def test_measure_decomposition_matches_analytic_at_headline():
    boundary = reduced.run_schedule(FIG2, PhaseSchedule(5, 0))[-1].state
    measured = reduced.measure_decomposition(boundary)
    alpha, _ = analytic.alpha_after(5, analytic.base_angles(FIG2)[0])
    predicted = analytic.boundary_decomposition(alpha, FIG2)
    assert measured.phi == pytest.approx(predicted.phi, abs=1e-10)
    assert measured.epsilon == pytest.approx(predicted.epsilon, abs=1e-10)
    assert measured.chi == pytest.approx(predicted.chi, abs=1e-10)
    assert measured.alpha == pytest.approx(alpha, abs=1e-10)


@pytest.mark.parametrize("parts,k", [((5, 10, 5, 5000), 5), ((2, 0, 3, 27), 2)])
def test_no_mixing_through_second_phase(parts, k):
    sizes = ClassSizes(*parts)
    j_total = 15
    trajectory = reduced.run_schedule(sizes, PhaseSchedule(k, j_total))
    boundary_split = reduced.symmetric_split(trajectory[k].state)
    sin_eps = math.hypot(boundary_split.perp_w_norm, boundary_split.perp_l_norm)
    if sin_eps < 1e-13:
        pytest.skip("no perpendicular component for this instance")
    chi_sq = boundary_split.perp_w_norm**2 / sin_eps**2
    direction = boundary_split.perp_w / np.linalg.norm(boundary_split.perp_w)
    for j in range(j_total + 1):
        split = reduced.symmetric_split(trajectory[k + j].state)
        step_eps = math.hypot(split.perp_w_norm, split.perp_l_norm)
        assert abs(step_eps - sin_eps) < 1e-11
        assert abs(split.perp_w_norm**2 / step_eps**2 - chi_sq) < 1e-11
        signed = complex(np.vdot(direction, trajectory[k + j].state.vector))
        assert signed.imag == pytest.approx(0.0, abs=1e-13)
        assert signed.real == pytest.approx(
            (-1) ** j * boundary_split.perp_w_norm, abs=1e-11
        )
